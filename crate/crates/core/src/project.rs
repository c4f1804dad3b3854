//! Project directories, `project.conf` and the four workflow steps.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use rand::Rng;
use thiserror::Error;

use crate::codegen::{render_files, write_codegen_report, CodegenError};
use crate::kb::{KbError, KnowledgeBase};
use crate::predicate::{
    lint_blocks, lint_model, parse_mapping_blocks, parse_predicates, Lint, MappingBlock,
    ModelConstruct, ParseError,
};
use crate::search::{pso_search, PsoParams, SearchError};
use crate::transform::{
    read_predicates_file, transform_all, write_predicates_file, ConstructOutcome, TransformReport,
};

pub const CONF_FILE: &str = "project.conf";
pub const INPUT_DIR: &str = "Input";
pub const PREDICATES_DIR: &str = "Output/Code Predicates";
pub const JAVA_DIR: &str = "Output/Java Code";
pub const PREDICATES_FILE: &str = "Predicates";
pub const README_FILE: &str = "readme";
/// Per-iteration global best written next to `Predicates`.
pub const TRACE_FILE: &str = "gbest.trace";

#[derive(Debug, Error)]
pub enum ProjectError {
    #[error("project exists at {0}")]
    Exists(PathBuf),
    #[error("no project at {0} (missing {CONF_FILE})")]
    NotAProject(PathBuf),
    #[error("{0}")]
    Usage(String),
    #[error("{file}: {source}")]
    Parse { file: String, source: ParseError },
    #[error("{CONF_FILE} line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("{0}")]
    Kb(#[from] KbError),
    #[error("{0}")]
    Codegen(#[from] CodegenError),
    #[error("no training data: run import-training first")]
    NoTrainingData,
    #[error("no input models: run import-models first")]
    NoInputModels,
    #[error("no predicates: run transform first")]
    RunTransformFirst,
    #[error("{0}")]
    Search(#[from] SearchError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

impl ProjectError {
    /// Process exit code: 1 usage, 2 parse error, 3 pipeline-order error.
    pub fn exit_code(&self) -> i32 {
        match self {
            ProjectError::Parse { .. }
            | ProjectError::Config { .. }
            | ProjectError::Kb(KbError::DuplicateBlock(_))
            | ProjectError::Codegen(_) => 2,
            ProjectError::NoTrainingData
            | ProjectError::NoInputModels
            | ProjectError::RunTransformFirst
            | ProjectError::Kb(KbError::Empty)
            | ProjectError::Search(SearchError::EmptyModel | SearchError::EmptyKb) => 3,
            _ => 1,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> ProjectError + '_ {
    move |source| ProjectError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Contents of `project.conf`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectConfig {
    pub name: String,
    pub pso: PsoParams,
    /// `None` draws a fresh seed per run.
    pub seed: Option<u64>,
    pub theta: f64,
    /// Project-relative paths of imported training files.
    pub training: Vec<String>,
    /// Project-relative path of the imported model file.
    pub model: Option<String>,
}

pub const DEFAULT_THETA: f64 = 0.5;

impl ProjectConfig {
    pub fn new(name: &str) -> Self {
        ProjectConfig {
            name: name.to_string(),
            pso: PsoParams::default(),
            seed: None,
            theta: DEFAULT_THETA,
            training: Vec::new(),
            model: None,
        }
    }

    pub fn parse(text: &str) -> Result<Self, ProjectError> {
        let mut conf = ProjectConfig::new("");
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| ProjectError::Config {
                line: line_no,
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err("expected key = value".to_string()))?;
            let (key, value) = (key.trim(), value.trim());
            fn num<T: std::str::FromStr>(
                key: &str,
                value: &str,
                err: impl Fn(String) -> ProjectError,
            ) -> Result<T, ProjectError> {
                value
                    .parse()
                    .map_err(|_| err(format!("invalid value `{value}` for {key}")))
            }
            match key {
                "name" => conf.name = value.to_string(),
                "swarm" => conf.pso.swarm_size = num(key, value, err)?,
                "iterations" => conf.pso.iterations = num(key, value, err)?,
                "inertia" => conf.pso.inertia = num(key, value, err)?,
                "cognitive" => conf.pso.cognitive = num(key, value, err)?,
                "social" => conf.pso.social = num(key, value, err)?,
                "v_max" => conf.pso.v_max = Some(num(key, value, err)?),
                "seed" => conf.seed = Some(num(key, value, err)?),
                "theta" => {
                    let theta: f64 = num(key, value, err)?;
                    if !(theta > 0.0 && theta <= 1.0) {
                        return Err(err(format!("theta must lie in (0, 1], got {value}")));
                    }
                    conf.theta = theta;
                }
                "training" => conf.training.push(value.to_string()),
                "model" => conf.model = Some(value.to_string()),
                other => return Err(err(format!("unknown key `{other}`"))),
            }
        }
        Ok(conf)
    }

    pub fn render(&self) -> String {
        let mut out = String::from("# CodS project configuration\n");
        let _ = writeln!(out, "name = {}", self.name);
        let _ = writeln!(out, "swarm = {}", self.pso.swarm_size);
        let _ = writeln!(out, "iterations = {}", self.pso.iterations);
        let _ = writeln!(out, "inertia = {}", self.pso.inertia);
        let _ = writeln!(out, "cognitive = {}", self.pso.cognitive);
        let _ = writeln!(out, "social = {}", self.pso.social);
        if let Some(v) = self.pso.v_max {
            let _ = writeln!(out, "v_max = {v}");
        }
        let _ = writeln!(out, "theta = {}", self.theta);
        match self.seed {
            Some(seed) => {
                let _ = writeln!(out, "seed = {seed}");
            }
            None => out.push_str("# seed = <unset: a fresh seed is drawn per run>\n"),
        }
        for t in &self.training {
            let _ = writeln!(out, "training = {t}");
        }
        if let Some(m) = &self.model {
            let _ = writeln!(out, "model = {m}");
        }
        out
    }
}

/// Command-line overrides for one transform run.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub swarm: Option<usize>,
    pub iterations: Option<usize>,
    pub theta: Option<f64>,
}

#[derive(Debug)]
pub struct ModelImport {
    pub constructs: usize,
    pub warnings: Vec<String>,
}

#[derive(Debug)]
pub struct TransformRun {
    pub report: TransformReport,
    pub outcomes: Vec<ConstructOutcome>,
    pub per_iteration_best: Vec<f64>,
    pub seed: u64,
    pub lints: Vec<Lint>,
}

#[derive(Debug, Clone)]
pub struct Project {
    root: PathBuf,
}

fn read(path: &Path) -> Result<String, ProjectError> {
    fs::read_to_string(path).map_err(io_err(path))
}

fn write(path: &Path, content: &str) -> Result<(), ProjectError> {
    fs::write(path, content).map_err(io_err(path))
}

fn file_name(path: &Path) -> Result<String, ProjectError> {
    path.file_name()
        .and_then(|n| n.to_str())
        .map(str::to_string)
        .ok_or_else(|| ProjectError::Usage(format!("not a file path: {}", path.display())))
}

/// One line per entry: `<iteration> <fitness>`, iteration 0 being the
/// initial evaluation. Fitness uses the shortest round-tripping decimal.
pub fn render_trace(trace: &[f64]) -> String {
    let mut out = String::new();
    for (i, f) in trace.iter().enumerate() {
        out.push_str(&format!("{i} {f}\n"));
    }
    out
}

/// Parses a trace written by [`render_trace`].
pub fn parse_trace(text: &str) -> Option<Vec<f64>> {
    text.lines()
        .enumerate()
        .map(|(i, line)| {
            let (n, f) = line.split_once(' ')?;
            (n.parse::<usize>().ok()? == i).then_some(())?;
            f.parse().ok()
        })
        .collect()
}

impl Project {
    /// Creates `parent/name` with the input/output skeleton and a default
    /// `project.conf`.
    pub fn create(name: &str, parent: &Path) -> Result<Self, ProjectError> {
        if name.is_empty() || name.contains(['/', '\\']) {
            return Err(ProjectError::Usage(format!(
                "invalid project name `{name}`"
            )));
        }
        let root = parent.join(name);
        if root.exists() {
            return Err(ProjectError::Exists(root));
        }
        for dir in [INPUT_DIR, PREDICATES_DIR, JAVA_DIR] {
            let d = root.join(dir);
            fs::create_dir_all(&d).map_err(io_err(&d))?;
        }
        write(&root.join(CONF_FILE), &ProjectConfig::new(name).render())?;
        Ok(Project { root })
    }

    pub fn open(root: &Path) -> Result<Self, ProjectError> {
        if !root.join(CONF_FILE).is_file() {
            return Err(ProjectError::NotAProject(root.to_path_buf()));
        }
        Ok(Project {
            root: root.to_path_buf(),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn config(&self) -> Result<ProjectConfig, ProjectError> {
        ProjectConfig::parse(&read(&self.root.join(CONF_FILE))?)
    }

    fn save_config(&self, conf: &ProjectConfig) -> Result<(), ProjectError> {
        write(&self.root.join(CONF_FILE), &conf.render())
    }

    fn load_blocks(&self, rel: &str) -> Result<Vec<MappingBlock>, ProjectError> {
        parse_mapping_blocks(&read(&self.root.join(rel))?).map_err(|source| ProjectError::Parse {
            file: rel.to_string(),
            source,
        })
    }

    fn load_model(&self, rel: &str) -> Result<Vec<ModelConstruct>, ProjectError> {
        parse_predicates(&read(&self.root.join(rel))?).map_err(|source| ProjectError::Parse {
            file: rel.to_string(),
            source,
        })
    }

    /// Builds the knowledge base from every imported training file.
    pub fn knowledge_base(&self) -> Result<(KnowledgeBase, Vec<Lint>), ProjectError> {
        let conf = self.config()?;
        if conf.training.is_empty() {
            return Err(ProjectError::NoTrainingData);
        }
        let mut blocks = Vec::new();
        for rel in &conf.training {
            blocks.extend(self.load_blocks(rel)?);
        }
        let lints = lint_blocks(&blocks);
        Ok((KnowledgeBase::build(blocks)?, lints))
    }

    /// Validates and copies training files into `Input/`; returns the block
    /// count of the whole imported set. Nothing is copied if any file fails.
    pub fn import_training(&self, files: &[PathBuf]) -> Result<usize, ProjectError> {
        if files.is_empty() {
            return Err(ProjectError::Usage(
                "no training data: no files given".into(),
            ));
        }
        let mut conf = self.config()?;
        let mut ids = std::collections::HashSet::new();
        for rel in &conf.training {
            ids.extend(self.load_blocks(rel)?.into_iter().map(|b| b.id));
        }
        let mut staged = Vec::new();
        for path in files {
            let name = file_name(path)?;
            let rel = format!("{INPUT_DIR}/{name}");
            if conf.training.contains(&rel)
                || conf.model.as_ref() == Some(&rel)
                || staged.iter().any(|(r, _)| *r == rel)
            {
                return Err(ProjectError::Usage(format!("{name} is already imported")));
            }
            let text = read(path)?;
            let blocks = parse_mapping_blocks(&text).map_err(|source| ProjectError::Parse {
                file: path.display().to_string(),
                source,
            })?;
            for b in &blocks {
                if !ids.insert(b.id) {
                    return Err(KbError::DuplicateBlock(b.id).into());
                }
            }
            staged.push((rel, text));
        }
        for (rel, text) in staged {
            write(&self.root.join(&rel), &text)?;
            conf.training.push(rel);
        }
        self.save_config(&conf)?;
        Ok(ids.len())
    }

    /// Copies the single model file into `Input/`, replacing any earlier one.
    pub fn import_models(&self, files: &[PathBuf]) -> Result<ModelImport, ProjectError> {
        let [path] = files else {
            return Err(ProjectError::Usage(format!(
                "all input models must be in exactly one file, got {}",
                files.len()
            )));
        };
        let mut conf = self.config()?;
        let name = file_name(path)?;
        let rel = format!("{INPUT_DIR}/{name}");
        if conf.training.contains(&rel) {
            return Err(ProjectError::Usage(format!(
                "{name} is already imported as training data"
            )));
        }
        let text = read(path)?;
        let constructs = parse_predicates(&text).map_err(|source| ProjectError::Parse {
            file: path.display().to_string(),
            source,
        })?;
        let mut warnings: Vec<String> = lint_model(&constructs)
            .iter()
            .map(Lint::to_string)
            .collect();
        if constructs.is_empty() {
            warnings.push(format!("{name} contains no model constructs"));
        }
        if let Some(old) = conf.model.replace(rel.clone()) {
            warnings.push(format!("replacing previously imported model {old}"));
            if old != rel {
                let old_path = self.root.join(&old);
                if old_path.exists() {
                    fs::remove_file(&old_path).map_err(io_err(&old_path))?;
                }
            }
        }
        write(&self.root.join(&rel), &text)?;
        self.save_config(&conf)?;
        Ok(ModelImport {
            constructs: constructs.len(),
            warnings,
        })
    }

    /// Step 3: search, transform, and write `Predicates` plus the report.
    pub fn run_transform(&self, overrides: &Overrides) -> Result<TransformRun, ProjectError> {
        let conf = self.config()?;
        let model_rel = conf.model.clone().ok_or(ProjectError::NoInputModels)?;
        if conf.training.is_empty() {
            return Err(ProjectError::NoTrainingData);
        }
        let constructs = self.load_model(&model_rel)?;
        if constructs.is_empty() {
            return Err(ProjectError::NoInputModels);
        }
        let (kb, mut lints) = self.knowledge_base()?;
        lints.extend(lint_model(&constructs));

        let seed = overrides
            .seed
            .or(conf.seed)
            .unwrap_or_else(|| rand::rng().random());
        let mut params = conf.pso.clone();
        params.seed = seed;
        if let Some(s) = overrides.swarm {
            params.swarm_size = s;
        }
        if let Some(i) = overrides.iterations {
            params.iterations = i;
        }
        let theta = overrides.theta.unwrap_or(conf.theta);
        if !(theta > 0.0 && theta <= 1.0) {
            return Err(ProjectError::Usage(format!(
                "theta must lie in (0, 1], got {theta}"
            )));
        }

        let outcome = pso_search(&constructs, &kb, &params)?;
        let (outcomes, report) = transform_all(&constructs, &outcome, &kb, theta);
        let dir = self.root.join(PREDICATES_DIR);
        fs::create_dir_all(&dir).map_err(io_err(&dir))?;
        write(
            &dir.join(PREDICATES_FILE),
            &write_predicates_file(&outcomes),
        )?;
        write(&dir.join(README_FILE), &report.to_string())?;
        write(
            &dir.join(TRACE_FILE),
            &render_trace(&outcome.per_iteration_best),
        )?;
        Ok(TransformRun {
            report,
            outcomes,
            per_iteration_best: outcome.per_iteration_best,
            seed,
            lints,
        })
    }

    /// Step 4: render Java files from the `Predicates` file alone.
    pub fn run_generate(&self) -> Result<Vec<String>, ProjectError> {
        let pred_path = self.root.join(PREDICATES_DIR).join(PREDICATES_FILE);
        if !pred_path.is_file() {
            return Err(ProjectError::RunTransformFirst);
        }
        let file =
            read_predicates_file(&read(&pred_path)?).map_err(|source| ProjectError::Parse {
                file: format!("{PREDICATES_DIR}/{PREDICATES_FILE}"),
                source,
            })?;
        let (files, report) = render_files(&file.predicates, &file.flagged)?;

        let dir = self.root.join(JAVA_DIR);
        fs::create_dir_all(&dir).map_err(io_err(&dir))?;
        for entry in fs::read_dir(&dir).map_err(io_err(&dir))? {
            let path = entry.map_err(io_err(&dir))?.path();
            if path.extension().is_some_and(|e| e == "java") {
                fs::remove_file(&path).map_err(io_err(&path))?;
            }
        }
        for f in &files {
            write(&dir.join(&f.filename), &f.content)?;
        }
        write(&dir.join(README_FILE), &write_codegen_report(&report))?;
        Ok(files.into_iter().map(|f| f.filename).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_round_trips() {
        let t = vec![0.5, 2.0 / 3.0, 1.0];
        let text = render_trace(&t);
        assert_eq!(text.lines().next(), Some("0 0.5"));
        assert_eq!(parse_trace(&text), Some(t));
        assert_eq!(parse_trace("1 0.5\n"), None);
    }

    #[test]
    fn default_config_round_trips() {
        let conf = ProjectConfig::new("ecs");
        let text = conf.render();
        assert!(text.contains("swarm = 30\n"));
        assert!(text.contains("iterations = 200\n"));
        assert!(text.contains("theta = 0.5\n"));
        assert!(!text.lines().any(|l| l.starts_with("seed")));
        assert_eq!(ProjectConfig::parse(&text).unwrap(), conf);
    }

    #[test]
    fn config_errors() {
        assert!(matches!(
            ProjectConfig::parse("swarm = many"),
            Err(ProjectError::Config { line: 1, .. })
        ));
        assert!(matches!(
            ProjectConfig::parse("# c\ncolour = red"),
            Err(ProjectError::Config { line: 2, .. })
        ));
        assert!(ProjectConfig::parse("theta = 0").is_err());
        let c = ProjectConfig::parse(
            "seed = 42\nv_max = 3.5\ntraining = Input/a.txt\ntraining = Input/b.txt",
        )
        .unwrap();
        assert_eq!(c.seed, Some(42));
        assert_eq!(c.pso.v_max, Some(3.5));
        assert_eq!(c.training.len(), 2);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(ProjectError::Usage("x".into()).exit_code(), 1);
        assert_eq!(ProjectError::RunTransformFirst.exit_code(), 3);
        assert_eq!(ProjectError::NoInputModels.exit_code(), 3);
        assert_eq!(
            ProjectError::Kb(KbError::DuplicateBlock(crate::predicate::BlockId(3))).exit_code(),
            2
        );
    }
}
