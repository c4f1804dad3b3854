//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero when any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use cods::codegen::{Reason, SourceFile};
use cods::corpus::{self, ECS_BLOCKS, ECS_CONSTRUCTS};
use cods::project::{
    parse_trace, JAVA_DIR, PREDICATES_DIR, PREDICATES_FILE, README_FILE, TRACE_FILE,
};
use cods::search::DEFAULT_BRUTE_FORCE_CAP;
use cods::transform::{read_predicates_file, write_predicates_file};
use cods::{
    brute_force_oracle, fitness, greedy_oracle, parse_mapping_blocks, parse_predicates, pso_search,
    render_files, serialize_mapping_blocks, serialize_predicate, transform_all, Assignment,
    KnowledgeBase, Overrides, Project, PsoParams, Status,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($fmt)+));
        }
    };
}

fn cods_bin() -> &'static str {
    env!("CARGO_BIN_EXE_cods")
}

fn run_cods(project: &Path, args: &[&str]) -> Result<std::process::Output, String> {
    let out = Command::new(cods_bin())
        .arg("--project")
        .arg(project)
        .args(args)
        .output()
        .map_err(|e| format!("cannot run cods: {e}"))?;
    if !out.status.success() {
        return Err(format!(
            "cods {} failed: {}",
            args.join(" "),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(out)
}

/// Creates a project and imports the given training and model files through
/// the command line.
fn cli_project(parent: &Path, training: &[PathBuf], model: &Path) -> Result<PathBuf, String> {
    let out = Command::new(cods_bin())
        .args(["new", "proj", "--path"])
        .arg(parent)
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(out.status.success(), "cods new failed");
    let root = parent.join("proj");
    let mut args = vec!["import-training".to_string()];
    args.extend(training.iter().map(|p| p.display().to_string()));
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    run_cods(&root, &args)?;
    run_cods(&root, &["import-models", &model.display().to_string()])?;
    Ok(root)
}

fn write_ecs(dir: &Path) -> (Vec<PathBuf>, PathBuf) {
    let c = corpus::ecs();
    let training = c
        .training_files
        .iter()
        .map(|(name, text)| {
            let p = dir.join(name);
            fs::write(&p, text).unwrap();
            p
        })
        .collect();
    let model = dir.join(&c.model_name);
    fs::write(&model, &c.model).unwrap();
    (training, model)
}

fn criterion_1_table_reproduction() -> Outcome {
    let c = corpus::ecs();
    let blocks: Vec<_> = c
        .training_files
        .iter()
        .flat_map(|(_, t)| parse_mapping_blocks(t).unwrap())
        .collect();
    let constructs = parse_predicates(&c.model).unwrap();
    let kb = KnowledgeBase::build(blocks).unwrap();
    ensure!(
        kb.block_count() == ECS_BLOCKS,
        "{} blocks",
        kb.block_count()
    );
    ensure!(
        constructs.len() == ECS_CONSTRUCTS,
        "{} constructs",
        constructs.len()
    );

    // corpus shape, by the independent oracles
    let uncovered: Vec<_> = constructs
        .iter()
        .filter(|x| {
            !kb.blocks()
                .iter()
                .any(|b| common::oracle_block_exact(&x.predicate, b))
        })
        .collect();
    ensure!(
        uncovered.len() == 8,
        "{} constructs lack an exact match",
        uncovered.len()
    );
    let near = uncovered
        .iter()
        .filter(|x| common::oracle_best_score(&x.predicate, &kb) >= 0.5)
        .count();
    ensure!(near == 5, "{near} uncovered constructs score >= 0.5");

    // the seeded run, through the project pipeline
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (training, model) = write_ecs(tmp.path());
    let project = Project::create("ecs", tmp.path()).map_err(|e| e.to_string())?;
    project
        .import_training(&training)
        .map_err(|e| e.to_string())?;
    project.import_models(&[model]).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let run = project
        .run_transform(&Overrides {
            seed: Some(42),
            swarm: Some(30),
            iterations: Some(200),
            theta: Some(0.5),
        })
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();

    let r = &run.report;
    let exact = run
        .outcomes
        .iter()
        .filter(|o| o.status == Status::Exact)
        .count();
    let nearest = run
        .outcomes
        .iter()
        .filter(|o| matches!(o.status, Status::Nearest(_)))
        .count();
    let unmatched = run
        .outcomes
        .iter()
        .filter(|o| o.status == Status::Unmatched)
        .count();
    ensure!(
        (r.best_fitness - 0.9780).abs() <= 1e-4,
        "best fitness {:.6}",
        r.best_fitness
    );
    ensure!(
        (exact, nearest, unmatched) == (356, 5, 3),
        "exact/nearest/unmatched = {exact}/{nearest}/{unmatched}"
    );
    ensure!(r.evaluations == 30 * 201, "{} evaluations", r.evaluations);
    ensure!(elapsed <= Duration::from_secs(60), "took {elapsed:?}");
    Ok(format!(
        "fitness {:.4}, {exact} exact, {nearest} nearest, {unmatched} unmatched, {} evaluations, {:.2?}",
        r.best_fitness, r.evaluations, elapsed
    ))
}

fn criterion_2_oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut agree = 0;
    let mut pso_optimal = 0;
    for _ in 0..100 {
        let (cs, kb) = common::instance(&mut rng, 6, 5);
        let optimum = common::oracle_optimum(&cs, &kb) as f64 / cs.len() as f64;
        let greedy = greedy_oracle(&cs, &kb).unwrap().best_fitness;
        let brute = brute_force_oracle(&cs, &kb, DEFAULT_BRUTE_FORCE_CAP)
            .unwrap()
            .best_fitness;
        if greedy == brute && brute == optimum {
            agree += 1;
        }
        let params = PsoParams {
            swarm_size: 10,
            iterations: 50,
            seed: rng.random(),
            ..PsoParams::default()
        };
        if pso_search(&cs, &kb, &params).unwrap().best_fitness == brute {
            pso_optimal += 1;
        }
    }
    ensure!(agree == 100, "greedy = brute force on {agree}/100");
    ensure!(pso_optimal >= 95, "PSO optimal on {pso_optimal}/100");
    Ok(format!(
        "greedy = brute force 100/100, PSO optimal {pso_optimal}/100"
    ))
}

fn criterion_3_separability() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let (cs, kb) = common::instance(&mut rng, 8, 6);
        let ids: Vec<_> = kb.blocks().iter().map(|b| b.id).collect();
        let a: Vec<_> = cs
            .iter()
            .map(|_| ids[rng.random_range(0..ids.len())])
            .collect();
        let j = rng.random_range(0..cs.len());
        let b2 = ids[rng.random_range(0..ids.len())];
        let mut a2 = a.clone();
        a2[j] = b2;
        let f1 = fitness(
            &Assignment {
                block_ids: a.clone(),
            },
            &cs,
            &kb,
        )
        .unwrap();
        let f2 = fitness(&Assignment { block_ids: a2 }, &cs, &kb).unwrap();
        let exact = |id| common::oracle_block_exact(&cs[j].predicate, kb.block(id).unwrap()) as i32;
        let expected = (exact(b2) - exact(a[j])) as f64 / cs.len() as f64;
        worst = worst.max(((f2 - f1) - expected).abs());
    }
    ensure!(worst <= 1e-12, "largest deviation {worst:e}");
    Ok(format!("200 tuples, largest deviation {worst:e}"))
}

fn criterion_4_determinism() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (training, model) = write_ecs(tmp.path());
    let root = cli_project(tmp.path(), &training, &model)?;
    let out_dir = root.join(PREDICATES_DIR);
    let mut snapshots = Vec::new();
    for _ in 0..2 {
        run_cods(&root, &["transform", "--seed", "42"])?;
        let read = |f: &str| fs::read(out_dir.join(f)).map_err(|e| format!("{f}: {e}"));
        snapshots.push((
            read(PREDICATES_FILE)?,
            read(README_FILE)?,
            read(TRACE_FILE)?,
        ));
    }
    ensure!(
        snapshots[0].0 == snapshots[1].0,
        "Predicates differ between runs"
    );
    ensure!(
        snapshots[0].1 == snapshots[1].1,
        "readme differs between runs"
    );
    for (i, (_, _, trace)) in snapshots.iter().enumerate() {
        let trace = parse_trace(&String::from_utf8_lossy(trace))
            .ok_or_else(|| format!("run {i}: malformed trace"))?;
        ensure!(
            trace.len() == 201,
            "run {i}: trace has {} entries",
            trace.len()
        );
        ensure!(
            trace.windows(2).all(|w| w[0] <= w[1]),
            "run {i}: gbest trace decreases"
        );
    }
    Ok("Predicates and readme byte-identical, gbest traces monotone".into())
}

fn criterion_5_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..1000 {
        let p = common::any_predicate(&mut rng, false);
        let text = serialize_predicate(&p);
        let back = parse_predicates(&text).map_err(|e| format!("predicate {i} `{text}`: {e}"))?;
        ensure!(
            back.len() == 1 && back[0].predicate == p,
            "predicate {i} `{text}` changed"
        );
        ensure!(
            serialize_predicate(&back[0].predicate) == text,
            "predicate {i} reserialized differently"
        );
    }
    for i in 0..100 {
        let blocks = common::any_blocks(&mut rng);
        let text = serialize_mapping_blocks(&blocks);
        let back = parse_mapping_blocks(&text).map_err(|e| format!("file {i}: {e}\n{text}"))?;
        ensure!(back == blocks, "file {i} changed:\n{text}");
        ensure!(
            serialize_mapping_blocks(&back) == text,
            "file {i} reserialized differently"
        );
    }
    Ok("1000 predicates and 100 mapping-block files".into())
}

fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/tutorial")
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/tutorial")
}

/// Compares `actual` (relative name, bytes) with the golden directory, or
/// rewrites it when `CODS_BLESS=1`.
fn check_golden(actual: &[(String, String)]) -> Result<(), String> {
    let dir = golden_dir();
    if std::env::var("CODS_BLESS").as_deref() == Ok("1") {
        let _ = fs::remove_dir_all(&dir);
        for (name, content) in actual {
            let p = dir.join(name);
            fs::create_dir_all(p.parent().unwrap()).map_err(|e| e.to_string())?;
            fs::write(&p, content).map_err(|e| e.to_string())?;
        }
        return Ok(());
    }
    let mut expected = BTreeSet::new();
    for sub in ["predicates", "java"] {
        for e in fs::read_dir(dir.join(sub)).map_err(|e| format!("golden files missing: {e}"))? {
            let name = e.map_err(|e| e.to_string())?.file_name();
            expected.insert(format!("{sub}/{}", name.to_string_lossy()));
        }
    }
    let got: BTreeSet<String> = actual.iter().map(|(n, _)| n.clone()).collect();
    ensure!(
        expected == got,
        "file sets differ: golden {expected:?}, produced {got:?}"
    );
    for (name, content) in actual {
        let want = fs::read_to_string(dir.join(name)).map_err(|e| e.to_string())?;
        ensure!(&want == content, "{name} differs from golden:\n{content}");
    }
    Ok(())
}

fn criterion_6_golden() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let fx = fixture_dir();
    let training: Vec<_> = ["structure.blocks", "behaviour.blocks", "actions.blocks"]
        .iter()
        .map(|f| fx.join(f))
        .collect();
    let root = cli_project(tmp.path(), &training, &fx.join("lamp.model"))?;
    run_cods(&root, &["transform", "--seed", "7"])?;
    run_cods(&root, &["generate"])?;

    let mut actual = Vec::new();
    let pred_dir = root.join(PREDICATES_DIR);
    for f in [PREDICATES_FILE, README_FILE] {
        let text = fs::read_to_string(pred_dir.join(f)).map_err(|e| e.to_string())?;
        actual.push((format!("predicates/{f}"), text));
    }
    let java_dir = root.join(JAVA_DIR);
    let mut names: Vec<_> = fs::read_dir(&java_dir)
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    let mut java_files = 0;
    for name in names {
        let content = fs::read_to_string(java_dir.join(&name)).map_err(|e| e.to_string())?;
        if name.ends_with(".java") {
            java_files += 1;
            SourceFile {
                filename: name.clone(),
                content: content.clone(),
            }
            .check_structure()
            .map_err(|e| e.to_string())?;
        }
        actual.push((format!("java/{name}"), content));
    }
    ensure!(java_files >= 2, "{java_files} java files");

    let report = &actual[1].1;
    for (n, label) in [
        (1, "Input model constructs"),
        (2, "Mapping blocks in training data"),
        (3, "Best fitness"),
        (4, "Selected mapping blocks"),
        (5, "PSO evaluations"),
        (6, "Constructs without an exact match"),
    ] {
        ensure!(
            report
                .lines()
                .any(|l| l.starts_with(&format!("{n}. {label}"))),
            "transform readme lacks field {n}"
        );
    }
    let codegen = &actual.last().unwrap().1;
    ensure!(
        codegen.starts_with(cods::codegen::REPORT_HEADER),
        "codegen readme lacks its header"
    );
    ensure!(codegen.lines().count() > 1, "codegen readme has no rows");

    check_golden(&actual)?;
    Ok(format!(
        "{java_files} java files, structure checks and goldens match"
    ))
}

fn criterion_7_accounting() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for run in 0..500 {
        let n = rng.random_range(1..40);
        let m = rng.random_range(1..8);
        let kb = KnowledgeBase::build(common::small_blocks(&mut rng, m)).unwrap();
        let cs = common::small_model(&mut rng, n);
        let params = PsoParams {
            swarm_size: 5,
            iterations: 5,
            seed: rng.random(),
            ..PsoParams::default()
        };
        let theta = rng.random_range(0.05..=1.0);
        let outcome = pso_search(&cs, &kb, &params).unwrap();
        let (outcomes, report) = transform_all(&cs, &outcome, &kb, theta);

        let exact = outcomes
            .iter()
            .filter(|o| o.status == Status::Exact)
            .count();
        let nearest = outcomes
            .iter()
            .filter(|o| matches!(o.status, Status::Nearest(_)))
            .count();
        let unmatched = outcomes
            .iter()
            .filter(|o| o.status == Status::Unmatched)
            .count();
        ensure!(
            exact + nearest + unmatched == n,
            "run {run}: statuses do not cover N"
        );
        let indices: Vec<_> = outcomes.iter().map(|o| o.construct_index).collect();
        ensure!(
            indices == (0..n).collect::<Vec<_>>(),
            "run {run}: outcome indices"
        );
        for o in &outcomes {
            ensure!(
                (o.status == Status::Unmatched) == o.code_predicates.is_empty(),
                "run {run}: construct {} has status {:?} with {} code predicates",
                o.construct_index,
                o.status,
                o.code_predicates.len()
            );
        }
        let flagged: BTreeSet<_> = report
            .mismatch_details
            .iter()
            .map(|d| d.construct_index)
            .collect();
        ensure!(
            flagged.len() == report.mismatch_details.len() && flagged.len() == nearest + unmatched,
            "run {run}: report rows do not match non-exact constructs"
        );
        ensure!(
            flagged.iter().all(|&i| outcomes[i].status != Status::Exact),
            "run {run}: exact construct reported as mismatch"
        );

        // through the Predicates file and the renderer
        let file =
            read_predicates_file(&write_predicates_file(&outcomes)).map_err(|e| e.to_string())?;
        let code_total: usize = outcomes.iter().map(|o| o.code_predicates.len()).sum();
        ensure!(
            file.predicates.len() == code_total,
            "run {run}: Predicates file loses predicates"
        );
        ensure!(
            file.flagged.len() == nearest + unmatched,
            "run {run}: Predicates file flags"
        );
        let (_, cg) = render_files(&file.predicates, &file.flagged).map_err(|e| e.to_string())?;
        ensure!(
            cg.rendered_predicates + cg.unknown_count() == code_total,
            "run {run}: {} rendered + {} unknown != {code_total}",
            cg.rendered_predicates,
            cg.unknown_count()
        );
        let construct_rows = cg
            .rows
            .iter()
            .filter(|r| {
                r.reason == Reason::NoMatch || file.flagged.iter().any(|f| f.construct == r.subject)
            })
            .count();
        ensure!(
            construct_rows == nearest + unmatched,
            "run {run}: codegen construct rows"
        );
    }
    Ok("500 random runs fully accounted".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("1 table reproduction", criterion_1_table_reproduction),
        ("2 oracle equivalence", criterion_2_oracle_equivalence),
        ("3 separability", criterion_3_separability),
        ("4 determinism", criterion_4_determinism),
        ("5 round trip", criterion_5_round_trip),
        ("6 end-to-end golden", criterion_6_golden),
        ("7 totality of accounting", criterion_7_accounting),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let result = panic::catch_unwind(AssertUnwindSafe(f))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        match result {
            Ok(detail) => println!("[PASS] criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] criterion {name}: {detail}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
