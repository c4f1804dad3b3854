use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cods::project::{Overrides, Project, ProjectError};

#[derive(Parser)]
#[command(
    name = "cods",
    version,
    about = "Generate Java code from predicate models by example"
)]
struct Cli {
    /// Project directory.
    #[arg(long, global = true, env = "CODS_PROJECT")]
    project: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Create a new project directory.
    New {
        name: String,
        /// Parent directory of the new project.
        #[arg(long, default_value = ".")]
        path: PathBuf,
    },
    /// Import training files (mapping blocks) into the project.
    ImportTraining { files: Vec<PathBuf> },
    /// Import the model file to transform.
    ImportModels { files: Vec<PathBuf> },
    /// Search for the best block assignment and write code predicates.
    Transform {
        /// RNG seed; overrides `seed` in project.conf.
        #[arg(long)]
        seed: Option<u64>,
        /// Number of particles.
        #[arg(long)]
        swarm: Option<usize>,
        /// Number of PSO iterations.
        #[arg(long)]
        iters: Option<usize>,
        /// Minimum score for a nearest-match suggestion, in (0, 1].
        #[arg(long)]
        theta: Option<f64>,
    },
    /// Render Java files from the code predicates.
    Generate,
}

fn open(cli_project: Option<PathBuf>) -> Result<Project, ProjectError> {
    Project::open(&cli_project.unwrap_or_else(|| PathBuf::from(".")))
}

fn run(cli: Cli) -> Result<(), ProjectError> {
    match cli.command {
        Command::New { name, path } => {
            let p = Project::create(&name, &path)?;
            println!("created project {}", p.root().display());
        }
        Command::ImportTraining { files } => {
            let blocks = open(cli.project)?.import_training(&files)?;
            println!(
                "imported {} file(s); knowledge base holds {blocks} mapping blocks",
                files.len()
            );
        }
        Command::ImportModels { files } => {
            let import = open(cli.project)?.import_models(&files)?;
            for w in &import.warnings {
                eprintln!("warning: {w}");
            }
            println!("imported {} model constructs", import.constructs);
        }
        Command::Transform {
            seed,
            swarm,
            iters,
            theta,
        } => {
            let overrides = Overrides {
                seed,
                swarm,
                iterations: iters,
                theta,
            };
            let run = open(cli.project)?.run_transform(&overrides)?;
            for l in &run.lints {
                eprintln!("warning: {l}");
            }
            eprintln!("seed: {}", run.seed);
            print!("{}", run.report);
        }
        Command::Generate => {
            for f in open(cli.project)?.run_generate()? {
                println!("{f}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
