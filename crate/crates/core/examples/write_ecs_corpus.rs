//! Writes the synthetic elevator-control corpus to a directory.
//!
//! `cargo run --example write_ecs_corpus -- <dir>`

use std::{env, fs, path::PathBuf, process::ExitCode};

fn main() -> ExitCode {
    let Some(dir) = env::args().nth(1).map(PathBuf::from) else {
        eprintln!("usage: write_ecs_corpus <dir>");
        return ExitCode::from(1);
    };
    let corpus = cods::corpus::ecs();
    let write = || -> std::io::Result<()> {
        fs::create_dir_all(&dir)?;
        for (name, text) in &corpus.training_files {
            fs::write(dir.join(name), text)?;
        }
        fs::write(dir.join(&corpus.model_name), &corpus.model)
    };
    if let Err(e) = write() {
        eprintln!("error: {}: {e}", dir.display());
        return ExitCode::from(1);
    }
    println!("wrote {} training files and {}", corpus.training_files.len(), corpus.model_name);
    ExitCode::SUCCESS
}
