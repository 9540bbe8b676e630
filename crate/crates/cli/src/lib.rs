//! Batch front end for exunify: reads a JSON problem file, runs each query
//! against the chosen variety and reports the results as JSON, text or DOT.

pub mod dot;
pub mod problem;
pub mod report;
pub mod run;

use std::path::PathBuf;

use anyhow::Result;
use clap::Parser;

pub use dot::{emit_dot, Diagram};
pub use problem::{prepare, read_file, LoadOptions, ProblemFile, Query, Session, Target};
pub use report::{render, Format};
pub use run::{run, ResultRecord, RunOptions, Status};

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    pub const PROBLEM_ERROR: u8 = 1;
    pub const FILE_ERROR: u8 = 2;
}

#[derive(Debug, Clone, Parser)]
#[command(name = "exunify", version, about = "Exact unification and admissibility over finitely generated varieties")]
pub struct Args {
    /// Problem file (JSON).
    pub file: PathBuf,
    /// Variety name, overriding the file's.
    #[arg(long)]
    pub variety: Option<String>,
    /// Exactness search bound for problems that give none.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub bound: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads; 0 uses every core. Output does not depend on it.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Free-algebra element cap.
    #[arg(long)]
    pub cap: Option<usize>,
    /// Include per-problem wall-clock times.
    #[arg(long)]
    pub timing: bool,
}

/// Output of a run plus whether any problem failed.
pub struct Run {
    pub output: String,
    pub any_error: bool,
}

/// Loads, runs and renders. An `Err` is a file error.
pub fn execute(args: &Args) -> Result<Run> {
    let file = read_file(&args.file)?;
    let session = prepare(
        &file,
        &LoadOptions {
            variety: args.variety.clone(),
            cap: args.cap,
        },
    )?;
    let records = run(
        &session,
        &RunOptions {
            bound: args.bound.map(|b| b as usize),
            jobs: args.jobs,
            timing: args.timing,
        },
    )?;
    Ok(Run {
        output: render(args.format, session.target.name(), &records),
        any_error: records.iter().any(|r| r.status == Status::Error),
    })
}
