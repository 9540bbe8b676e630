use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use exunify_cli::{execute, exit, Args};

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(run) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(run.output.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(exit::FILE_ERROR);
            }
            ExitCode::from(if run.any_error { exit::PROBLEM_ERROR } else { exit::OK })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit::FILE_ERROR)
        }
    }
}
