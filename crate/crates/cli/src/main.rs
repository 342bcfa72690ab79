mod cache;
mod commands;
mod manifest;
mod spec;
mod tables;

use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use spec::{Cli, ExperimentSpec};

/// Exit status for rejected input.
const EXIT_VALIDATION: u8 = 2;
/// Exit status for numerical failures.
const EXIT_NUMERICAL: u8 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] sierpinski_walks::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn code(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.code(),
            CliError::Io(_) => "io",
            CliError::Usage(_) => "usage",
        }
    }

    fn exit_status(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_numerical() => EXIT_NUMERICAL,
            _ => EXIT_VALIDATION,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let spec = ExperimentSpec {
        common: cli.common,
        command: cli.command,
    };
    match commands::execute(&spec) {
        Ok((summary, _)) => {
            println!("{}", serde_json::to_string_pretty(&summary).expect("summary serializes"));
            ExitCode::SUCCESS
        }
        Err(e) => {
            let status = e.exit_status();
            let body = json!({
                "error": e.code(),
                "message": e.to_string(),
                "exit_code": status,
            });
            eprintln!("{body}");
            ExitCode::from(status)
        }
    }
}
