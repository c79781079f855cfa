mod args;
mod commands;
mod config;

use std::process::ExitCode;

use clap::Parser;

/// Failures mapped to process exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Missing or malformed flags and files (exit 2).
    Usage(String),
    /// Errors raised by the library (exit 1).
    Core(hypoexp::Error),
    /// The identity suites reported failures (exit 1).
    Failed(String),
}

impl From<hypoexp::Error> for CliError {
    fn from(e: hypoexp::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(_) | CliError::Failed(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Failed(m) => write!(f, "{m}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = match args::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let stdout = std::io::stdout();
    match commands::run(cli, &mut stdout.lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hypoexp: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
