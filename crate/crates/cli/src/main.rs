mod args;
mod commands;
mod output;
mod repro;

use std::fmt;
use std::process::ExitCode;

use clap::Parser;

/// Failures, split by exit code: 1 for usage and input errors, 2 when the
/// numerics ran out of precision.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Numeric(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Numeric(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::Numeric(m) => f.write_str(m),
        }
    }
}

impl From<signwalk_core::Error> for CliError {
    fn from(e: signwalk_core::Error) -> Self {
        if e.is_numeric() {
            CliError::Numeric(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

fn main() -> ExitCode {
    let cli = match args::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("signwalk: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
