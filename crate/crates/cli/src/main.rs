mod cli;
mod commands;
mod config;
mod output;

use std::ffi::OsString;
use std::fmt;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use cli::{Cli, Command};

/// Failure classes; usage and configuration errors exit with 2, run errors with 1.
#[derive(Debug)]
pub enum CliError {
    /// Already rendered by clap, usage included.
    Usage(String),
    Config(String),
    Run(String),
}

impl CliError {
    pub fn config(msg: impl fmt::Display) -> Self {
        CliError::Config(format!("configuration error: {msg}"))
    }

    pub fn run(msg: impl fmt::Display) -> Self {
        CliError::Run(format!("run error: {msg}"))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Config(m) | CliError::Run(m) => f.write_str(m),
        }
    }
}

impl From<coverage_correction::Error> for CliError {
    fn from(e: coverage_correction::Error) -> Self {
        if e.is_config() {
            CliError::Config(e.to_string())
        } else {
            CliError::Run(e.to_string())
        }
    }
}

fn run(argv: Vec<OsString>) -> Result<(), CliError> {
    let argv = config::merge(argv)?;
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return Ok(());
        }
        Err(e) => return Err(CliError::Usage(e.render().to_string())),
    };
    match &cli.command {
        Command::Coverage(a) => commands::coverage(a),
        Command::Sweep(a) => commands::sweep_cmd(a),
        Command::Clt(a) => commands::clt(a),
        Command::AbcDemo(a) => commands::abc_demo(a),
        Command::Correct(a) => commands::correct(a),
    }
}

fn main() -> ExitCode {
    match run(std::env::args_os().collect()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ (CliError::Usage(_) | CliError::Config(_))) => {
            eprintln!("{}", e.to_string().trim_end());
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(1)
        }
    }
}
