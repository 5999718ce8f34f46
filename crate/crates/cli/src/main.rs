use std::process::ExitCode;

use clap::Parser;
use kraus_landscape::LandscapeError;

mod args;
mod commands;
mod config;
mod output;

/// Exit codes: 2 invalid input or illegal combination, 3 numerical
/// verification failure, 4 tracer failure.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }

    pub fn verification(message: impl Into<String>) -> Self {
        Self { code: 3, message: message.into() }
    }

    pub fn tracer(message: impl Into<String>) -> Self {
        Self { code: 4, message: message.into() }
    }
}

impl From<LandscapeError> for Failure {
    fn from(e: LandscapeError) -> Self {
        match e {
            LandscapeError::FlowStalled { .. } => Failure::tracer(e.to_string()),
            _ => Failure::input(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = args::Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
