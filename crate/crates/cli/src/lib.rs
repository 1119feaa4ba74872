//! Batch front end for the `betweenness` library: model specs, tabular
//! output and the `repr`, `check`, `triangle` and `separation` commands.

pub mod commands;
pub mod format;
pub mod spec;
pub mod svg;

use std::io;
use std::process::ExitCode;

use thiserror::Error;

pub use commands::{run, Command, Config, Outcome};

#[derive(Debug, Error)]
pub enum CliError {
    /// Unreadable or invalid input: exit code 2.
    #[error("input error: {0}")]
    Input(String),
    /// Engine or solver failure, tagged with the error variant: exit code 3.
    #[error("{name}: {message}")]
    Numeric { name: &'static str, message: String },
    #[error("io error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) | CliError::Io(_) => 2,
            CliError::Numeric { .. } => 3,
        }
    }
}

/// `"{name}: {details}"` with the name given once.
pub(crate) fn tagged(name: &str, e: &impl std::fmt::Display) -> String {
    let text = e.to_string();
    match text.strip_prefix(name).and_then(|r| r.strip_prefix(": ")) {
        Some(rest) => format!("{name}: {rest}"),
        None => format!("{name}: {text}"),
    }
}

fn numeric(name: &'static str, e: &impl std::fmt::Display) -> CliError {
    let message = tagged(name, e)[name.len() + 2..].to_string();
    CliError::Numeric { name, message }
}

impl From<betweenness::EngineError> for CliError {
    fn from(e: betweenness::EngineError) -> Self {
        numeric(e.name(), &e)
    }
}

impl From<betweenness::separation::SeparationError> for CliError {
    fn from(e: betweenness::separation::SeparationError) -> Self {
        numeric(e.name(), &e)
    }
}

impl From<betweenness::triangle::TriangleError> for CliError {
    fn from(e: betweenness::triangle::TriangleError) -> Self {
        use betweenness::triangle::TriangleError;
        match e {
            TriangleError::WrongDimension(_) | TriangleError::LevelOutOfRange(_) => CliError::Input(e.to_string()),
            other => numeric(other.name(), &other),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}

/// Exit status for a finished run: 0 when every check passed, 1 otherwise.
pub fn exit_code(result: &Result<Outcome, CliError>) -> ExitCode {
    match result {
        Ok(o) if o.passed => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(1),
        Err(e) => ExitCode::from(e.exit_code()),
    }
}
