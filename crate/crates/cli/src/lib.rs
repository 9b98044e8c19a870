//! Command-line front end for the `holodisk` analyzers.
//!
//! The binary is a thin shell over [`run`]; everything it prints or writes
//! is produced here so that integration tests can drive it in-process.

pub mod commands;
pub mod config;
pub mod report;
pub mod verify;

use std::path::PathBuf;

use holodisk::rigidity::Status;
use thiserror::Error;

pub use config::{Role, RunConfig};

/// Process exit codes.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const INPUT_ERROR: i32 = 1;
    pub const FAIL: i32 = 2;
    pub const INCONCLUSIVE: i32 = 3;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("invalid value for {key}: {message}")]
    Value { key: String, message: String },
    #[error("no subject given (use --subject or a config file)")]
    MissingSubject,
    #[error("cannot parse subject: {0}")]
    Parse(#[from] holodisk::holomap::ParseError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Input(String),
}

/// Exit code for the worst gating status of a run.
pub fn exit_code(status: Status) -> i32 {
    match status {
        Status::Fail => exit::FAIL,
        Status::Inconclusive => exit::INCONCLUSIVE,
        _ => exit::PASS,
    }
}

/// What a command produced: text for stdout or the `--out` file, and the
/// status that decides the exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub text: String,
    pub status: Status,
}
