//! Front end for `qchan-core`: channel documents, reports and the `qchan`
//! subcommands.

pub mod commands;
pub mod document;
pub mod report;

use thiserror::Error;

pub use commands::{run, Cli};

/// Errors carry the process exit code they map to.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },
    #[error("dimension error: {0}")]
    Dims(String),
    #[error("not completely positive: {0}")]
    NotCp(String),
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Io { .. } => 2,
            CliError::Dims(_) => 3,
            CliError::NotCp(_) => 4,
            CliError::Params(_) => 5,
            CliError::Invariant(_) => 6,
        }
    }
}

impl From<qchan_core::Error> for CliError {
    fn from(e: qchan_core::Error) -> Self {
        use qchan_core::Error as E;
        let msg = e.to_string();
        match e {
            E::DimensionMismatch(_) | E::EntryCount { .. } | E::NotSquare(..) => CliError::Dims(msg),
            E::NotHermitian(_) | E::NotPsd { .. } => CliError::NotCp(msg),
            E::NonFinite | E::EmptyKraus | E::EmptyHolevo => CliError::Parse { path: "payload".into(), message: msg },
            E::InvalidTrace(_)
            | E::NotRankOne { .. }
            | E::InvalidTolerance { .. }
            | E::ParameterOutOfRange(_)
            | E::Precondition(_) => CliError::Params(msg),
        }
    }
}
