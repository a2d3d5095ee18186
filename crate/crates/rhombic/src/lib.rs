//! Command-line front end for `rhombic-core`: configuration, on-disk caches,
//! file formats, the appendix/MCD table emitters and the reproduction
//! harness behind `rhombic verify-paper`.

pub mod cache;
pub mod cli;
pub mod config;
pub mod expr;
pub mod formats;
pub mod scan;
pub mod tables;
pub mod verify;

use std::path::PathBuf;

/// Exit status for a successful run.
pub const EXIT_OK: i32 = 0;
/// Malformed arguments or inputs outside an operation's domain.
pub const EXIT_INVALID: i32 = 1;
/// A size, time or memory limit was hit.
pub const EXIT_RESOURCE: i32 = 2;
/// `verify-paper` finished with at least one FAIL.
pub const EXIT_VERIFY_FAILED: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error(transparent)]
    Core(#[from] rhombic_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Format { .. } => EXIT_INVALID,
            CliError::Core(rhombic_core::Error::InvalidInput(_)) => EXIT_INVALID,
            CliError::Core(_) | CliError::Resource(_) | CliError::Io { .. } => EXIT_RESOURCE,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    pub(crate) fn format(path: impl Into<PathBuf>, message: impl ToString) -> Self {
        CliError::Format { path: path.into(), message: message.to_string() }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
