//! Experiment drivers and result emission for the `drudefd` command.

pub mod config;
pub mod experiments;
pub mod output;

use std::path::PathBuf;

/// Failure of a harness invocation; each variant maps to one exit code.
#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("instability: {0}")]
    Instability(String),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 2,
            HarnessError::Instability(_) => 3,
            HarnessError::Io { .. } => 4,
        }
    }
}

impl From<drudefd_core::Error> for HarnessError {
    fn from(e: drudefd_core::Error) -> Self {
        match e {
            drudefd_core::Error::Instability { .. } => HarnessError::Instability(e.to_string()),
            other => HarnessError::Config(other.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
