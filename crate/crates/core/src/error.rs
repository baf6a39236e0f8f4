use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Error)]
pub enum LabError {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("invalid feedback: {0}")]
    Feedback(String),

    /// A ranker or attacker broke one of its own structural invariants.
    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("comparison graph contains a cycle through items {0:?}")]
    Cycle(Vec<usize>),

    #[error("config parse error in {path}: {message}")]
    ConfigParse { path: PathBuf, message: String },

    #[error("config schema violation: {0}")]
    Schema(String),

    #[error("attractiveness file {path}, line {line}: {message}")]
    Attractiveness {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl LabError {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        LabError::Parameter(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        LabError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = LabError> = std::result::Result<T, E>;
