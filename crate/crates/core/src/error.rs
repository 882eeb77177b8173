use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Input data or parameters outside their admissible range.
    #[error("invalid input: {0}")]
    Validation(String),

    /// Caller broke a precondition (shape mismatch, k > n and so on).
    #[error("contract violation: {0}")]
    Contract(String),

    /// A dense or exhaustive routine refused to run above its size cap.
    #[error("refused: {what} needs n <= {cap}, got n = {n}")]
    CapExceeded { what: &'static str, n: usize, cap: usize },
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}
