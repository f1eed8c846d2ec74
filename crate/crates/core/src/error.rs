use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The certified tail bound did not drop below the tolerance before `n_cap`.
    #[error(
        "truncation failure at t = {t}: tail bound {achieved:.3e} still above tol {tol:.3e} after {n_cap} terms"
    )]
    TruncationFailure {
        t: f64,
        achieved: f64,
        tol: f64,
        n_cap: usize,
    },

    #[error("internal consistency: {0}")]
    InternalConsistency(String),

    #[error("degenerate delta: {0}")]
    DegenerateDelta(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("format error on {path}: {message}")]
    Format { path: PathBuf, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
