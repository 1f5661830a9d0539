use std::path::PathBuf;

use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the range an operation accepts.
    #[error("invalid parameter: {0}")]
    Parameter(String),
    /// The quantity requested is mathematically undefined for the input.
    #[error("undefined for input: {0}")]
    Domain(String),
    /// An exact enumeration would exceed its fixed size limit.
    #[error("capacity exceeded: {what} = {got} (limit {limit})")]
    Capacity {
        what: &'static str,
        got: usize,
        limit: usize,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param(msg: impl Into<String>) -> Error {
    Error::Parameter(msg.into())
}
