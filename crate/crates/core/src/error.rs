//! Crate-wide error type.
//!
//! Variants are grouped by how a caller should react, and each group maps to a
//! fixed CLI exit code: domain and format errors exit 1, capacity errors exit
//! 2, and file-system errors exit 3.

use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by graph construction, solvers, formula evaluation, and
/// the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside an operation's domain (bad probability,
    /// out-of-range vertex label, undefined formula input, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// An enumeration or search exceeded its configured capacity. The caller
    /// may retry with a larger cap; no partial result is returned.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// A file could not be read or written.
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Input data was syntactically or structurally malformed.
    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }

    pub(crate) fn format(msg: impl Into<String>) -> Self {
        Error::Format(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code used by the CLI for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::Format(_) => 1,
            Error::Capacity(_) => 2,
            Error::Io { .. } => 3,
        }
    }
}
