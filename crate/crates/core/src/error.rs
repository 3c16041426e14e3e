use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A channel, scheme or experiment parameter is out of its domain.
    #[error("{field} must be {requirement}")]
    Validation {
        field: &'static str,
        requirement: &'static str,
    },

    /// Argument of the capacity function outside `[0, inf)`.
    #[error("capacity argument must be finite and >= 0, got {0}")]
    Domain(f64),

    /// Rate-splitting constructors assume user 1 has the larger power.
    #[error("rate splitting requires p1 >= p2 (got p1={p1}, p2={p2}); swap the user roles")]
    Orientation { p1: f64, p2: f64 },

    #[error("rate region is unbounded")]
    Unbounded,

    #[error("invalid constraint: {0}")]
    Constraint(&'static str),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization failed: {0}")]
    Serialize(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(field: &'static str, requirement: &'static str) -> Self {
        Error::Validation { field, requirement }
    }
}
