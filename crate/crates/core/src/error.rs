use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("element {element} out of range for ground set of size {n}")]
    ElementOutOfRange { element: usize, n: usize },

    #[error("element {0} appears more than once in the set")]
    DuplicateElement(usize),

    #[error("element {0} is already in the set")]
    ElementInSet(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid objective: {0}")]
    InvalidObjective(String),

    #[error("invalid penalty curve: {0}")]
    InvalidPenalty(String),

    #[error("enumeration guard exceeded: {count} subsets > guard {guard}")]
    GuardExceeded { count: u128, guard: u128 },

    #[error("{path}:{line}: {message}")]
    Parse {
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

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
