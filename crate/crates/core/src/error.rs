use thiserror::Error;

use crate::word::Subspace;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("{what} is not in {required:?} (found {found:?})")]
    Subspace {
        what: String,
        required: Subspace,
        found: Subspace,
    },

    #[error("pole: {0}")]
    Pole(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no convergence: {0}")]
    NonConvergence(String),

    #[error("tolerance {tolerance:e} not certified (error estimate {estimate:e}): {what}")]
    Tolerance {
        what: String,
        tolerance: f64,
        estimate: f64,
    },

    #[error("invariant violated: {0}")]
    Invariant(String),
}
