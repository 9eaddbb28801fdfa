use thiserror::Error;

use crate::eigensolve::Spectrum;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("no sign change of {function} found before x = {limit}")]
    ZeroNotBracketed { function: String, limit: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("factorization failed: {0}")]
    Factorization(String),

    /// The iteration cap was hit. `partial` holds the last Ritz approximation
    /// so callers can still report it, flagged.
    #[error("eigensolver did not converge after {iterations} iterations (worst residual {worst_residual:e})")]
    NonConvergence {
        iterations: usize,
        worst_residual: f64,
        partial: Box<Spectrum>,
    },
}

impl Error {
    /// True for failures of the numerics, as opposed to bad arguments.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::ZeroNotBracketed { .. } | Error::Factorization(_) | Error::NonConvergence { .. }
        )
    }
}
