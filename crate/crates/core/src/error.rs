use thiserror::Error;

use crate::series::PoleReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,

    #[error("value {0} exceeds double range")]
    Overflow(String),

    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),

    #[error("invalid series specification: {0}")]
    InvalidSpec(String),

    #[error("argument {index} has nonzero coefficient but degree 0")]
    DegreeZeroArgument { index: usize },

    #[error("denominator {param} vanishes at multi-index {index:?}")]
    PoleAtIndex { param: String, index: Vec<usize> },

    #[error("denominator Pochhammer vanishes within truncation: {0}")]
    PoleWithinTruncation(PoleReport),

    #[error("series did not converge after {terms} terms (last relative block {est_error:e})")]
    NoConvergence { terms: usize, est_error: f64 },

    #[error("unknown identity id {0:?}")]
    UnknownIdentity(String),

    #[error("prefactor denominator {factor} vanishes at j={j}, k={k}")]
    PolarPrefactor { factor: String, j: usize, k: usize },

    #[error("invalid reduction parameters: {0}")]
    InvalidParams(String),

    #[error("no non-polar parameter tuple for {id} after {attempts} attempts")]
    SamplerExhausted { id: String, attempts: usize },
}

impl Error {
    /// True for failures caused by a vanishing denominator somewhere.
    pub fn is_polar(&self) -> bool {
        matches!(
            self,
            Error::PoleAtIndex { .. } | Error::PoleWithinTruncation(_) | Error::PolarPrefactor { .. }
        )
    }
}
