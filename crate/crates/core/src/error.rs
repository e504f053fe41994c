use thiserror::Error;

/// Errors raised by the counting, evaluation and certification routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("resource cap exceeded: {what} = {value} (limit {limit})")]
    ResourceCap {
        what: &'static str,
        value: u64,
        limit: u64,
    },

    #[error("point {x} + {y}i is outside the supported evaluation region: {reason}")]
    OutsideRegion {
        x: f64,
        y: f64,
        reason: &'static str,
    },

    #[error("series did not reach the truncation threshold within {0} terms")]
    TruncationCap(usize),

    #[error("bracket [{lo}, {hi}] does not change sign (g(lo) = {g_lo}, g(hi) = {g_hi})")]
    BracketSign {
        lo: f64,
        hi: f64,
        g_lo: f64,
        g_hi: f64,
    },

    #[error("root finder did not converge after {0} iterations")]
    NoConvergence(usize),

    #[error("hypotheses not satisfied: {0}")]
    HypothesesNotSatisfied(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
