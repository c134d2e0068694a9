use thiserror::Error;

/// Errors produced by model construction, the solvers and the oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument {value} outside the domain [{lo}, {hi}]")]
    OutOfDomain { value: f64, lo: f64, hi: f64 },

    #[error("invalid utility: {0}")]
    BadUtility(String),

    #[error("invalid type distribution: {0}")]
    BadDistribution(String),

    #[error("operation requires a linear-quadratic proposer utility")]
    NotLq,

    #[error("hypothesis not satisfied: {0}")]
    HypothesisFailed(String),

    #[error("default option must be positive, got {0}")]
    BadDefault(f64),

    #[error("delta must lie in (0, 0.25), got {0}")]
    BadDelta(f64),

    #[error("{what} of size {size} exceeds the limit {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("linear program is infeasible")]
    Infeasible,

    #[error("linear program is unbounded")]
    Unbounded,

    #[error("simplex iteration limit ({0}) reached")]
    IterationLimit(usize),

    #[error("invalid instance: {0}")]
    BadInstance(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
