use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("binomial({n}, {k}) requires k <= n")]
    BinomialRange { n: u32, k: u32 },

    #[error("{op} requires a constant term equal to {expected}")]
    ConstantTerm { op: &'static str, expected: &'static str },

    #[error("truncation order {order} exceeds the coefficient table (K = {max})")]
    OrderTooLarge { order: usize, max: usize },

    #[error("n must be at least 1")]
    ZeroN,

    #[error("precision must be at least {min} bits, got {got}")]
    PrecisionTooLow { got: u32, min: u32 },

    #[error("no turnaround within K = {max_k} at n = {n}: the truncation error only decreases")]
    NoTurnaround { n: u64, max_k: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("quadrature did not reach tolerance {tol:e} within {nodes} nodes (error estimate {estimate:e})")]
    QuadratureBudget { tol: f64, nodes: usize, estimate: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
