use alloc::string::String;

/// Errors raised by oracle construction and the algorithms built on it.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix {index} is not symmetric (asymmetry {asymmetry:e})")]
    NotSymmetric { index: usize, asymmetry: f64 },
    #[error("matrix {index} is not positive semidefinite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPsd { index: usize, min_eigenvalue: f64 },
    #[error("negative entry {value} at ({row}, {col})")]
    NegativeEntry { row: usize, col: usize, value: f64 },
    #[error("adjacency entry {value} at ({row}, {col}) is not 0 or 1")]
    NotBinary { row: usize, col: usize, value: f64 },
    #[error("invalid exponent vector: {0}")]
    InvalidExponent(String),
    #[error("invalid coefficient {0}")]
    InvalidCoefficient(f64),
    #[error("non-finite input")]
    NonFinite,
    #[error("size {n} exceeds the limit {limit} for {what}")]
    Budget { what: &'static str, n: usize, limit: usize },
    #[error("polynomial value {0:e} is not positive at the evaluation point")]
    NonPositive(f64),
    #[error("degenerate direction: leading coefficient {leading:e} is negligible")]
    DegenerateDirection { leading: f64 },
    #[error("point is not nonnegative in the given direction: {0}")]
    NotConeMember(String),
    #[error("eigenvalue iteration failed to converge")]
    NoConvergence,
    #[error("numerical breakdown: {0}")]
    Numerical(String),
    #[error("empty support")]
    EmptySupport,
    #[error("derivative in variable {0} vanishes identically")]
    ZeroDirection(usize),
    #[error("objective is unbounded below (value {0:e} and still decreasing)")]
    Unbounded(f64),
    #[error("unsupported input: {0}")]
    Unsupported(String),
}

pub type Result<T> = core::result::Result<T, Error>;
