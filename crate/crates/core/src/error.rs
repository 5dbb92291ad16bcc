use thiserror::Error;

/// Errors raised by the core algorithms.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("jet layouts differ: {left:?} vs {right:?} (nvars, cap)")]
    CapMismatch { left: (usize, u32), right: (usize, u32) },
    #[error("singular input: {0}")]
    Singular(String),
    #[error("metric is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("metric base value is not positive definite")]
    NotPositiveDefinite,
    #[error("product of two log-bearing terms inside the truncation")]
    LogSquared,
    #[error("jet has a nonzero term independent of the division variable")]
    NotDivisible,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("gate failure: {0}")]
    Gate(String),
    #[error("degenerate coupling at order {0}")]
    DegenerateCoupling(u32),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("tolerance not met: {0}")]
    Tolerance(String),
}

pub type Result<T> = std::result::Result<T, Error>;
