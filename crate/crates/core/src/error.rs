use thiserror::Error;

/// Errors produced by state, channel and optimization routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),

    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semi-definite (min eigenvalue {0:.3e})")]
    NotPsd(f64),

    #[error("trace is not 1 (got {0})")]
    TraceMismatch(f64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("channel shapes differ: {0}")]
    ShapeMismatch(String),

    #[error("alpha must be > 1 (got {0})")]
    AlphaOutOfRange(f64),

    #[error("eps must lie in (0, 1) (got {0})")]
    EpsOutOfRange(f64),

    #[error("dual bisection did not converge after {0} iterations")]
    ConvergenceFailure(usize),

    #[error("iteration did not converge after {iterations} steps (residual {residual:.3e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("support of rho is not contained in the support of sigma")]
    SupportViolation,

    #[error("enumeration too large: {0}")]
    EnumerationTooLarge(String),

    #[error("unsupported divergence/set combination: {0}")]
    UnsupportedSetKind(String),

    #[error("unsupported dimension: {0}")]
    UnsupportedDimension(String),

    #[error("log-robustness is infinite")]
    InfiniteRobustness,

    #[error("robustness bracket too wide: [{lower}, {upper}]")]
    BracketTooWide { lower: f64, upper: f64 },

    #[error("dimension guard exceeded: {0}")]
    DimensionGuard(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("combinatorial overflow: {0}")]
    CombinatorialOverflow(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
