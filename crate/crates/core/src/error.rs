use thiserror::Error;

/// Errors produced by gasket computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("letter {letter} out of range for dimension n={n}")]
    LetterOutOfRange { letter: u8, n: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("dimension n={0} is not supported (need 2 <= n <= 64)")]
    UnsupportedDimension(usize),
    #[error("coordinates do not describe a point of the gasket")]
    NotOnGasket,
    #[error("the two points coincide")]
    SamePoint,
    #[error("point is not contained in the cell")]
    NotInCell,
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("no common path: {0}")]
    NoCommonPath(String),
    #[error("t = {t} lies outside the regular window [{lo}, {hi}]")]
    OutsideWindow { t: String, lo: String, hi: String },
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("cell union is not connected")]
    NotConnected,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
