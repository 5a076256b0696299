use thiserror::Error;

/// Errors produced anywhere in the library.
///
/// The variants are grouped by cause rather than by module so that callers
/// (the CLI in particular) can map them onto a small set of exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("degenerate window at step {step}: {reason}")]
    DegenerateStep { step: usize, reason: String },

    #[error("constraint violation: {0}")]
    ConstraintViolation(String),

    #[error("numeric instability: {0}")]
    NumericInstability(String),

    #[error("sequence too short: need at least {needed} points, have {found}")]
    InsufficientLength { needed: usize, found: usize },

    #[error("format error: {0}")]
    Format(String),
}

impl Error {
    /// True for errors caused by geometry that is not in general position.
    pub fn is_degenerate(&self) -> bool {
        matches!(self, Error::Degenerate(_) | Error::DegenerateStep { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
