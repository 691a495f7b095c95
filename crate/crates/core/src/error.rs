//! Error type shared by all modules of the crate.

use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Map expression could not be parsed; `position` is a byte offset into the input.
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },

    /// The variables used are not consistent with the number of coordinates.
    #[error("inconsistent variables: {message}")]
    InconsistentVariables { message: String },

    /// A matrix that must lie in GL(n,Z) does not.
    #[error("matrix is not unimodular (determinant {det})")]
    NotUnimodular { det: BigInt },

    /// Two operands have incompatible dimensions.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// Invalid dimension for the requested construction.
    #[error("invalid dimension: {message}")]
    InvalidDimension { message: String },

    /// Exterior power index outside 1..=n.
    #[error("exterior power index {k} out of range for dimension {n}")]
    ExteriorPowerRange { k: usize, n: usize },

    /// An operation's spectral precondition does not hold for the input.
    #[error("precondition violated: {message}")]
    Precondition { message: String },

    /// Continued fraction evaluation hit a zero denominator.
    #[error("zero denominator in continued fraction evaluation")]
    ZeroDenominator,

    /// An invalid LLS sequence was supplied.
    #[error("invalid LLS sequence: {message}")]
    InvalidSequence { message: String },

    /// The sail search box did not capture a full period; retry with a larger bound.
    #[error("search bound {bound} too small to capture one sail period")]
    SailBoundTooSmall { bound: u64 },

    /// Internal iteration cap exceeded; indicates a bug rather than a bad input.
    #[error("internal iteration cap exceeded in {context}")]
    IterationCap { context: &'static str },
}

impl Error {
    pub(crate) fn precondition(message: impl Into<String>) -> Self {
        Error::Precondition {
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
