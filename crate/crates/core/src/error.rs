use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An operation was applied outside of its mathematical domain
    /// (nonzero mean for `L^{-1}`, resonant frequencies, ...).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("truncation mismatch: {left} vs {right}")]
    TruncationMismatch { left: usize, right: usize },

    /// A parameter violates its documented range.
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("malformed record: {0}")]
    Malformed(String),

    /// The norm guard of an integrator tripped.
    #[error("numerical instability at t = {time}: norm grew by a factor {growth:e}")]
    Instability { time: f64, growth: f64 },

    #[error("fit needs at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        field,
        reason: reason.into(),
    }
}
