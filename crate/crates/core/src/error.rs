//! Library error type.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument violated a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The geometry integral `∫ r^{1-nα} dr` degenerates when `nα = 2`.
    #[error("singular exponent: n*alpha = 2 (n = {n}, alpha = {alpha})")]
    SingularExponent { n: usize, alpha: f64 },

    /// Cumulant vectors of different lengths cannot be combined.
    #[error("cumulant length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    /// A log-normal fit needs a strictly positive mean.
    #[error("cannot fit a log-normal to a nonpositive mean (kappa1 = {kappa1})")]
    NonPositiveMean { kappa1: f64 },

    /// An empirical distribution with no samples.
    #[error("empty distribution")]
    EmptyDistribution,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
