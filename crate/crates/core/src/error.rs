use thiserror::Error;

/// Errors shared by every module in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An operation needed more samples than the collection holds.
    #[error("empty sample collection: n = {n}, need at least {required}")]
    EmptySample { n: u64, required: u64 },

    /// Sample index outside `0..n`.
    #[error("sample index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },

    /// A per-feature occurrence total larger than the sample size.
    #[error("count {count} at position {index} exceeds sample size n = {n}")]
    CountOutOfRange { index: usize, count: u64, n: u64 },

    /// Statistics that divide by the total occurrence count need it positive.
    #[error("spectrum has no occurrences")]
    NoOccurrences,

    #[error("delta must lie in (0, 1), got {delta}")]
    InvalidDelta { delta: f64 },

    #[error("invalid parameter: {reason}")]
    InvalidParams { reason: String },

    #[error("sample size n = {n} too small, need n >= {required}")]
    SampleTooSmall { n: u64, required: u64 },

    #[error("length mismatch: {left} probabilities vs {right} counts")]
    LengthMismatch { left: usize, right: usize },

    #[error("frequency r = {r} outside 1..={n}")]
    InvalidR { r: u64, n: u64 },

    /// A sequential source ran dry before the stopping rule fired.
    #[error("sample source exhausted after {consumed} samples")]
    SourceExhausted { consumed: u64 },
}

impl Error {
    pub(crate) fn invalid_params(reason: impl Into<String>) -> Self {
        Error::InvalidParams {
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
