use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
#[non_exhaustive]
pub enum Error {
    #[error("signal is empty")]
    EmptySignal,
    #[error("sample {index} is not a finite number")]
    NonFinite { index: usize },
    #[error("sample rate must be finite and positive")]
    InvalidSampleRate,
    #[error("standard deviation of the reference signal is zero (constant signal)")]
    SigmaZero,
    #[error("series of length {len} is too short (need at least {required})")]
    TooShort { len: usize, required: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("mean of the values is zero")]
    ZeroMean,
    #[error("{count} undefined entries in input")]
    UndefinedEntries { count: usize },
    #[error("both groups are constant and equal")]
    DegenerateVariance,
    #[error("need at least {required} points, got {got}")]
    TooFewPoints { required: usize, got: usize },
    #[error("shape mismatch: expected {expected} columns, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
}
