use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QsimError {
    #[error("operator dimension {dim} exceeds capacity {max}")]
    Capacity { dim: usize, max: usize },

    #[error("operator dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("qubit count {0} outside supported range 1..=4")]
    QubitCount(usize),

    #[error("circuit has {0} slices, at most 14 are supported")]
    TooManySlices(usize),

    #[error("qubit count mismatch: expected {expected}, got {got}")]
    QubitMismatch { expected: usize, got: usize },

    #[error("malformed slice: {0}")]
    MalformedSlice(String),

    #[error("invalid statevector: {0}")]
    InvalidState(String),

    #[error("invalid probabilities: {0}")]
    InvalidProbabilities(String),

    #[error("resolution {resolution} is smaller than outcome count {outcomes}")]
    Resolution { resolution: usize, outcomes: usize },

    #[error("outcome {0} does not fit in two bits")]
    OutcomeRange(u8),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, QsimError>;
