use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("alpha must be at least 3, got {0}")]
    InvalidAlpha(usize),

    #[error("malformed circuit: {0}")]
    MalformedCircuit(String),

    #[error("circuit contains a mid-circuit measurement")]
    MeasurementPresent,

    #[error("invalid gate group: {0}")]
    InvalidGroup(String),

    #[error("nothing to cut: {0}")]
    NothingToCut(String),

    #[error("dimension overflow: {qubits} qubits exceeds limit of {limit}")]
    DimensionOverflow { qubits: usize, limit: usize },

    #[error("empty decomposition")]
    EmptyDecomposition,

    #[error("post-processing value {0} outside [-1, 1]")]
    ValueOutOfRange(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
