use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed graph document: {0}")]
    Malformed(String),

    #[error("unknown drug `{0}` in edge")]
    UnknownDrug(String),

    #[error("weight outside [0,1]: {0}")]
    WeightOutOfRange(f64),

    #[error("duplicate {kind} edge between `{a}` and `{b}`")]
    DuplicateEdge { a: String, b: String, kind: String },

    #[error("self-loop on drug `{0}`")]
    SelfLoop(String),

    #[error("drug identifier `{0}` is used more than once")]
    DuplicateDrug(String),

    #[error("graph must contain at least one drug")]
    EmptyGraph,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("drug index {index} out of range for {len} drugs")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("{n} qubits exceeds the resource guard of {max}")]
    ResourceGuard { n: usize, max: usize },

    #[error("state norm collapsed below 1e-300")]
    NormCollapsed,

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the CLI: 2 validation, 3 resource guard, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ResourceGuard { .. } => 3,
            Error::Io(_) => 4,
            _ => 2,
        }
    }
}
