use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not positive definite (pivot {pivot} = {value:e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("degenerate vector: {0}")]
    DegenerateVector(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("empty input: {0}")]
    EmptyInput(String),
    #[error("invalid probability {0}")]
    InvalidProbability(f64),

    #[error("graph contains a directed cycle")]
    CyclicGraph,
    #[error("vertex sets are not disjoint")]
    OverlappingSets,
    #[error("graph must have exactly the vertices X, Y, Z, S")]
    WrongVertexSet,
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("graph does not satisfy the PMAR separation pattern")]
    GraphNotPmar,
    #[error("graph format error on line {line}: {msg}")]
    GraphFormat { line: usize, msg: String },

    #[error("selection resampling gave fewer than {min_selected} selected rows after {attempts} attempts")]
    ResampleLimitExceeded { min_selected: usize, attempts: usize },

    #[error("all sample weights are zero")]
    AllZeroWeights,
    #[error("propensity fit needs both classes present")]
    SingleClass,
    #[error("propensity fit diverged after {0} iterations (separable data?)")]
    Diverged(usize),
    #[error("need at least {needed} selected rows, got {got}")]
    TooFewSelected { needed: usize, got: usize },
    #[error("no selected rows")]
    NoSelectedRows,

    #[error("replication {replication} failed: {msg}")]
    ReplicationFailed { replication: usize, msg: String },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("schema error: missing columns {0:?}")]
    Schema(Vec<String>),
    #[error("schema error on line {line}, column {column}: {msg}")]
    SchemaValue { line: usize, column: String, msg: String },
    #[error("invalid value: {0}")]
    InvalidValue(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
