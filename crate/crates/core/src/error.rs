use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid phase `{0}`: expected `num/den` with den > 0")]
    InvalidPhase(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix must be square and non-empty, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    /// Row indices are zero-based; the message prints them one-based.
    #[error("not a complex Hadamard matrix: rows {} and {} are not orthogonal", .row_a + 1, .row_b + 1)]
    NotHadamard { row_a: usize, row_b: usize },

    #[error("invalid permutation of length {0}")]
    InvalidPermutation(usize),

    #[error("duplicate element in set: {0}")]
    DuplicateElement(String),

    #[error("invalid group specification `{0}`: expected `p1.q1,p2.q2,p3.q3` with every p, q >= 2")]
    InvalidGroup(String),

    #[error("index {index} out of range for size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("index set must be non-empty")]
    EmptyIndexSet,

    #[error("size {size} is not {n} x {k}")]
    InvalidFactorization { size: usize, n: usize, k: usize },

    #[error("missing value for parameter `{0}`")]
    MissingParameter(String),

    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),

    #[error("unknown family `{0}` (expected S8_4, S12_5 or S16_11)")]
    UnknownFamily(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("duplicate catalog id `{0}`")]
    DuplicateId(String),

    #[error("catalog entry `{id}`: {source}")]
    CatalogEntry {
        id: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
