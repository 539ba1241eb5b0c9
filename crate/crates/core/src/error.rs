use thiserror::Error;

/// Errors raised while loading data, validating a model or driving a search.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: unsupported itemset ({size} items); only single-item itemsets are supported")]
    UnsupportedItemset { line: usize, size: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("empty database")]
    EmptyDatabase,

    #[error("replication factor must be at least 1")]
    ZeroReplication,

    #[error("range ({lo},{hi}) is out of bounds for sequence {sid} of length {len}")]
    RangeOutOfBounds {
        sid: usize,
        lo: u32,
        hi: u32,
        len: usize,
    },

    #[error("invalid gap: minimum gap {min} exceeds maximum gap {max}")]
    InvalidGap { min: u32, max: u32 },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
