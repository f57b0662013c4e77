use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("expected a 4x4 grid, got {rows} rows (row lengths {lengths:?})")]
    Shape { rows: usize, lengths: Vec<usize> },

    #[error("entry {value} at ({row},{col}) is out of range 0..16")]
    EntryOutOfRange { row: usize, col: usize, value: u64 },

    #[error("square is not normal: entries are not exactly 0..16")]
    NotNormal,

    #[error("square is not compatible: {line} has {count} entries with bit position {position} set (expected 2)")]
    NotCompatible {
        line: String,
        position: u8,
        count: usize,
    },

    #[error("matrix is not a form: {line} has {count} ones (expected 2)")]
    NotAForm { line: String, count: u32 },

    #[error("invalid prime basis: {0}")]
    InvalidBasis(String),

    #[error("entry {value} at ({row},{col}) is not a squarefree product of the basis primes")]
    NotInBasis { row: usize, col: usize, value: u64 },

    #[error("{0} is outside the supported range")]
    ArgumentOutOfRange(String),

    #[error("invalid class label {0:?}")]
    InvalidClassLabel(String),
}
