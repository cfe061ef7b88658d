use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("column `{0}` not found")]
    ColumnNotFound(String),

    #[error("dataset has no rows")]
    EmptyData,

    #[error("column `{column}` has {found} rows, expected {expected}")]
    LengthMismatch {
        column: String,
        expected: usize,
        found: usize,
    },

    #[error("column `{column}` row {row} is not a finite number")]
    NonFinite { column: String, row: usize },

    #[error("duplicate column `{0}`")]
    DuplicateColumn(String),

    #[error("vertex V({0}, {1}) is not cached in this lattice")]
    MissingVertex(String, String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("weights sum to zero (|sum| = {sum:e})")]
    ZeroWeight { sum: f64 },

    #[error("singular system: determinant = {determinant:e}")]
    Singular { determinant: f64 },

    #[error("header `{0}` not found in input")]
    MissingHeader(String),

    #[error("row {row}, column `{column}`: `{value}` is not a number")]
    NonNumeric {
        row: usize,
        column: String,
        value: String,
    },

    #[error("row {row} has {found} fields, expected {expected}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("malformed input: {0}")]
    Input(String),

    #[error("model expression error at column {position}: {message}")]
    Parse { position: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Input(err.to_string())
    }
}
