use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty input: no header row")]
    EmptyInput,
    #[error("record on line {line} has {found} fields, expected {expected}")]
    RaggedRow {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("invalid UTF-8 at byte offset {0}")]
    Utf8(usize),
    #[error("unterminated quoted field starting on line {0}")]
    UnterminatedQuote(usize),

    #[error("cannot parse timestamp {0:?}")]
    Parse(String),
    #[error("timestamp {0:?} is outside the calendar range")]
    Range(String),

    #[error("unknown column {0:?}")]
    UnknownColumn(String),
    #[error("duplicate column name {0:?}")]
    DuplicateColumn(String),
    #[error("column names must be non-empty")]
    EmptyColumnName,
    #[error("column {name:?} has {found} rows, frame has {expected}")]
    ColumnLength {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("column {column:?} has dtype {found}, expected {expected}")]
    WrongDType {
        column: String,
        expected: &'static str,
        found: String,
    },
    #[error("column {0:?} has no non-null values")]
    EmptyColumn(String),
    #[error("column {column:?} has {classes} classes, more than the allowed {limit}")]
    TooManyClasses {
        column: String,
        classes: usize,
        limit: usize,
    },

    #[error("labels contain a single class")]
    SingleClass,
    #[error("null value in feature {0:?}")]
    NullInFeatures(String),
    #[error("expected {expected} features, got {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("label {0:?} is not binary")]
    NonBinaryLabel(String),

    #[error("model file schema_version {found}, expected {expected}")]
    SchemaVersionMismatch { found: u64, expected: u64 },
    #[error("malformed model file: {0}")]
    MalformedModelFile(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
