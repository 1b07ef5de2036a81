use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the engine can report. Each variant maps onto a stable
/// machine-readable code (see [`Error::code`]) used by the CLI and server.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("row {row} has {found} cells, expected {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("duplicate {class} label {label:?}")]
    DuplicateLabel { class: &'static str, label: String },
    #[error("invalid cell token {token:?} at row {row}, column {col}")]
    InvalidCell {
        row: usize,
        col: usize,
        token: String,
    },
    #[error("dataset must have at least 2 rows and 2 columns, got {m}x{n}")]
    TooSmall { m: usize, n: usize },
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("unknown object class {0:?}")]
    UnknownClass(String),
    #[error("metadata error: {0}")]
    InvalidMeta(String),
    #[error("pair ({0}, {0}) is on the diagonal")]
    DiagonalPair(usize),
    #[error("index {index} out of range for {class} class of size {len}")]
    IndexOutOfRange {
        class: &'static str,
        index: usize,
        len: usize,
    },
    #[error("no commonly observed positions for pair ({i}, {j})")]
    NoCommonObservations { i: usize, j: usize },
    #[error("pooled rate {0} is degenerate")]
    DegeneratePooledRate(f64),
    #[error("every cell is missing")]
    AllMissing,
    #[error("the raw-hamming method requires a dataset without missing cells")]
    PresetRequiresCompleteData,
    #[error("method {0} is not a Bernoulli estimator")]
    NotBernoulli(&'static str),
    #[error("non-finite value: {0}")]
    NonFinite(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("eigen decomposition failed: {0}")]
    Eigen(String),
}

impl Error {
    /// Stable SCREAMING_SNAKE identifier for the error kind.
    pub fn code(&self) -> &'static str {
        match self {
            Error::RaggedRow { .. } => "RAGGED_ROW",
            Error::DuplicateLabel { .. } => "DUPLICATE_LABEL",
            Error::InvalidCell { .. } => "INVALID_CELL",
            Error::TooSmall { .. } => "TOO_SMALL",
            Error::Schema(_) => "SCHEMA_VIOLATION",
            Error::DimensionMismatch(_) => "DIMENSION_MISMATCH",
            Error::UnknownClass(_) => "UNKNOWN_CLASS",
            Error::InvalidMeta(_) => "INVALID_META",
            Error::DiagonalPair(_) => "DIAGONAL_PAIR",
            Error::IndexOutOfRange { .. } => "INDEX_OUT_OF_RANGE",
            Error::NoCommonObservations { .. } => "NO_COMMON_OBSERVATIONS",
            Error::DegeneratePooledRate(_) => "DEGENERATE_POOLED_RATE",
            Error::AllMissing => "ALL_MISSING",
            Error::PresetRequiresCompleteData => "PRESET_REQUIRES_COMPLETE_DATA",
            Error::NotBernoulli(_) => "NOT_BERNOULLI",
            Error::NonFinite(_) => "NON_FINITE",
            Error::InvalidParameter(_) => "INVALID_PARAMETER",
            Error::Eigen(_) => "EIGEN_FAILURE",
        }
    }

    /// Coarse grouping used for exit codes and HTTP statuses.
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::RaggedRow { .. }
            | Error::DuplicateLabel { .. }
            | Error::InvalidCell { .. }
            | Error::TooSmall { .. }
            | Error::Schema(_)
            | Error::DimensionMismatch(_)
            | Error::UnknownClass(_)
            | Error::InvalidMeta(_) => ErrorKind::Data,
            Error::InvalidParameter(_)
            | Error::DiagonalPair(_)
            | Error::IndexOutOfRange { .. }
            | Error::NotBernoulli(_) => ErrorKind::Usage,
            Error::NoCommonObservations { .. }
            | Error::DegeneratePooledRate(_)
            | Error::AllMissing
            | Error::PresetRequiresCompleteData => ErrorKind::Precondition,
            Error::NonFinite(_) | Error::Eigen(_) => ErrorKind::Numeric,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Bad arguments or parameters.
    Usage,
    /// Input data could not be parsed or failed validation.
    Data,
    /// Data parsed but violates a method precondition.
    Precondition,
    Numeric,
}
