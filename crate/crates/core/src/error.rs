use thiserror::Error;

/// Errors raised by instance handling, evaluation, export and analysis.
///
/// Solver budget exhaustion is not an error: it is reported through
/// [`crate::solvers::Status::BudgetExceeded`] so partial results survive.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("instance needs at least 2 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("point {index} has dimension {found}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("malformed instance header: {0}")]
    BadHeader(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("missing distance entry for pair ({0}, {1})")]
    MissingEntry(usize, usize),
    #[error("conflicting entries for pair ({i}, {j}): {first} vs {second}")]
    SymmetryConflict {
        i: usize,
        j: usize,
        first: f64,
        second: f64,
    },
    #[error("invalid distance {value} for pair ({i}, {j})")]
    InvalidDistance { i: usize, j: usize, value: f64 },
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("invalid generator parameters: {0}")]
    InvalidSpec(String),
    #[error("k = {k} out of range 2..={n}")]
    TruncateRange { k: usize, n: usize },
    #[error("index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("duplicate index {0} in selection")]
    DuplicateIndex(usize),
    #[error("objective needs at least {needed} selected elements, got {found}")]
    SelectionTooSmall { needed: usize, found: usize },
    #[error("invalid subset size m = {m} for n = {n}")]
    InvalidM { m: usize, n: usize },
    #[error("threshold formulation requires a finite l")]
    MissingThreshold,
    #[error("value for {var} is not binary: {value}")]
    NonBinary { var: String, value: f64 },
    #[error("cardinality violation: {found} selected, expected {expected}")]
    Cardinality { expected: usize, found: usize },
    #[error("reference value is zero")]
    ZeroReference,
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("need at least {needed} values, got {found}")]
    TooFewValues { needed: usize, found: usize },
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("histogram mode {mode} not applicable: {reason}")]
    HistogramMode { mode: &'static str, reason: String },
    #[error("instance has no 2-D coordinates")]
    NoPlanarCoords,
    #[error("I/O error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
