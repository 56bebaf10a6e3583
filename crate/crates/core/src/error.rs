use thiserror::Error;

/// Errors raised while reading instance, scheme or solution text.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub fn new(line: usize, kind: ParseErrorKind) -> Self {
        Self { line, kind }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseErrorKind {
    #[error("malformed line: {0}")]
    Malformed(String),
    #[error("missing fleet parameter `{0}`")]
    MissingParameter(&'static str),
    #[error("window exceeds horizon for node {0}")]
    WindowExceedsHorizon(String),
    #[error("invalid time window for node {0}")]
    InvalidWindow(String),
    #[error("duplicate node id {0}")]
    DuplicateNodeId(String),
    #[error("expected exactly one depot, found {0}")]
    DepotCount(usize),
    #[error("missing PRICES section")]
    MissingPrices,
    #[error("invalid PRICES section: {0}")]
    InvalidPrices(String),
    #[error("invalid distance matrix: {0}")]
    InvalidMatrix(String),
    #[error("invalid value: {0}")]
    InvalidValue(String),
}

/// Errors from the evaluation, scheduling and search layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("period {period} outside 1..={periods}")]
    PeriodOutOfRange { period: usize, periods: usize },
    #[error("node id {0} out of range")]
    InvalidNode(usize),
    #[error("route has {0} station visits; at most two are supported")]
    TooManyStations(usize),
    #[error("malformed route: {0}")]
    MalformedRoute(String),
    #[error("size guard exceeded: {what} is {actual}, limit {limit}")]
    GuardExceeded {
        what: &'static str,
        actual: usize,
        limit: usize,
    },
    #[error("unknown pricing scheme `{0}`")]
    UnknownScheme(String),
    #[error("invalid search parameters: {0}")]
    InvalidParams(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
