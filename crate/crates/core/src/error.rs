use thiserror::Error;

/// Errors raised by the solver library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("item {index}: weight must be >= 1 and value > 0")]
    NonPositiveInput { index: usize },
    #[error("selection has length {got}, instance has {expected} items")]
    LengthMismatch { expected: usize, got: usize },
    #[error("fixed items weigh {fixed_weight}, capacity is {capacity}")]
    InfeasibleFixings { fixed_weight: u64, capacity: u64 },
    #[error("no free variable left to branch on")]
    NoFreeVariable,
    #[error("node relaxation is integer; nothing to branch on")]
    IntegerRelaxation,
    #[error("dynamic programming table of {cells} cells exceeds the limit of {limit}")]
    TableTooLarge { cells: u128, limit: u128 },
    #[error("brute force supports at most {limit} items, got {n}")]
    TooLarge { n: usize, limit: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("report has no usable runs")]
    EmptyReport,
    #[error("solve report carries no trace")]
    NoTrace,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unsupported format_version {0}")]
    VersionUnsupported(u32),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
