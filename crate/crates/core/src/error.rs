use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("coefficient must be positive")]
    ZeroCoefficient,
    #[error("cannot subtract {lhs} from {rhs}: {lhs} is larger")]
    SubtractUnderflow { lhs: String, rhs: String },
    #[error("{0} is not a limit ordinal")]
    NotALimit(String),
    #[error("space {0} is not scattered")]
    NotScattered(String),
    #[error("space {0} is not a nonempty countable compact space")]
    NotCountableCompact(String),
    #[error("space {0} is not constructive")]
    NotConstructive(String),
    #[error("space {0} is not zero-dimensional")]
    NotZeroDimensional(String),
    #[error("space {0} is not metrizable")]
    NotMetrizable(String),
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("cantor prefix of length {given} is shorter than function depth {needed}")]
    PrefixTooShort { given: usize, needed: usize },
    #[error("shape mismatch: {0}")]
    SpaceMismatch(String),
    #[error("invalid region: {0}")]
    InvalidRegion(String),
    #[error("region has no point of rank {0}")]
    InsufficientHeight(String),
    #[error("derived set of order {alpha} has fewer than {m} points")]
    InsufficientDerivedSet { alpha: String, m: u64 },
    #[error("part regions overlap: {0}")]
    RegionOverlap(String),
    #[error("part region not contained in its envelope: {0}")]
    ContainmentViolation(String),
    #[error("relative cellularity at order {order} is below {n}")]
    InsufficientCellularity { order: String, n: u64 },
    #[error("region does not meet the perfect kernel")]
    KernelEmpty,
    #[error("syntax error at {line}:{col}: expected {expected}")]
    Syntax { line: usize, col: usize, expected: String },
    #[error("malformed document: {0}")]
    Json(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}
