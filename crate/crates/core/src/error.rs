use thiserror::Error;

/// Errors raised while parsing permutation text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("malformed permutation text: {0}")]
    Malformed(String),
    #[error("point {0} repeated in cycle notation")]
    RepeatedPoint(usize),
    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("image list is not a bijection on 1..={0}")]
    NotBijection(usize),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("degree mismatch: {0} vs {1}")]
    Degree(usize, usize),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("group is not transitive")]
    NotTransitive,
    #[error("partition is not a block system of the group: {0}")]
    InvalidBlocks(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("regular cyclic search exhausted its budget without a decision (degree {degree}, {draws} draws)")]
    SearchExhausted { degree: usize, draws: usize },
    #[error("feasibility violated: {0}")]
    FeasibilityViolation(String),
    #[error("frame verification failed: {0}")]
    Frame(String),
    #[error("wreath standardization failed: {0}")]
    Standardize(String),
    #[error("group order {order} exceeds enumeration cap {cap}")]
    Cap { order: String, cap: u64 },
    #[error("cycle base of size {size} exceeds the totient bound {bound}")]
    PhiBound { size: usize, bound: u64 },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
