use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),
    #[error("invalid sites: {0}")]
    InvalidSites(String),
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),
    #[error("invalid context: {0}")]
    InvalidContext(String),
    #[error("singular parameter: {0}")]
    SingularParameter(String),
    #[error("inadmissible projector pair ({a}, {b}) for n = {n}")]
    InvalidPair { n: usize, a: i64, b: i64 },
    #[error("invalid braid point: {0}")]
    InvalidPoint(String),
    #[error("invalid chain spec: {0}")]
    InvalidSpec(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("singular Bethe roots: {0}")]
    SingularRoots(String),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
}

pub type Result<T> = std::result::Result<T, Error>;
