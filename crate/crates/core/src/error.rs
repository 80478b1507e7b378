use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("invalid poset: {0}")]
    Poset(String),
    #[error("invalid perversity: {0}")]
    Perversity(String),
    #[error("map is not order preserving: {0}")]
    NotMonotone(String),
    #[error("invalid presentation: {0}")]
    Presentation(String),
    #[error("stratification conflict: {0}")]
    Stratification(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("perversity condition fails at stratum `{0}`")]
    PerversityContract(String),
    #[error("degree {degree} is not reported for a complex truncated at {kmax}")]
    Truncation { degree: usize, kmax: usize },
    #[error("not a chain map in degree {0}")]
    NotChainMap(usize),
    #[error("size limit exceeded: {0}")]
    TooLarge(String),
    #[error("invalid ring: {0}")]
    Ring(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
