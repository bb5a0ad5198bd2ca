use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is singular")]
    Singular,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0} is not a linear form")]
    NotLinear(String),
    #[error("polynomial is not homogeneous")]
    Inhomogeneous,
    #[error("enumeration cap of {cap} elements exceeded ({reached} reached)")]
    CapExceeded { cap: usize, reached: usize },
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("not a character: {0}")]
    NotCharacter(String),
    #[error("not invariant: {0}")]
    NotInvariant(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
}
