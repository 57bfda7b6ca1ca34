use thiserror::Error;

/// Errors raised by the model-building and evaluation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("objects are defined on different state spaces")]
    SpaceMismatch,

    #[error("state space has {size} states; this operation supports at most {max}")]
    SpaceTooLarge { size: usize, max: usize },

    #[error("invalid state space: {0}")]
    InvalidSpace(String),

    #[error("invalid act: {0}")]
    InvalidAct(String),

    #[error("invalid probability measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid risk partition: {0}")]
    InvalidPartition(String),

    #[error("invalid capacity ({constraint}): {detail}")]
    InvalidCapacity {
        constraint: &'static str,
        detail: String,
    },

    #[error("invalid function: {0}")]
    InvalidFunction(String),

    #[error("argument {value} lies outside the domain [{lo}, {hi}]")]
    Domain { value: f64, lo: f64, hi: f64 },

    #[error("value {value} lies outside the range [{lo}, {hi}]")]
    Range { value: f64, lo: f64, hi: f64 },

    #[error("function is not strictly increasing")]
    NotStrictlyIncreasing,

    #[error("acts are not comonotonic")]
    NotComonotonic,

    #[error("the core is empty")]
    EmptyCore,

    #[error("events do not form a nested chain")]
    ChainNotNested,

    #[error("capacity is not consistent with the reference measure: {0}")]
    NotPConsistent(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("operation not supported for this model: {0}")]
    Unsupported(String),

    #[error("{0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
