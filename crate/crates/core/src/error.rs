use thiserror::Error;

/// Errors produced by the numeration, operator and Salem-function routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("base magnitude q must be at least 2, got {0}")]
    InvalidBase(u32),

    #[error("digit {digit} at position {position} is outside the alphabet 0..={max}")]
    InvalidDigit {
        digit: u32,
        position: usize,
        max: u32,
    },

    #[error("{0} lies outside the domain [{1}, {2}]")]
    OutOfDomain(String, String, String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("invalid index sequence: {0}")]
    IndexSequence(String),

    #[error("invalid parameters: {0}")]
    Params(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("parameters do not define a probability distribution: {0}")]
    NotADistribution(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
