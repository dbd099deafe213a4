use thiserror::Error;

/// Failures of the exact layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("truncation window exhausted")]
    PrecisionExhausted,
    #[error("limit ε→0 does not exist: coefficient of ε^{order} is nonzero")]
    LimitDoesNotExist { order: i32 },
    #[error("leading coefficient is not invertible")]
    NotInvertible,
    #[error("series does not start with the constant 1")]
    NotUnitConstant,
    #[error("linear system is singular")]
    SingularSystem,
    #[error("interpolation nodes are not distinct")]
    DuplicateNodes,
    #[error("unsupported genus {0}")]
    UnsupportedGenus(usize),
    #[error("invalid input: {0}")]
    InvalidInput(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
