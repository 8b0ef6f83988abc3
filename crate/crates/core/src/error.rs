use thiserror::Error;

use crate::expr::ParseError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("expected {expected} bits for arity {arity}, got {actual}")]
    LengthMismatch {
        arity: usize,
        expected: usize,
        actual: usize,
    },
    #[error("invalid character {found:?} at position {position}")]
    InvalidCharacter { found: char, position: usize },
    #[error("hex padding bits must be zero")]
    NonZeroPadding,
    #[error("arity {arity} exceeds the cap of {cap} for {what}")]
    ArityCap {
        arity: usize,
        cap: usize,
        what: &'static str,
    },
    #[error("variable x{variable} is out of range for arity {arity}")]
    VariableOutOfRange { variable: usize, arity: usize },
    #[error("variable x{0} assigned more than once")]
    DuplicateVariable(usize),
    #[error("k = {k} is out of range 0..={arity}")]
    KOutOfRange { k: usize, arity: usize },
    #[error("{0}")]
    InvalidLayerSpec(String),
    #[error("function is constant; {0}")]
    ConstantFunction(&'static str),
    #[error("bias {0} must lie strictly between 0 and 1")]
    InvalidBias(f64),
    #[error("{0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}
