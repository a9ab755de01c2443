use thiserror::Error;

use crate::projection::PairIndex;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("a tropical point needs at least 2 coordinates, got {0}")]
    TooFewCoordinates(usize),

    #[error("{0} must not be empty")]
    Empty(&'static str),

    #[error("n >= 3 required, got n = {0}")]
    DimensionTooSmall(usize),

    #[error("invalid column pair ({d1},{d2}) for n = {n}: need 2 <= d1 < d2 <= n")]
    InvalidPair { d1: usize, d2: usize, n: usize },

    #[error("column index {omega} out of range [2, {n}]")]
    InvalidIndex { omega: usize, n: usize },

    #[error("floor {floor} exceeds the smallest entry {min} of the data matrix")]
    FloorTooHigh { floor: String, min: String },

    #[error("non-finite value {0}")]
    NonFinite(String),

    #[error("cannot parse `{0}` as a number")]
    Parse(String),

    #[error("malformed linear program: {0}")]
    MalformedLp(String),

    #[error("linear program is {0}")]
    LpStatus(&'static str),

    #[error("invalid generator config: {0}")]
    InvalidConfig(String),

    #[error(
        "pair {pair}: last row is not a Fermat-Weber point yet agrees with the computed one \
         in both kept coordinates"
    )]
    ExclusivityViolated { pair: PairIndex },

    #[error("internal invariant broken: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
