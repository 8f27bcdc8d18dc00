//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{what} called with negative argument {value}")]
    NegativeArgument { what: &'static str, value: i64 },
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("division by zero polynomial")]
    DivisionByZero,
    #[error("inexact division: ({numerator}) / ({denominator}) leaves a remainder")]
    InexactDivision { numerator: String, denominator: String },
    #[error("{0} needs a nonzero input")]
    ZeroInput(&'static str),
    #[error("invalid specification: {0}")]
    InvalidSpec(String),
    #[error("diagram error: {0}")]
    Diagram(String),
    #[error("clasp of color {n} exceeds the expansion bound {bound}")]
    ClaspTooLarge { n: usize, bound: usize },
    #[error("tail stability failed for {spec} between n={n} and n={next}: {detail}")]
    StabilityFailure { spec: String, n: i64, next: i64, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;
