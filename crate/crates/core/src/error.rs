use thiserror::Error;

use crate::egf::GridShape;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid grid shape {m}x{n}: both dimensions must be positive")]
    InvalidShape { m: usize, n: usize },

    #[error("square shape {0} out of scope: orbit counts under D2 are defined for m != n only")]
    SquareShape(GridShape),

    #[error("shape {shape} has {cells} cells, above the oracle limit of {limit}")]
    OracleLimit {
        shape: GridShape,
        cells: usize,
        limit: usize,
    },

    #[error("oracle limit {0} is unsupported (cell sets are 64-bit masks)")]
    OracleLimitTooLarge(usize),

    #[error("degree ({0}, {1}, {2}) exceeds series caps")]
    DegreeOutOfCaps(usize, usize, usize),

    #[error("exponential of a series with nonzero constant term {0}")]
    NonzeroConstantTerm(String),

    #[error("{what} is not a non-negative integer: {value}")]
    NonIntegral { what: String, value: String },

    #[error("{operation} requires {requirement}, got shape {shape}")]
    ParityMismatch {
        operation: &'static str,
        requirement: &'static str,
        shape: GridShape,
    },

    #[error("no {method} evaluation of {quantity} exists for shape {shape}")]
    MethodUnavailable {
        quantity: &'static str,
        method: &'static str,
        shape: GridShape,
    },

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}
