use thiserror::Error;

use crate::fan::Cone;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero vector has no primitive generator")]
    ZeroVector,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("cone not strongly convex")]
    NotStronglyConvex,

    #[error("invalid fan: {0}")]
    InvalidFan(String),

    #[error("{0} is not a cone of the fan")]
    NotACone(Cone),

    #[error("{0} is already a ray of the fan")]
    AlreadyARay(String),

    #[error("{0} is not in the support of the fan")]
    NotInSupport(String),

    #[error("{what} = {value} out of range {lo}..={hi}")]
    OutOfRange {
        what: &'static str,
        value: i64,
        lo: i64,
        hi: i64,
    },

    #[error("divisor is not integral")]
    NonIntegral,

    #[error("not a curve class: {0}")]
    NotACurveClass(String),

    #[error("curve conditions fail: {0}")]
    CurveConditions(String),

    #[error("small modification hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("parameter search exhausted: {0}")]
    ParameterSearchExhausted(String),

    #[error("class is not extremal: {0}")]
    NotExtremal(String),

    #[error("fans do not share the same ray set")]
    RaySetMismatch,

    #[error("arithmetic overflow during lattice point enumeration")]
    Overflow,

    #[error("parse error: {0}")]
    Parse(String),
}
