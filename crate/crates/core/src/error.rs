use thiserror::Error;

use crate::hypergeom::Geometry;

/// Errors raised by the exact-arithmetic pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("{context}: expected a rational value but found nonzero zeta-components {components:?}")]
    NotRational {
        context: String,
        components: Vec<String>,
    },

    #[error("series division: leading coefficient of the divisor is not invertible ({detail})")]
    NonInvertibleDivision { detail: String },

    #[error("exponential of a series with nonzero constant term")]
    NonzeroConstantTerm,

    #[error("cannot integrate: coefficient of x^0 is {0}, must vanish")]
    NonIntegrable(String),

    #[error("operator D applied to a {0}-series")]
    WrongVariable(&'static str),

    #[error("expected geometry {expected}, found {found}")]
    WrongGeometry { expected: Geometry, found: Geometry },

    #[error("Birkhoff step: {0}")]
    NonUnitLeadingTerm(String),

    #[error("insufficient truncation order: need {needed}, have {available}")]
    InsufficientOrder { needed: i64, available: i64 },

    #[error("Picard-Fuchs recursion at p = {p}: no polynomial solution ({detail})")]
    InconsistentSystem { p: usize, detail: String },

    #[error("consistency failure at level {level}: {detail}")]
    ConsistencyFailure { level: usize, detail: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
