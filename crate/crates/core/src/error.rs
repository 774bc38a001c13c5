use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("the zero polynomial has no valuation or degree")]
    ZeroPolynomial,

    #[error("expected a polynomial, found negative exponent {0}")]
    NegativeExponent(i64),

    #[error("scaling factor must be nonzero")]
    ZeroScale,

    #[error("cross-exponent mismatch: {left} vs {right}")]
    CrossExponentMismatch { left: u32, right: u32 },

    #[error("cross-exponent must be at least 1")]
    InvalidCrossExponent,

    #[error("determinant {0} is not a unit")]
    NotInvertible(String),

    #[error("coefficient {0} is not real")]
    NotReal(String),

    #[error("weights (base {base}, fiber {fiber}) do not fit cross-exponent {e}")]
    WeightMismatch { base: u32, fiber: u32, e: u32 },

    #[error("invalid form: {0}")]
    InvalidForm(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
