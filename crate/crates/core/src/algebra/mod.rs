//! Exact arithmetic: scalars, univariate and Laurent polynomials, truncated
//! Laurent series, weighted valuations and small dense linear algebra.

pub mod laurent;
pub mod linalg;
pub mod poly;
pub mod scalar;
pub mod series;
pub mod weight;

pub use laurent::{is_unit_in_power_series, log_derivative, Exponent, LaurentPolynomial};
pub use poly::{factor_rational, Poly};
pub use scalar::{Field, NumberField, Scalar};
pub use series::LaurentSeries;
pub use weight::{weighted_valuation, Mode, WeightVector};

pub use num_traits::{One, Zero};

pub type Rational = num_rational::BigRational;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("invalid number field: {0}")]
    InvalidField(String),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("cannot factor a degree-{degree} irreducible part (limit {max}); supply a factorization")]
    FactorizationDegree { degree: usize, max: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("index {index} out of range for {len} variables")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("precision exhausted: {0}")]
    Precision(String),
    #[error("negative weight r_{0}")]
    NegativeWeight(usize),
    #[error("division by zero")]
    DivisionByZero,
}

/// `n/d` as a rational; panics on `d = 0`.
pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn qi(n: i64) -> Rational {
    Rational::from_integer(n.into())
}
