//! Exact computation of irregularities, cleanness, log-characteristic cycles
//! and de Rham Euler characteristics for flat connections given in good-model
//! form.

pub mod algebra;
pub mod cli;
pub mod cdvf;
pub mod cycles;
pub mod euler;
pub mod goodmodel;
pub mod tropical;

pub use algebra::{LaurentPolynomial, Rational, Scalar};
