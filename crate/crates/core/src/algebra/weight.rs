//! Weight vectors for Gauss norms and the weighted valuation `v_r`.

use num_traits::{Signed, Zero};

use super::laurent::LaurentPolynomial;
use super::{AlgebraError, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    /// All coordinates free.
    Full,
    /// Only logarithmic coordinates free; the rest pinned to zero.
    Sharp,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVector {
    r: Vec<Rational>,
    mode: Mode,
}

impl WeightVector {
    /// In sharp mode `log_vars` marks the free coordinates and the others must be zero.
    pub fn new(r: Vec<Rational>, mode: Mode, log_vars: &[bool]) -> Result<Self, AlgebraError> {
        if log_vars.len() != r.len() {
            return Err(AlgebraError::DimensionMismatch {
                expected: r.len(),
                found: log_vars.len(),
            });
        }
        for (j, x) in r.iter().enumerate() {
            if x.is_negative() {
                return Err(AlgebraError::NegativeWeight(j));
            }
            if mode == Mode::Sharp && !log_vars[j] && !x.is_zero() {
                return Err(AlgebraError::DimensionMismatch {
                    expected: 0,
                    found: j,
                });
            }
        }
        Ok(WeightVector { r, mode })
    }

    pub fn full(r: Vec<Rational>) -> Result<Self, AlgebraError> {
        let n = r.len();
        Self::new(r, Mode::Full, &vec![true; n])
    }

    pub fn values(&self) -> &[Rational] {
        &self.r
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }
}

pub(crate) fn dot(a: &[i64], r: &[Rational]) -> Rational {
    a.iter()
        .zip(r)
        .fold(Rational::zero(), |acc, (x, y)| acc + y * Rational::from_integer((*x).into()))
}

/// `min ⟨a, r⟩` over the support; `None` stands for +∞ (φ = 0).
pub fn weighted_valuation(
    phi: &LaurentPolynomial,
    r: &WeightVector,
) -> Result<Option<Rational>, AlgebraError> {
    if phi.nvars() != r.len() {
        return Err(AlgebraError::DimensionMismatch {
            expected: phi.nvars(),
            found: r.len(),
        });
    }
    Ok(phi.support().map(|a| dot(a, r.values())).min())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, qi};

    #[test]
    fn valuation_examples() {
        let p = LaurentPolynomial::from_int_terms(2, &[(1, &[1, -2])]);
        let r = WeightVector::full(vec![qi(1), qi(1)]).unwrap();
        assert_eq!(weighted_valuation(&p, &r).unwrap(), Some(qi(-1)));
        let p = LaurentPolynomial::from_int_terms(2, &[(1, &[-1, 0]), (1, &[0, -1])]);
        let r = WeightVector::full(vec![qi(2), qi(3)]).unwrap();
        assert_eq!(weighted_valuation(&p, &r).unwrap(), Some(qi(-3)));
        let r = WeightVector::full(vec![q(1, 2), qi(0)]).unwrap();
        assert_eq!(weighted_valuation(&p, &r).unwrap(), Some(q(-1, 2)));
        assert_eq!(
            weighted_valuation(&LaurentPolynomial::zero(2), &r).unwrap(),
            None
        );
    }

    #[test]
    fn rejects_bad_weights() {
        assert!(WeightVector::full(vec![qi(-1)]).is_err());
        assert!(WeightVector::new(vec![qi(1), qi(1)], Mode::Sharp, &[true, false]).is_err());
        assert!(WeightVector::new(vec![qi(1), qi(0)], Mode::Sharp, &[true, false]).is_ok());
        let p = LaurentPolynomial::from_int_terms(1, &[(1, &[1])]);
        assert!(weighted_valuation(&p, &WeightVector::full(vec![qi(1), qi(1)]).unwrap()).is_err());
    }
}
