//! Sparse multivariate Laurent polynomials with exact coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Signed;

use super::scalar::{Field, Scalar};
use num_traits::{One, Zero};
use super::AlgebraError;

pub type Exponent = Vec<i64>;

/// Finite support map ℤⁿ → K with no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPolynomial {
    nvars: usize,
    terms: BTreeMap<Exponent, Scalar>,
}

impl LaurentPolynomial {
    pub fn zero(nvars: usize) -> Self {
        LaurentPolynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        Self::monomial(c, vec![0; nvars])
    }

    pub fn monomial(c: Scalar, exp: Exponent) -> Self {
        let mut p = Self::zero(exp.len());
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    /// Builds from `(coefficient, exponent)` pairs, summing repeats.
    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = (Scalar, Exponent)>,
    ) -> Result<Self, AlgebraError> {
        let mut p = Self::zero(nvars);
        for (c, e) in terms {
            if e.len() != nvars {
                return Err(AlgebraError::DimensionMismatch {
                    expected: nvars,
                    found: e.len(),
                });
            }
            p.add_term(c, e);
        }
        Ok(p)
    }

    /// Shorthand for tests and examples: integer coefficients.
    pub fn from_int_terms(nvars: usize, terms: &[(i64, &[i64])]) -> Self {
        Self::from_terms(
            nvars,
            terms.iter().map(|(c, e)| (Scalar::int(*c), e.to_vec())),
        )
        .expect("exponent arity")
    }

    pub fn add_term(&mut self, c: Scalar, e: Exponent) {
        debug_assert_eq!(e.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        let entry = self.terms.remove(&e).map(|old| old + c.clone()).unwrap_or(c);
        if !entry.is_zero() {
            self.terms.insert(e, entry);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Scalar)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Exponent> {
        self.terms.keys()
    }

    pub fn coeff(&self, e: &[i64]) -> Scalar {
        self.terms.get(e).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Coefficient of the zero exponent.
    pub fn constant_term(&self) -> Scalar {
        self.coeff(&vec![0; self.nvars])
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&a| a == 0))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e, v) in &self.terms {
            p.add_term(v.clone() * c.clone(), e.clone());
        }
        p
    }

    /// Multiplies by the monomial `x^shift`.
    pub fn shift(&self, shift: &[i64]) -> Self {
        LaurentPolynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (add_exp(e, shift), c.clone()))
                .collect(),
        }
    }

    /// Minimum exponent of variable `j` over the support.
    pub fn min_exponent(&self, j: usize) -> Option<i64> {
        self.terms.keys().map(|e| e[j]).min()
    }

    pub fn max_exponent(&self, j: usize) -> Option<i64> {
        self.terms.keys().map(|e| e[j]).max()
    }

    /// Coordinatewise minimum of the support.
    pub fn min_corner(&self) -> Option<Exponent> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, e| {
            acc.iter().zip(e).map(|(a, b)| *a.min(b)).collect()
        }))
    }

    /// Terms whose exponent in variable `j` equals `k`, kept in all variables.
    pub fn slice(&self, j: usize, k: i64) -> Self {
        LaurentPolynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e[j] == k)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// `∂/∂x_j`.
    pub fn partial(&self, j: usize) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[j] != 0 {
                let mut e2 = e.clone();
                e2[j] -= 1;
                p.add_term(c.clone() * Scalar::int(e[j]), e2);
            }
        }
        p
    }

    /// `x_j ∂/∂x_j`.
    pub fn euler(&self, j: usize) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            p.add_term(c.clone() * Scalar::int(e[j]), e.clone());
        }
        p
    }

    /// Substitutes `x_j ↦ x_j^{h_j}` for every variable.
    pub fn inflate(&self, h: &[i64]) -> Self {
        LaurentPolynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(h).map(|(a, b)| a * b).collect(), c.clone()))
                .collect(),
        }
    }

    /// Evaluates the variables listed in `values` (the others are kept).
    /// Variables with negative exponents must receive nonzero values.
    pub fn partial_eval(&self, values: &[Option<Scalar>]) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut coeff = c.clone();
            let mut e2 = e.clone();
            for (j, v) in values.iter().enumerate() {
                if let Some(v) = v {
                    let k = e[j];
                    let factor = if k >= 0 {
                        v.pow(k as u32)
                    } else {
                        v.inv().expect("negative power of zero").pow((-k) as u32)
                    };
                    coeff = coeff * factor;
                    e2[j] = 0;
                }
            }
            p.add_term(coeff, e2);
        }
        p
    }

    /// Taylor shift `x_j ↦ z_j + x_j` for the listed variables; those must
    /// carry only nonnegative exponents.
    pub fn translate(&self, z: &[Option<Scalar>]) -> Self {
        let mut acc = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut term = Self::monomial(c.clone(), vec![0; self.nvars]);
            for j in 0..self.nvars {
                match &z[j] {
                    Some(zj) if !zj.is_zero() => {
                        assert!(e[j] >= 0, "translate needs polynomial variables");
                        let mut binom = Self::zero(self.nvars);
                        let n = e[j] as u64;
                        let mut choose = num_bigint::BigInt::from(1);
                        for k in 0..=n {
                            let mut ek = vec![0; self.nvars];
                            ek[j] = k as i64;
                            let coeff = Scalar::rational(super::Rational::from_integer(choose.clone()))
                                * zj.pow((n - k) as u32);
                            binom.add_term(coeff, ek);
                            choose = choose * num_bigint::BigInt::from(n - k)
                                / num_bigint::BigInt::from(k + 1);
                        }
                        term = term * binom;
                    }
                    _ => {
                        let mut ej = vec![0; self.nvars];
                        ej[j] = e[j];
                        term = term.shift(&ej);
                    }
                }
            }
            acc = acc + term;
        }
        acc
    }

    /// Display with the given variable names.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut pieces: Vec<String> = Vec::new();
        for (e, c) in self.terms.iter().rev() {
            let mon: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &a)| a != 0)
                .map(|(j, &a)| {
                    let name = names.get(j).cloned().unwrap_or_else(|| format!("x{}", j + 1));
                    if a == 1 {
                        name
                    } else {
                        format!("{name}^{a}")
                    }
                })
                .collect();
            let mon = mon.join("*");
            let (neg, abs) = match c.as_rational() {
                Some(q) if q.is_negative() => (true, Scalar::rational(-q)),
                _ => (false, c.clone()),
            };
            let body = if mon.is_empty() {
                abs.to_string()
            } else if abs.is_one() {
                mon
            } else {
                format!("{abs}*{mon}")
            };
            pieces.push(if neg { format!("-{body}") } else { body });
        }
        let mut s = pieces[0].clone();
        for p in &pieces[1..] {
            match p.strip_prefix('-') {
                Some(rest) => {
                    s.push_str(" - ");
                    s.push_str(rest);
                }
                None => {
                    s.push_str(" + ");
                    s.push_str(p);
                }
            }
        }
        s
    }
}

pub(crate) fn add_exp(a: &[i64], b: &[i64]) -> Exponent {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

impl Add for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(mut self, rhs: Self) -> Self {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        for (e, c) in rhs.terms {
            self.add_term(c, e);
        }
        self
    }
}

impl Sub for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> Self {
        LaurentPolynomial {
            nvars: self.nvars,
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl Mul for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: Self) -> Self {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut p = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                p.add_term(c1.clone() * c2.clone(), add_exp(e1, e2));
            }
        }
        p
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&[]))
    }
}

/// `x_j ∂_j φ` for logarithmic coordinates (`j < m`), `∂_j φ` otherwise.
pub fn log_derivative(
    phi: &LaurentPolynomial,
    j: usize,
    log_vars: &[bool],
) -> Result<LaurentPolynomial, AlgebraError> {
    if j >= phi.nvars() || log_vars.len() != phi.nvars() {
        return Err(AlgebraError::IndexOutOfRange {
            index: j,
            len: phi.nvars(),
        });
    }
    Ok(if log_vars[j] {
        phi.euler(j)
    } else {
        phi.partial(j)
    })
}

/// Sufficient test for a unit of `k⟦x⟧`: polynomial with nonzero constant term.
pub fn is_unit_in_power_series(u: &LaurentPolynomial) -> bool {
    u.support().all(|e| e.iter().all(|&a| a >= 0)) && !u.constant_term().is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_derivative_examples() {
        let p = LaurentPolynomial::from_int_terms(1, &[(1, &[-2])]);
        assert_eq!(
            log_derivative(&p, 0, &[true]).unwrap(),
            LaurentPolynomial::from_int_terms(1, &[(-2, &[-2])])
        );
        // x/y^2, derivative in y with only x logarithmic
        let p = LaurentPolynomial::from_int_terms(2, &[(1, &[1, -2])]);
        assert_eq!(
            log_derivative(&p, 1, &[true, false]).unwrap(),
            LaurentPolynomial::from_int_terms(2, &[(-2, &[1, -3])])
        );
        let p = LaurentPolynomial::from_int_terms(2, &[(3, &[0, 0]), (1, &[-1, -1])]);
        assert_eq!(
            log_derivative(&p, 1, &[true, true]).unwrap(),
            LaurentPolynomial::from_int_terms(2, &[(-1, &[-1, -1])])
        );
        assert!(log_derivative(&p, 2, &[true, true]).is_err());
    }

    #[test]
    fn unit_examples() {
        assert!(is_unit_in_power_series(&LaurentPolynomial::from_int_terms(
            2,
            &[(1, &[0, 0]), (1, &[1, 0]), (1, &[0, 2])]
        )));
        assert!(!is_unit_in_power_series(&LaurentPolynomial::from_int_terms(
            2,
            &[(1, &[1, 0])]
        )));
        assert!(!is_unit_in_power_series(&LaurentPolynomial::from_int_terms(
            1,
            &[(2, &[0]), (1, &[-1])]
        )));
    }

    #[test]
    fn translate_matches_binomial() {
        // (x)^2 at x = 1 + x~  ->  1 + 2x + x^2
        let p = LaurentPolynomial::from_int_terms(1, &[(1, &[2])]);
        let t = p.translate(&[Some(Scalar::int(1))]);
        assert_eq!(
            t,
            LaurentPolynomial::from_int_terms(1, &[(1, &[0]), (2, &[1]), (1, &[2])])
        );
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let p = LaurentPolynomial::from_int_terms(1, &[(1, &[1])]);
        assert!((p.clone() - p).is_zero());
    }

    #[test]
    fn display_uses_names() {
        let p = LaurentPolynomial::from_int_terms(2, &[(1, &[1, -2]), (-2, &[0, 0])]);
        assert_eq!(p.display_with(&["x".into(), "y".into()]), "x*y^-2 - 2");
    }
}
