//! One-variable Laurent series with explicit absolute precision.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::scalar::{Field, Scalar};
use num_traits::{One, Zero};
use super::AlgebraError;

pub const DEFAULT_RELATIVE_PRECISION: i64 = 32;

/// Relative precision used when an exact series must be truncated, from
/// `LOGCHAR_PRECISION` if set.
pub fn default_precision() -> i64 {
    std::env::var("LOGCHAR_PRECISION")
        .ok()
        .and_then(|s| s.trim().parse::<i64>().ok())
        .filter(|&n| n > 0)
        .unwrap_or(DEFAULT_RELATIVE_PRECISION)
}

/// `Σ c_k t^k` with every exponent `≥ precision` unknown.  `precision = None`
/// means the series is an exact Laurent polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries {
    coeffs: BTreeMap<i64, Scalar>,
    precision: Option<i64>,
}

impl LaurentSeries {
    pub fn exact(terms: impl IntoIterator<Item = (i64, Scalar)>) -> Self {
        let mut s = LaurentSeries {
            coeffs: BTreeMap::new(),
            precision: None,
        };
        for (k, c) in terms {
            s.add_term(k, c);
        }
        s
    }

    pub fn from_ints(terms: &[(i64, i64)]) -> Self {
        Self::exact(terms.iter().map(|&(k, c)| (k, Scalar::int(c))))
    }

    pub fn monomial(c: Scalar, k: i64) -> Self {
        Self::exact([(k, c)])
    }

    /// `O(t^n)`: nothing known from `n` on.
    pub fn big_o(n: i64) -> Self {
        LaurentSeries {
            coeffs: BTreeMap::new(),
            precision: Some(n),
        }
    }

    pub fn with_precision(mut self, n: i64) -> Self {
        let n = self.precision.map_or(n, |p| p.min(n));
        self.coeffs.retain(|&k, _| k < n);
        self.precision = Some(n);
        self
    }

    fn add_term(&mut self, k: i64, c: Scalar) {
        if c.is_zero() || self.precision.is_some_and(|p| k >= p) {
            return;
        }
        let v = self.coeffs.remove(&k).map(|o| o + c.clone()).unwrap_or(c);
        if !v.is_zero() {
            self.coeffs.insert(k, v);
        }
    }

    pub fn precision(&self) -> Option<i64> {
        self.precision
    }

    pub fn is_exact(&self) -> bool {
        self.precision.is_none()
    }

    /// Known nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Scalar)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn coeff(&self, k: i64) -> Result<Scalar, AlgebraError> {
        if self.precision.is_some_and(|p| k >= p) {
            return Err(AlgebraError::Precision(format!(
                "coefficient of t^{k} beyond O(t^{})",
                self.precision.unwrap()
            )));
        }
        Ok(self.coeffs.get(&k).cloned().unwrap_or_else(Scalar::zero))
    }

    /// `Ok(None)` for the exact zero series; an error when no nonzero term is
    /// known before the precision bound.
    pub fn valuation(&self) -> Result<Option<i64>, AlgebraError> {
        match (self.coeffs.keys().next(), self.precision) {
            (Some(&k), _) => Ok(Some(k)),
            (None, None) => Ok(None),
            (None, Some(p)) => Err(AlgebraError::Precision(format!(
                "no nonzero term known below O(t^{p})"
            ))),
        }
    }

    /// Lower bound for the valuation, `+∞` as `None`.
    fn valuation_bound(&self) -> Option<i64> {
        self.coeffs.keys().next().copied().or(self.precision)
    }

    pub fn leading(&self) -> Result<Option<(i64, Scalar)>, AlgebraError> {
        Ok(self
            .valuation()?
            .map(|k| (k, self.coeffs[&k].clone())))
    }

    /// Exact zero (as opposed to no known nonzero term).
    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.is_empty() && self.precision.is_none()
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut s = LaurentSeries {
            coeffs: BTreeMap::new(),
            precision: self.precision,
        };
        for (k, v) in &self.coeffs {
            s.add_term(*k, v.clone() * c.clone());
        }
        s
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentSeries {
            coeffs: self.coeffs.iter().map(|(e, c)| (e + k, c.clone())).collect(),
            precision: self.precision.map(|p| p + k),
        }
    }

    /// `d/dt`.
    pub fn derivative(&self) -> Self {
        let mut s = LaurentSeries {
            coeffs: BTreeMap::new(),
            precision: self.precision.map(|p| p - 1),
        };
        for (k, c) in &self.coeffs {
            s.add_term(k - 1, c.clone() * Scalar::int(*k));
        }
        s
    }

    /// `t d/dt`.
    pub fn euler(&self) -> Self {
        self.derivative().shift(1)
    }

    /// `t ↦ c·t`.
    pub fn rescale(&self, c: &Scalar) -> Result<Self, AlgebraError> {
        let ci = c.inv().ok_or(AlgebraError::DivisionByZero)?;
        let mut s = LaurentSeries {
            coeffs: BTreeMap::new(),
            precision: self.precision,
        };
        for (k, v) in &self.coeffs {
            let f = if *k >= 0 { c.pow(*k as u32) } else { ci.pow((-k) as u32) };
            s.add_term(*k, v.clone() * f);
        }
        Ok(s)
    }

    /// `t ↦ t^h`.
    pub fn inflate(&self, h: i64) -> Self {
        assert!(h > 0);
        LaurentSeries {
            coeffs: self.coeffs.iter().map(|(e, c)| (e * h, c.clone())).collect(),
            precision: self.precision.map(|p| p * h),
        }
    }

    /// Multiplicative inverse.  Exact inputs with more than one term are
    /// expanded to `default_precision()` terms beyond the leading one.
    pub fn inverse(&self) -> Result<Self, AlgebraError> {
        let (v, lead) = self
            .leading()?
            .ok_or(AlgebraError::DivisionByZero)?;
        let rel = match self.precision {
            Some(p) => p - v,
            None if self.coeffs.len() == 1 => {
                return Ok(Self::monomial(lead.inv().unwrap(), -v));
            }
            None => default_precision(),
        };
        let li = lead.inv().unwrap();
        // u = t^{-v} self, unit with u_0 = lead; solve u·w = 1 term by term
        let mut w: Vec<Scalar> = Vec::with_capacity(rel as usize);
        for n in 0..rel {
            let mut acc = if n == 0 { Scalar::one() } else { Scalar::zero() };
            for k in 1..=n {
                let uk = self.coeffs.get(&(v + k)).cloned().unwrap_or_else(Scalar::zero);
                if !uk.is_zero() {
                    acc = acc - uk * w[(n - k) as usize].clone();
                }
            }
            w.push(acc * li.clone());
        }
        let mut s = LaurentSeries {
            coeffs: BTreeMap::new(),
            precision: Some(rel - v),
        };
        for (n, c) in w.into_iter().enumerate() {
            s.add_term(n as i64 - v, c);
        }
        Ok(s)
    }

    pub fn display_in(&self, var: &str) -> String {
        let mut parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                1 => format!("{c}*{var}"),
                _ => format!("{c}*{var}^{k}"),
            })
            .collect();
        if let Some(p) = self.precision {
            parts.push(format!("O({var}^{p})"));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

fn min_prec(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl Add for LaurentSeries {
    type Output = LaurentSeries;
    fn add(self, rhs: Self) -> Self {
        let mut s = LaurentSeries {
            coeffs: BTreeMap::new(),
            precision: min_prec(self.precision, rhs.precision),
        };
        for (k, c) in self.coeffs.into_iter().chain(rhs.coeffs) {
            s.add_term(k, c);
        }
        s
    }
}

impl Neg for LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> Self {
        self.scale(&Scalar::int(-1))
    }
}

impl Sub for LaurentSeries {
    type Output = LaurentSeries;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for LaurentSeries {
    type Output = LaurentSeries;
    fn mul(self, rhs: Self) -> Self {
        // (a + O(t^Na))(b + O(t^Nb)) is known below min(Na + v(b), Nb + v(a))
        let pa = match (self.precision, rhs.valuation_bound()) {
            (Some(n), Some(v)) => Some(n + v),
            _ => None,
        };
        let pb = match (rhs.precision, self.valuation_bound()) {
            (Some(n), Some(v)) => Some(n + v),
            _ => None,
        };
        let precision = if self.is_exact_zero() || rhs.is_exact_zero() {
            None
        } else {
            min_prec(pa, pb)
        };
        let mut s = LaurentSeries {
            coeffs: BTreeMap::new(),
            precision,
        };
        for (i, a) in &self.coeffs {
            for (j, b) in &rhs.coeffs {
                s.add_term(i + j, a.clone() * b.clone());
            }
        }
        s
    }
}

/// Pivoting treats a series with no known nonzero term as zero.
impl Zero for LaurentSeries {
    fn zero() -> Self {
        LaurentSeries::exact([])
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for LaurentSeries {
    fn one() -> Self {
        LaurentSeries::exact([(0, Scalar::one())])
    }
}

impl Field for LaurentSeries {
    fn inv(&self) -> Option<Self> {
        self.inverse().ok()
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_in("t"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precision_never_increases() {
        let a = LaurentSeries::from_ints(&[(-1, 1), (0, 2)]).with_precision(5);
        let b = LaurentSeries::from_ints(&[(0, 1), (3, 1)]).with_precision(8);
        assert_eq!((a.clone() + b.clone()).precision(), Some(5));
        // v(a) = -1, v(b) = 0: min(5 + 0, 8 - 1)
        assert_eq!((a.clone() * b).precision(), Some(5));
        assert_eq!(a.derivative().precision(), Some(4));
    }

    #[test]
    fn inverse_of_one_minus_t() {
        let a = LaurentSeries::from_ints(&[(0, 1), (1, -1)]).with_precision(10);
        let inv = a.inverse().unwrap();
        for k in 0..10 {
            assert_eq!(inv.coeff(k).unwrap(), Scalar::one());
        }
        let prod = a * inv;
        assert_eq!(prod.coeff(0).unwrap(), Scalar::one());
        for k in 1..prod.precision().unwrap() {
            assert!(prod.coeff(k).unwrap().is_zero());
        }
    }

    #[test]
    fn monomial_inverse_is_exact() {
        let a = LaurentSeries::monomial(Scalar::int(2), -3);
        assert_eq!(a.inverse().unwrap(), LaurentSeries::monomial(Scalar::frac(1, 2), 3));
    }

    #[test]
    fn unknown_coefficients_error() {
        let a = LaurentSeries::big_o(2);
        assert!(a.coeff(2).is_err());
        assert!(a.valuation().is_err());
        assert!(a.coeff(1).unwrap().is_zero());
    }
}
