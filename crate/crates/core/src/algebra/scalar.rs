//! Exact scalars over ℚ or a number field ℚ[α]/(p(α)).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::poly::{factor_rational, Poly};
use super::{AlgebraError, Rational};

/// Arithmetic needed by the generic polynomial and linear-algebra routines.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Sub<Output = Self>
    + Neg<Output = Self>
{
    fn inv(&self) -> Option<Self>;
}

impl Field for Rational {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
}

pub const MAX_FIELD_DEGREE: usize = 6;

/// ℚ[α]/(p(α)) with `p` monic of degree 2..=6.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumberField {
    modulus: Poly<Rational>,
    generator: String,
    irreducibility_verified: bool,
}

impl NumberField {
    /// Builds the field from the coefficients of `p`, lowest degree first.
    ///
    /// Irreducibility is verified exactly up to degree 4 and trusted above
    /// that (a warning is logged).
    pub fn new(modulus: Vec<Rational>, generator: &str) -> Result<Self, AlgebraError> {
        let modulus = Poly::new(modulus);
        let degree = modulus
            .degree()
            .ok_or_else(|| AlgebraError::InvalidField("zero modulus".into()))?;
        if !(2..=MAX_FIELD_DEGREE).contains(&degree) {
            return Err(AlgebraError::InvalidField(format!(
                "modulus degree {degree} outside 2..={MAX_FIELD_DEGREE}"
            )));
        }
        if !modulus.leading().is_one() {
            return Err(AlgebraError::InvalidField("modulus must be monic".into()));
        }
        let irreducibility_verified = if degree <= 4 {
            let factors = factor_rational(&modulus)?;
            if factors.len() != 1 || factors[0].1 != 1 {
                return Err(AlgebraError::InvalidField(format!(
                    "modulus {} is reducible over Q",
                    modulus.display_in("x")
                )));
            }
            true
        } else {
            log::warn!(
                "irreducibility of degree-{degree} modulus {} is not verified",
                modulus.display_in("x")
            );
            false
        };
        Ok(NumberField {
            modulus,
            generator: generator.to_string(),
            irreducibility_verified,
        })
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap_or(0)
    }

    pub fn modulus(&self) -> &Poly<Rational> {
        &self.modulus
    }

    pub fn generator_name(&self) -> &str {
        &self.generator
    }

    pub fn irreducibility_verified(&self) -> bool {
        self.irreducibility_verified
    }

    /// The generator α as a scalar.
    pub fn generator(self: &Arc<Self>) -> Scalar {
        Scalar::from_coeffs(vec![Rational::zero(), Rational::one()], Some(self.clone()))
    }
}

/// An element of the base field K.  Rational scalars carry no field and mix
/// freely with elements of any number field.
#[derive(Clone, Debug)]
pub struct Scalar {
    // representative modulo p, lowest power of α first, trimmed
    coeffs: Vec<Rational>,
    field: Option<Arc<NumberField>>,
}

impl Scalar {
    pub fn from_coeffs(coeffs: Vec<Rational>, field: Option<Arc<NumberField>>) -> Self {
        let field = field.filter(|f| f.degree() >= 2);
        let mut poly = Poly::new(coeffs);
        if let Some(f) = &field {
            poly = poly.rem(f.modulus());
        }
        Scalar {
            coeffs: poly.into_coeffs(),
            field,
        }
    }

    pub fn rational(q: Rational) -> Self {
        Scalar::from_coeffs(vec![q], None)
    }

    pub fn int(n: i64) -> Self {
        Scalar::rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Scalar::rational(Rational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn field(&self) -> Option<&Arc<NumberField>> {
        self.field.as_ref()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// `Some(q)` when the element lies in ℚ.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    fn join_field(&self, other: &Scalar) -> Option<Arc<NumberField>> {
        match (&self.field, &other.field) {
            (None, None) => None,
            (Some(f), None) | (None, Some(f)) => Some(f.clone()),
            (Some(f), Some(g)) => {
                assert!(
                    Arc::ptr_eq(f, g) || f == g,
                    "arithmetic between scalars of different number fields"
                );
                Some(f.clone())
            }
        }
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl Eq for Scalar {}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Structural order on representatives, used for canonical sorting only.
impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl std::hash::Hash for Scalar {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar {
            coeffs: vec![],
            field: None,
        }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::int(1)
    }
}

impl Field for Scalar {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        match &self.field {
            None => Some(Scalar::rational(self.coeffs[0].recip())),
            Some(f) => {
                let a = Poly::new(self.coeffs.clone());
                let (g, s, _) = a.ext_gcd(f.modulus());
                // p irreducible, so gcd is a nonzero constant
                let g0 = g.coeff(0);
                if g.degree() != Some(0) {
                    return None;
                }
                let inv = s.scale(&g0.recip());
                Some(Scalar::from_coeffs(inv.into_coeffs(), Some(f.clone())))
            }
        }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        let field = self.join_field(&rhs);
        let p = Poly::new(self.coeffs) + Poly::new(rhs.coeffs);
        Scalar {
            coeffs: p.into_coeffs(),
            field,
        }
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        self + (-rhs)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
            field: self.field,
        }
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        let field = self.join_field(&rhs);
        let p = Poly::new(self.coeffs) * Poly::new(rhs.coeffs);
        Scalar::from_coeffs(p.into_coeffs(), field)
    }
}

impl From<Rational> for Scalar {
    fn from(q: Rational) -> Self {
        Scalar::rational(q)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

pub(crate) fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        if self.coeffs.len() == 1 {
            return write!(f, "{}", fmt_rational(&self.coeffs[0]));
        }
        let name = self
            .field
            .as_ref()
            .map(|k| k.generator_name().to_string())
            .unwrap_or_else(|| "a".into());
        let mut first = true;
        write!(f, "(")?;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if Zero::is_zero(c) {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let body = match i {
                0 => fmt_rational(&abs),
                _ => {
                    let mon = if i == 1 {
                        name.clone()
                    } else {
                        format!("{name}^{i}")
                    };
                    if abs.is_one() {
                        mon
                    } else {
                        format!("{}*{mon}", fmt_rational(&abs))
                    }
                }
            };
            write!(f, "{body}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn sqrt2_field() -> Arc<NumberField> {
        Arc::new(NumberField::new(vec![q(-2, 1), q(0, 1), q(1, 1)], "s").unwrap())
    }

    #[test]
    fn sqrt_two_squares_to_two() {
        let k = sqrt2_field();
        let s = k.generator();
        assert_eq!(s.clone() * s, Scalar::int(2));
    }

    #[test]
    fn number_field_inverse() {
        let k = sqrt2_field();
        let x = Scalar::from_coeffs(vec![q(1, 1), q(3, 1)], Some(k)); // 1 + 3s
        let y = x.inv().unwrap();
        assert_eq!(x * y, Scalar::one());
    }

    #[test]
    fn reducible_modulus_rejected() {
        // x^2 - 1
        assert!(NumberField::new(vec![q(-1, 1), q(0, 1), q(1, 1)], "a").is_err());
        // x^4 + 4 = (x^2+2x+2)(x^2-2x+2)
        assert!(NumberField::new(vec![q(4, 1), q(0, 1), q(0, 1), q(0, 1), q(1, 1)], "a").is_err());
    }

    #[test]
    fn cubic_field_arithmetic() {
        // a^3 = 2
        let k = Arc::new(
            NumberField::new(vec![q(-2, 1), q(0, 1), q(0, 1), q(1, 1)], "a").unwrap(),
        );
        let a = k.generator();
        assert_eq!(a.pow(3), Scalar::int(2));
        let x = a.clone() + Scalar::int(1);
        assert_eq!(x.clone() * x.inv().unwrap(), Scalar::one());
        assert_eq!(format!("{}", a.pow(2) * Scalar::frac(-1, 2)), "(-1/2*a^2)");
    }

    #[test]
    fn degree_cap() {
        let mut coeffs = vec![q(2, 1)];
        coeffs.extend(std::iter::repeat_n(q(0, 1), 6));
        coeffs.push(q(1, 1));
        assert!(NumberField::new(coeffs, "a").is_err());
    }
}
