//! Dense univariate polynomials over a field, with exact factorization over ℚ
//! up to degree 4.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::scalar::Field;
use super::{AlgebraError, Rational};

pub const MAX_FACTOR_DEGREE: usize = 4;

/// Coefficients lowest degree first; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<F: Field> {
    coeffs: Vec<F>,
}

impl<F: Field> Poly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn constant(c: F) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial `c·X^k`.
    pub fn monomial(c: F, k: usize) -> Self {
        let mut v = vec![F::zero(); k];
        v.push(c);
        Poly::new(v)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> F {
        self.coeffs.get(i).cloned().unwrap_or_else(F::zero)
    }

    pub fn leading(&self) -> F {
        self.coeffs.last().cloned().unwrap_or_else(F::zero)
    }

    pub fn scale(&self, c: &F) -> Self {
        Poly::new(self.coeffs.iter().map(|x| x.clone() * c.clone()).collect())
    }

    pub fn monic(&self) -> Self {
        match self.leading().inv() {
            Some(l) => self.scale(&l),
            None => self.clone(),
        }
    }

    pub fn eval(&self, x: &F) -> F {
        self.coeffs
            .iter()
            .rev()
            .fold(F::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        let mut out = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            let mut k = F::zero();
            for _ in 0..i {
                k = k + F::one();
            }
            out.push(c.clone() * k);
        }
        Poly::new(out)
    }

    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead_inv = divisor.leading().inv().expect("leading coefficient invertible");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![F::zero(); rem.len().saturating_sub(dd)];
        while rem.len() > dd {
            let top = rem.len() - 1;
            let c = rem[top].clone() * lead_inv.clone();
            let shift = top - dd;
            for (i, d) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] = rem[shift + i].clone() - c.clone() * d.clone();
            }
            quot[shift] = c;
            rem.pop();
            while rem.last().is_some_and(|x| x.is_zero()) {
                rem.pop();
            }
        }
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s·self + t·other = g`, `g` not normalized.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::constant(F::one()), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::constant(F::one()));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s2 = s0 - q.clone() * s1.clone();
            let t2 = t0 - q * t1.clone();
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        (r0, s0, t0)
    }

    /// `P(X^e)`.
    pub fn inflate(&self, e: usize) -> Self {
        let mut out = vec![F::zero(); self.coeffs.len().saturating_sub(1) * e + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i * e] = c.clone();
        }
        Poly::new(out)
    }

    /// `Q` with `self = Q(X^e)`, if one exists.
    pub fn deflate(&self, e: usize) -> Option<Self> {
        if e == 0 {
            return None;
        }
        if self
            .coeffs
            .iter()
            .enumerate()
            .any(|(i, c)| i % e != 0 && !c.is_zero())
        {
            return None;
        }
        Some(Poly::new(self.coeffs.iter().step_by(e).cloned().collect()))
    }

    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mon = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let cs = c.to_string();
            let term = if mon.is_empty() {
                cs
            } else if c.is_one() {
                mon
            } else if (-c.clone()).is_one() {
                format!("-{mon}")
            } else {
                format!("{cs}*{mon}")
            };
            terms.push(term);
        }
        let mut s = terms[0].clone();
        for t in &terms[1..] {
            if let Some(rest) = t.strip_prefix('-') {
                s.push_str(" - ");
                s.push_str(rest);
            } else {
                s.push_str(" + ");
                s.push_str(t);
            }
        }
        s
    }
}

impl<F: Field> Add for Poly<F> {
    type Output = Poly<F>;
    fn add(self, rhs: Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<F: Field> Sub for Poly<F> {
    type Output = Poly<F>;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<F: Field> Neg for Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Self {
        Poly::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl<F: Field> Mul for Poly<F> {
    type Output = Poly<F>;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_in("X"))
    }
}

// ---------------------------------------------------------------------------
// factorization over ℚ

fn int_content_primitive(p: &Poly<Rational>) -> Vec<BigInt> {
    let lcm = p
        .coeffs()
        .iter()
        .fold(BigInt::from(1), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::from(0), |acc, c| acc.gcd(c));
    let sign = if ints.last().is_some_and(|c| c.is_negative()) {
        -BigInt::from(1)
    } else {
        BigInt::from(1)
    };
    ints.into_iter().map(|c| (c / &g) * &sign).collect()
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if num_traits::Zero::is_zero(&n) {
        return vec![];
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::from(1);
    while &d * &d <= n {
        if num_traits::Zero::is_zero(&(&n % &d)) {
            small.push(d.clone());
            let q = &n / &d;
            if q != d {
                large.push(q);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// All rational roots of `p` (no multiplicity), via the rational root test.
pub fn rational_roots(p: &Poly<Rational>) -> Vec<Rational> {
    if p.degree().unwrap_or(0) == 0 {
        return vec![];
    }
    let mut roots = Vec::new();
    if Zero::is_zero(&p.coeff(0)) {
        roots.push(Rational::zero());
    }
    // strip factors of X
    let shift = p.coeffs().iter().take_while(|c| Zero::is_zero(*c)).count();
    let stripped = Poly::new(p.coeffs()[shift..].to_vec());
    if stripped.degree().unwrap_or(0) == 0 {
        return roots;
    }
    let ints = int_content_primitive(&stripped);
    let a0 = ints[0].clone();
    let an = ints.last().unwrap().clone();
    for num in divisors(&a0) {
        for den in divisors(&an) {
            for sign in [1i64, -1] {
                let cand = Rational::new(&num * BigInt::from(sign), den.clone());
                if Zero::is_zero(&stripped.eval(&cand)) && !roots.contains(&cand) {
                    roots.push(cand);
                }
            }
        }
    }
    roots.sort();
    roots
}

/// Squarefree decomposition `p = c·∏ f_i^i` (Yun), returns `(f_i, i)` with
/// nonconstant monic `f_i`.
fn squarefree_parts(p: &Poly<Rational>) -> Vec<(Poly<Rational>, usize)> {
    let a = p.monic();
    let da = a.derivative();
    let b = a.gcd(&da);
    if b.degree().unwrap_or(0) == 0 {
        return vec![(a, 1)];
    }
    let mut out = Vec::new();
    let mut c = a.div_rem(&b).0;
    let mut d = da.div_rem(&b).0 - c.derivative();
    let mut i = 1;
    while c.degree().unwrap_or(0) > 0 {
        let f = c.gcd(&d);
        c = c.div_rem(&f).0;
        d = d.div_rem(&f).0 - c.derivative();
        if f.degree().unwrap_or(0) > 0 {
            out.push((f.monic(), i));
        }
        i += 1;
    }
    out
}

fn lagrange_quadratic(xs: &[BigInt; 3], ys: &[BigInt; 3]) -> Poly<Rational> {
    let mut acc = Poly::zero();
    for i in 0..3 {
        let mut basis = Poly::constant(Rational::one());
        let mut denom = Rational::one();
        for j in 0..3 {
            if i == j {
                continue;
            }
            basis = basis
                * Poly::new(vec![
                    Rational::from_integer(-xs[j].clone()),
                    Rational::one(),
                ]);
            denom *= Rational::from_integer(&xs[i] - &xs[j]);
        }
        acc = acc + basis.scale(&(Rational::from_integer(ys[i].clone()) / denom));
    }
    acc
}

/// Looks for a quadratic factor of a squarefree quartic with no rational
/// roots (Kronecker's method on three evaluation points).
fn quadratic_factor(p: &Poly<Rational>) -> Option<Poly<Rational>> {
    let ints = int_content_primitive(p);
    let ip = Poly::new(ints.iter().map(|c| Rational::from_integer(c.clone())).collect());
    let mut xs: Vec<BigInt> = Vec::new();
    let mut k = 0i64;
    while xs.len() < 3 {
        let x = BigInt::from(if k % 2 == 0 { k / 2 } else { -(k + 1) / 2 });
        if !Zero::is_zero(&ip.eval(&Rational::from_integer(x.clone()))) {
            xs.push(x);
        }
        k += 1;
    }
    let xs = [xs[0].clone(), xs[1].clone(), xs[2].clone()];
    let vals: Vec<BigInt> = xs
        .iter()
        .map(|x| ip.eval(&Rational::from_integer(x.clone())).to_integer())
        .collect();
    let divs: Vec<Vec<BigInt>> = vals
        .iter()
        .map(|v| {
            divisors(v)
                .into_iter()
                .flat_map(|d| [d.clone(), -d])
                .collect()
        })
        .collect();
    for d0 in &divs[0] {
        for d1 in &divs[1] {
            for d2 in &divs[2] {
                let g = lagrange_quadratic(&xs, &[d0.clone(), d1.clone(), d2.clone()]);
                if g.degree() != Some(2) || !g.coeffs().iter().all(|c| c.is_integer()) {
                    continue;
                }
                if ip.rem(&g).is_zero() {
                    return Some(g.monic());
                }
            }
        }
    }
    None
}

/// Factors `p ∈ ℚ[X]` into monic irreducibles with multiplicities.  Every
/// squarefree part must have degree at most 4.
pub fn factor_rational(p: &Poly<Rational>) -> Result<Vec<(Poly<Rational>, usize)>, AlgebraError> {
    let deg = p.degree().ok_or(AlgebraError::ZeroPolynomial)?;
    if deg == 0 {
        return Ok(vec![]);
    }
    let mut out: Vec<(Poly<Rational>, usize)> = Vec::new();
    for (part, mult) in squarefree_parts(p) {
        let mut rest = part;
        for r in rational_roots(&rest) {
            let lin = Poly::new(vec![-r, Rational::one()]);
            rest = rest.div_rem(&lin).0;
            out.push((lin, mult));
        }
        match rest.degree().unwrap_or(0) {
            0 => {}
            1..=3 => out.push((rest.monic(), mult)),
            4 => match quadratic_factor(&rest) {
                Some(g) => {
                    let h = rest.div_rem(&g).0.monic();
                    out.push((g, mult));
                    out.push((h, mult));
                }
                None => out.push((rest.monic(), mult)),
            },
            d => {
                return Err(AlgebraError::FactorizationDegree {
                    degree: d,
                    max: MAX_FACTOR_DEGREE,
                })
            }
        }
    }
    out.sort_by(|a, b| {
        a.0.degree()
            .cmp(&b.0.degree())
            .then_with(|| a.0.coeffs().iter().rev().cmp(b.0.coeffs().iter().rev()))
    });
    Ok(out)
}

/// Multiplicity-weighted product of factors.
pub fn expand_factors<F: Field>(factors: &[(Poly<F>, usize)]) -> Poly<F> {
    factors.iter().fold(Poly::constant(F::one()), |acc, (f, m)| {
        (0..*m).fold(acc, |a, _| a * f.clone())
    })
}

pub(crate) fn rational_to_i64(q: &Rational) -> Option<i64> {
    if q.is_integer() {
        q.to_integer().to_i64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> Poly<Rational> {
        Poly::new(cs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    #[test]
    fn division_identity() {
        let a = p(&[1, 2, 3, 4]);
        let b = p(&[-1, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q * b + r, a);
    }

    #[test]
    fn roots_of_x2_minus_4() {
        let r = rational_roots(&p(&[-4, 0, 1]));
        assert_eq!(r, vec![Rational::from_integer((-2).into()), Rational::from_integer(2.into())]);
    }

    #[test]
    fn factor_x4_plus_4() {
        let f = factor_rational(&p(&[4, 0, 0, 0, 1])).unwrap();
        assert_eq!(f.len(), 2);
        assert!(f.iter().all(|(g, m)| g.degree() == Some(2) && *m == 1));
        assert_eq!(expand_factors(&f), p(&[4, 0, 0, 0, 1]));
    }

    #[test]
    fn factor_with_multiplicity() {
        // (X-1)^2 (X^2-2)
        let f = p(&[-1, 1]) * p(&[-1, 1]) * p(&[-2, 0, 1]);
        let fac = factor_rational(&f).unwrap();
        assert_eq!(fac, vec![(p(&[-1, 1]), 2), (p(&[-2, 0, 1]), 1)]);
    }

    #[test]
    fn irreducible_quartic_stays() {
        let f = p(&[2, 0, 0, 0, 1]);
        assert_eq!(factor_rational(&f).unwrap(), vec![(f, 1)]);
    }

    #[test]
    fn degree_five_irreducible_rejected() {
        assert!(factor_rational(&p(&[2, 0, 0, 0, 0, 1])).is_err());
    }

    #[test]
    fn deflate_inflate() {
        let f = p(&[-4, 0, 1]);
        let q = f.deflate(2).unwrap();
        assert_eq!(q, p(&[-4, 1]));
        assert_eq!(q.inflate(2), f);
        assert!(p(&[0, 1, 1]).deflate(2).is_none());
    }
}
