//! Differential operators over `k((t))`: Newton polygons, irregularities,
//! refined residues, cyclic vectors and the local cycle of rank-one pieces.

pub mod cyclic;
pub mod local;

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::algebra::poly::{expand_factors, factor_rational};
use crate::algebra::{AlgebraError, LaurentSeries, Poly, Rational, Scalar};
use crate::cycles::CycleError;

pub use cyclic::{companion, cyclic_vector, radius_oracle};
pub use local::{local_zcar_rank1, theta_relation_check};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CdvfError {
    #[error("invalid operator: {0}")]
    InvalidOperator(String),
    #[error("insufficient precision: {0}")]
    Precision(String),
    #[error("{0} is not an irregularity slope of the operator")]
    NotASlope(String),
    #[error("total irregularity {0} is not an integer")]
    NonIntegral(String),
    #[error("residue polynomial of degree {degree} over a number field needs a supplied factorization")]
    FactorizationNeeded { degree: usize },
    #[error("supplied factorization does not multiply back to the residue polynomial")]
    BadFactorization,
    #[error("residue polynomial is not a polynomial in X^{0}")]
    NotInvariant(u64),
    #[error("no cyclic vector among the candidates at this precision")]
    NoCyclicVector,
    #[error("no pole along the divisor (irregularity 0)")]
    ZeroIrregularity,
    #[error("leading refined coefficient vanishes although the irregularity is positive")]
    VanishingTheta,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Cycle(#[from] CycleError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gauge {
    /// Powers of `∂ = d/dt`.
    D,
    /// Powers of `Δ = t·d/dt`.
    Theta,
}

/// Monic `X^d + c_1 X^{d-1} + … + c_d` with `X = ∂` or `Δ`, coefficients on
/// the left.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffOperator {
    gauge: Gauge,
    coeffs: Vec<LaurentSeries>,
}

impl DiffOperator {
    /// `coeffs[i-1] = c_i`.
    pub fn new(gauge: Gauge, coeffs: Vec<LaurentSeries>) -> Result<Self, CdvfError> {
        if coeffs.is_empty() {
            return Err(CdvfError::InvalidOperator("order must be at least 1".into()));
        }
        Ok(DiffOperator { gauge, coeffs })
    }

    /// Exact operator from `(exponent, coefficient)` lists per `c_i`.
    pub fn from_ints(gauge: Gauge, coeffs: &[&[(i64, i64)]]) -> Self {
        Self::new(gauge, coeffs.iter().map(|c| LaurentSeries::from_ints(c)).collect())
            .expect("nonempty operator")
    }

    pub fn gauge(&self) -> Gauge {
        self.gauge
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// `c_i` for `i = 1..=d`; `c_0 = 1`.
    pub fn coeff(&self, i: usize) -> LaurentSeries {
        if i == 0 {
            LaurentSeries::one()
        } else {
            self.coeffs[i - 1].clone()
        }
    }

    pub fn coeffs(&self) -> &[LaurentSeries] {
        &self.coeffs
    }

    /// Rewrites `t^d·P` in powers of `Δ`, using
    /// `t^k ∂^k = Δ(Δ-1)…(Δ-k+1)`.
    pub fn to_theta_gauge(&self) -> DiffOperator {
        if self.gauge == Gauge::Theta {
            return self.clone();
        }
        let d = self.order();
        // falling[k][m]: coefficient of Δ^m in Δ(Δ-1)…(Δ-k+1)
        let mut falling: Vec<Vec<i64>> = vec![vec![1]];
        for k in 1..=d {
            let prev = &falling[k - 1];
            let mut next = vec![0i64; k + 1];
            for (m, &c) in prev.iter().enumerate() {
                next[m + 1] += c;
                next[m] -= c * (k as i64 - 1);
            }
            falling.push(next);
        }
        // a_m = Σ_i c_i t^i s(d-i, m)
        let mut a: Vec<LaurentSeries> = vec![LaurentSeries::zero(); d + 1];
        for i in 0..=d {
            let ci = self.coeff(i).shift(i as i64);
            for (m, &s) in falling[d - i].iter().enumerate() {
                if s != 0 {
                    a[m] = a[m].clone() + ci.scale(&Scalar::int(s));
                }
            }
        }
        debug_assert_eq!(a[d], LaurentSeries::one());
        let coeffs = (1..=d).map(|i| a[d - i].clone()).collect();
        DiffOperator {
            gauge: Gauge::Theta,
            coeffs,
        }
    }

    /// Pullback along `t = s^h` in the `Δ`-gauge, rescaled to stay monic:
    /// `Δ_t = Δ_s / h`.
    pub fn kummer(&self, h: u64) -> DiffOperator {
        let op = self.to_theta_gauge();
        let coeffs = op
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let i = k + 1;
                c.inflate(h as i64).scale(&Scalar::int((h as i64).pow(i as u32)))
            })
            .collect();
        DiffOperator {
            gauge: Gauge::Theta,
            coeffs,
        }
    }

    /// Substitution `t = c·u`.
    pub fn rescale(&self, c: &Scalar) -> Result<DiffOperator, CdvfError> {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, a)| {
                let a = a.rescale(c)?;
                Ok(match self.gauge {
                    Gauge::D => a.scale(&c.pow(k as u32 + 1)),
                    Gauge::Theta => a,
                })
            })
            .collect::<Result<_, AlgebraError>>()?;
        Ok(DiffOperator {
            gauge: self.gauge,
            coeffs,
        })
    }

    /// `self ∘ other` for `∂`-gauge operators.
    pub fn compose(&self, other: &DiffOperator) -> Result<DiffOperator, CdvfError> {
        if self.gauge != Gauge::D || other.gauge != Gauge::D {
            return Err(CdvfError::InvalidOperator("composition needs the d/dt gauge".into()));
        }
        let (d, e) = (self.order(), other.order());
        let mut out: Vec<LaurentSeries> = vec![LaurentSeries::zero(); d + e + 1];
        for i in 0..=d {
            let p = self.coeff(i);
            let k = d - i;
            for j in 0..=e {
                // ∂^k ∘ q = Σ_m C(k,m) q^{(m)} ∂^{k-m}
                let mut q = other.coeff(j);
                let mut binom: i64 = 1;
                for m in 0..=k {
                    let power = k - m + e - j;
                    let term = p.clone() * q.scale(&Scalar::int(binom));
                    let idx = d + e - power;
                    out[idx] = out[idx].clone() + term;
                    q = q.derivative();
                    binom = binom * (k - m) as i64 / (m as i64 + 1);
                }
            }
        }
        DiffOperator::new(Gauge::D, out.into_iter().skip(1).collect())
    }
}

impl fmt::Display for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let x = match self.gauge {
            Gauge::D => "D",
            Gauge::Theta => "T",
        };
        write!(f, "{x}^{}", self.order())?;
        for (k, c) in self.coeffs.iter().enumerate() {
            let p = self.order() - k - 1;
            if c.is_exact_zero() {
                continue;
            }
            match p {
                0 => write!(f, " + ({c})")?,
                1 => write!(f, " + ({c})*{x}")?,
                _ => write!(f, " + ({c})*{x}^{p}")?,
            }
        }
        Ok(())
    }
}

/// Lower convex hull of `(i, v(c_i))` with irregularity data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub gauge: Gauge,
    pub order: usize,
    pub vertices: Vec<(usize, Rational)>,
    /// Finite slopes with horizontal lengths; a vertical tail (vanishing
    /// trailing coefficients) is reported separately.
    pub slopes: Vec<(Rational, usize)>,
    pub vertical_tail: usize,
    /// Irregularities with multiplicity, largest first.
    pub irregularities: Vec<Rational>,
}

impl NewtonPolygon {
    pub fn total_irregularity(&self) -> Rational {
        self.irregularities
            .iter()
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// Distinct irregularities with multiplicities, largest first.
    pub fn irregularity_classes(&self) -> Vec<(Rational, usize)> {
        let mut out: Vec<(Rational, usize)> = Vec::new();
        for r in &self.irregularities {
            match out.last_mut() {
                Some((v, m)) if v == r => *m += 1,
                _ => out.push((r.clone(), 1)),
            }
        }
        out
    }

    fn hull_at(&self, i: usize) -> Option<Rational> {
        for w in self.vertices.windows(2) {
            let ((x0, y0), (x1, y1)) = (&w[0], &w[1]);
            if *x0 <= i && i <= *x1 {
                let t = Rational::from_integer(((i - x0) as i64).into())
                    / Rational::from_integer(((x1 - x0) as i64).into());
                return Some(y0 + (y1 - y0) * t);
            }
        }
        match self.vertices.last() {
            Some((x, y)) if *x == i => Some(y.clone()),
            _ => None,
        }
    }
}

fn irr_of_slope(gauge: Gauge, s: &Rational) -> Rational {
    let v = match gauge {
        Gauge::D => -s - Rational::one(),
        Gauge::Theta => -s.clone(),
    };
    if v.is_positive() {
        v
    } else {
        Rational::zero()
    }
}

/// Newton polygon with precision audit and integrality of the total
/// irregularity.
pub fn newton_polygon(p: &DiffOperator) -> Result<NewtonPolygon, CdvfError> {
    let d = p.order();
    let mut known: Vec<(usize, Rational)> = Vec::new();
    let mut unknown: Vec<(usize, i64)> = Vec::new();
    for i in 0..=d {
        let c = p.coeff(i);
        match c.valuation() {
            Ok(Some(v)) => known.push((i, Rational::from_integer(v.into()))),
            Ok(None) => {}
            Err(_) => unknown.push((i, c.precision().unwrap())),
        }
    }
    // lower hull, monotone chain
    let mut hull: Vec<(usize, Rational)> = Vec::new();
    for pt in known {
        while hull.len() >= 2 {
            let (a, b) = (&hull[hull.len() - 2], &hull[hull.len() - 1]);
            // drop b if it lies on or above segment a–pt
            let lhs = (&b.1 - &a.1) * Rational::from_integer(((pt.0 - a.0) as i64).into());
            let rhs = (&pt.1 - &a.1) * Rational::from_integer(((b.0 - a.0) as i64).into());
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let mut slopes = Vec::new();
    let mut irregularities = Vec::new();
    for w in hull.windows(2) {
        let len = w[1].0 - w[0].0;
        let s = (&w[1].1 - &w[0].1) / Rational::from_integer((len as i64).into());
        for _ in 0..len {
            irregularities.push(irr_of_slope(p.gauge, &s));
        }
        slopes.push((s, len));
    }
    let last = hull.last().map(|v| v.0).unwrap_or(0);
    let vertical_tail = d - last;
    irregularities.extend(std::iter::repeat_n(Rational::zero(), vertical_tail));
    irregularities.sort_by(|a, b| b.cmp(a));
    let poly = NewtonPolygon {
        gauge: p.gauge,
        order: d,
        vertices: hull,
        slopes,
        vertical_tail,
        irregularities,
    };
    for (i, n) in unknown {
        match poly.hull_at(i) {
            Some(h) if Rational::from_integer(n.into()) >= h => {}
            _ => {
                return Err(CdvfError::Precision(format!(
                    "coefficient {i} is only known modulo t^{n}, which does not certify the polygon"
                )))
            }
        }
    }
    let total = poly.total_irregularity();
    if !total.is_integer() {
        return Err(CdvfError::NonIntegral(crate::algebra::scalar::fmt_rational(&total)));
    }
    Ok(poly)
}

/// One Galois orbit of leading refined coefficients on a pure-slope piece.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueOrbit {
    /// Irreducible factor `P(Y)` of `Q`, where `q(X) = Q(X^e)`.
    pub factor: Poly<Scalar>,
    pub multiplicity: usize,
    /// Size of the residue orbit, `deg P`.
    pub r: usize,
    /// Dimension of the corresponding piece, `e·deg P·multiplicity`.
    pub dim: usize,
}

impl ResidueOrbit {
    /// `dim·b / r`, an integer for every genuine orbit.
    pub fn swan_quotient(&self, b: &Rational) -> Rational {
        Rational::from_integer((self.dim as i64).into()) * b
            / Rational::from_integer((self.r as i64).into())
    }
}

/// Leading data of the slope-`b` part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefinedClass {
    pub slope: Rational,
    /// Kummer degree used to clear denominators.
    pub kummer: u64,
    /// Ramification index of the slope, the denominator of `b`.
    pub e: u64,
    /// Monic face polynomial whose roots are the leading coefficients of
    /// `Δ_s`-eigenvalues `θ·s^{-b·h}` on the cover.
    pub q: Poly<Scalar>,
    pub orbits: Vec<ResidueOrbit>,
}

fn to_rational_poly(p: &Poly<Scalar>) -> Option<Poly<Rational>> {
    p.coeffs()
        .iter()
        .map(|c| c.as_rational())
        .collect::<Option<Vec<_>>>()
        .map(Poly::new)
}

fn to_scalar_poly(p: &Poly<Rational>) -> Poly<Scalar> {
    Poly::new(p.coeffs().iter().cloned().map(Scalar::rational).collect())
}

/// Residue polynomial and orbit decomposition of the slope-`b` part.
pub fn refined_residue(p: &DiffOperator, b: &Rational) -> Result<RefinedClass, CdvfError> {
    refined_residue_with(p, b, None)
}

/// As [`refined_residue`], with an optional factorization of `Q` (needed
/// over number fields beyond degree 1), checked by multiplication.
pub fn refined_residue_with(
    p: &DiffOperator,
    b: &Rational,
    factors: Option<Vec<(Poly<Scalar>, usize)>>,
) -> Result<RefinedClass, CdvfError> {
    let theta = p.to_theta_gauge();
    let poly = newton_polygon(&theta)?;
    if !b.is_positive() || !poly.irregularities.contains(b) {
        return Err(CdvfError::NotASlope(crate::algebra::scalar::fmt_rational(b)));
    }
    let h: u64 = poly
        .irregularities
        .iter()
        .map(|r| r.denom().to_u64().expect("small denominator"))
        .fold(1, |a, x| a.lcm(&x));
    let cover = theta.kummer(h);
    let cpoly = newton_polygon(&cover)?;
    let target = -(b * Rational::from_integer((h as i64).into()));
    let idx = cpoly
        .vertices
        .windows(2)
        .position(|w| {
            (&w[1].1 - &w[0].1) / Rational::from_integer(((w[1].0 - w[0].0) as i64).into())
                == target
        })
        .ok_or_else(|| CdvfError::NotASlope(crate::algebra::scalar::fmt_rational(b)))?;
    let (i0, v0) = cpoly.vertices[idx].clone();
    let i1 = cpoly.vertices[idx + 1].0;
    let mut qc: Vec<Scalar> = vec![Scalar::zero(); i1 - i0 + 1];
    for i in i0..=i1 {
        let face = &v0 + &target * Rational::from_integer(((i - i0) as i64).into());
        if !face.is_integer() {
            continue;
        }
        let k: i64 = face.to_integer().to_i64().expect("small exponent");
        let c = cover.coeff(i).coeff(k)?;
        qc[i1 - i] = c;
    }
    let q = Poly::new(qc).monic();
    assert!(!q.coeff(0).is_zero(), "face endpoint coefficient vanishes");
    let e: u64 = b.denom().to_u64().expect("small denominator");
    let big_q = q.deflate(e as usize).ok_or(CdvfError::NotInvariant(e))?;
    let fac: Vec<(Poly<Scalar>, usize)> = match factors {
        Some(f) => {
            if expand_factors(&f).monic() != big_q {
                return Err(CdvfError::BadFactorization);
            }
            f.into_iter().map(|(g, m)| (g.monic(), m)).collect()
        }
        None => match to_rational_poly(&big_q) {
            Some(rq) => factor_rational(&rq)?
                .into_iter()
                .map(|(g, m)| (to_scalar_poly(&g), m))
                .collect(),
            None if big_q.degree() == Some(1) => vec![(big_q.clone(), 1)],
            None => {
                return Err(CdvfError::FactorizationNeeded {
                    degree: big_q.degree().unwrap_or(0),
                })
            }
        },
    };
    let orbits = fac
        .into_iter()
        .map(|(g, m)| {
            let r = g.degree().unwrap_or(0);
            ResidueOrbit {
                dim: e as usize * r * m,
                factor: g,
                multiplicity: m,
                r,
            }
        })
        .collect();
    Ok(RefinedClass {
        slope: b.clone(),
        kummer: h,
        e,
        q,
        orbits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, qi};

    fn irr(p: &DiffOperator) -> Vec<Rational> {
        newton_polygon(p).unwrap().irregularities
    }

    #[test]
    fn polygon_examples() {
        // ∂ − 3t^{-1}
        let p = DiffOperator::from_ints(Gauge::D, &[&[(-1, -3)]]);
        assert_eq!(irr(&p), vec![qi(0)]);
        // ∂ + 2t^{-3}
        let p = DiffOperator::from_ints(Gauge::D, &[&[(-3, 2)]]);
        assert_eq!(irr(&p), vec![qi(2)]);
        // ∂² − t^{-3}
        let p = DiffOperator::from_ints(Gauge::D, &[&[], &[(-3, -1)]]);
        assert_eq!(irr(&p), vec![q(1, 2), q(1, 2)]);
    }

    #[test]
    fn theta_gauge_agrees() {
        for p in [
            DiffOperator::from_ints(Gauge::D, &[&[(-3, 2)]]),
            DiffOperator::from_ints(Gauge::D, &[&[], &[(-3, -1)]]),
            DiffOperator::from_ints(Gauge::D, &[&[(-1, 1), (2, 5)], &[(-4, 1)], &[(-2, 3)]]),
        ] {
            assert_eq!(irr(&p), irr(&p.to_theta_gauge()));
        }
        let t = DiffOperator::from_ints(Gauge::D, &[&[], &[(-3, -1)]]).to_theta_gauge();
        assert_eq!(t, DiffOperator::from_ints(Gauge::Theta, &[&[(0, -1)], &[(-1, -1)]]));
    }

    #[test]
    fn precision_audit() {
        // c_1 = O(t^{-5}) could lie below the hull from (0,0) to (2,-4)
        let p = DiffOperator::new(
            Gauge::D,
            vec![LaurentSeries::big_o(-5), LaurentSeries::from_ints(&[(-4, 1)])],
        )
        .unwrap();
        assert!(matches!(newton_polygon(&p), Err(CdvfError::Precision(_))));
        let p = DiffOperator::new(
            Gauge::D,
            vec![LaurentSeries::big_o(-1), LaurentSeries::from_ints(&[(-4, 1)])],
        )
        .unwrap();
        assert_eq!(newton_polygon(&p).unwrap().irregularities, vec![qi(1), qi(1)]);
    }

    #[test]
    fn residue_of_exponential() {
        // E(t^{-2}): θ = −2
        let p = DiffOperator::from_ints(Gauge::D, &[&[(-3, 2)]]);
        let r = refined_residue(&p, &qi(2)).unwrap();
        assert_eq!(r.q, Poly::new(vec![Scalar::int(2), Scalar::int(1)]));
        assert_eq!(r.orbits.len(), 1);
        assert_eq!(r.orbits[0].r, 1);
    }

    #[test]
    fn residue_of_ramified_operator() {
        let p = DiffOperator::from_ints(Gauge::D, &[&[], &[(-3, -1)]]);
        let r = refined_residue(&p, &q(1, 2)).unwrap();
        assert_eq!(r.kummer, 2);
        assert_eq!(r.q, Poly::new(vec![Scalar::int(-4), Scalar::zero(), Scalar::int(1)]));
        assert_eq!(r.orbits.len(), 1);
        assert_eq!(r.orbits[0].dim, 2);
        assert_eq!(r.orbits[0].swan_quotient(&q(1, 2)), qi(1));
        assert!(refined_residue(&p, &qi(1)).is_err());
    }

    #[test]
    fn residue_of_product() {
        // (∂ + t^{-2})(∂ − t^{-2}) carries E(t^{-1}) and E(−t^{-1})
        let a = DiffOperator::from_ints(Gauge::D, &[&[(-2, 1)]]);
        let b = DiffOperator::from_ints(Gauge::D, &[&[(-2, -1)]]);
        let p = a.compose(&b).unwrap();
        assert_eq!(irr(&p), vec![qi(1), qi(1)]);
        let r = refined_residue(&p, &qi(1)).unwrap();
        assert_eq!(r.q, Poly::new(vec![Scalar::int(-1), Scalar::zero(), Scalar::int(1)]));
        assert_eq!(r.orbits.len(), 2);
        assert!(r.orbits.iter().all(|o| o.r == 1));
    }

    #[test]
    fn rescaling_keeps_polygon() {
        let p = DiffOperator::from_ints(Gauge::D, &[&[(-2, 3)], &[(-5, 1), (0, 2)]]);
        let s = p.rescale(&Scalar::frac(-2, 3)).unwrap();
        assert_eq!(irr(&p), irr(&s));
    }
}
