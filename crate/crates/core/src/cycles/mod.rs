//! Cycles on the log-cotangent bundle: components, multiplicities, Kummer
//! pullback and pushforward, and gr-module extraction.

pub mod monomial;

use std::collections::BTreeMap;
use std::fmt;


use thiserror::Error;

use num_traits::Signed;

use crate::algebra::{Field, LaurentPolynomial, Poly, Rational, Scalar, Zero};

pub use monomial::{hilbert_dim, monomial_char_cycle, MonomialLogModule};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycleError {
    #[error("cycles live on different charts")]
    ChartMismatch,
    #[error("non-integral multiplicity {mult} on {component}")]
    NonIntegral { component: String, mult: String },
    #[error("refined form vanishes along its own divisor x{divisor}")]
    VanishingTheta { divisor: usize },
    #[error("direction is identically zero")]
    ZeroDirection,
    #[error("orbit data inconsistent: {0}")]
    BadOrbit(String),
    #[error("relation is not monomial: {0}")]
    NonMonomial(String),
    #[error("module presentation not supported: {0}")]
    Unsupported(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
}

/// An irreducible component of a cycle in `T*X^log`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Component {
    /// The zero section `[X]`.
    ZeroSection,
    /// The closure of the line bundle over `D_divisor` spanned by the
    /// direction `[θ_1 : … : θ_n]` in the log basis.  `twist` is the pole
    /// vector `b` of the refined form `x^{-b}·θ`, `cover_degree` the degree of
    /// the residue extension the line is defined over.
    DivisorLine {
        divisor: usize,
        direction: Vec<LaurentPolynomial>,
        twist: Vec<Rational>,
        cover_degree: u64,
    },
    /// `{x_i = 0 (i ∈ x_vanish), ξ_k = 0 (k ∈ xi_vanish)}`.
    CoordinateSubspace {
        x_vanish: Vec<usize>,
        xi_vanish: Vec<usize>,
    },
    /// A component of dimension below `n`, kept for bookkeeping only.
    LowerDim { support: String, dim: usize },
}

impl Component {
    pub fn dim(&self, n: usize) -> usize {
        match self {
            Component::ZeroSection | Component::DivisorLine { .. } => n,
            Component::CoordinateSubspace {
                x_vanish,
                xi_vanish,
            } => 2 * n - x_vanish.len() - xi_vanish.len(),
            Component::LowerDim { dim, .. } => *dim,
        }
    }
}

/// Formal sum of components with rational multiplicities on a chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogCycle {
    names: Vec<String>,
    log_vars: Vec<bool>,
    components: BTreeMap<Component, Rational>,
}

impl LogCycle {
    pub fn new(names: Vec<String>, log_vars: Vec<bool>) -> Self {
        assert_eq!(names.len(), log_vars.len());
        LogCycle {
            names,
            log_vars,
            components: BTreeMap::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn log_vars(&self) -> &[bool] {
        &self.log_vars
    }

    pub fn add(&mut self, c: Component, mult: Rational) {
        if mult.is_zero() {
            return;
        }
        let m = self.components.remove(&c).unwrap_or_else(Rational::zero) + mult;
        if !m.is_zero() {
            self.components.insert(c, m);
        }
    }

    pub fn components(&self) -> impl Iterator<Item = (&Component, &Rational)> {
        self.components.iter()
    }

    pub fn multiplicity(&self, c: &Component) -> Rational {
        self.components.get(c).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn zero_section_mult(&self) -> Rational {
        self.multiplicity(&Component::ZeroSection)
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn lines(&self) -> impl Iterator<Item = (&Component, &Rational)> {
        self.components
            .iter()
            .filter(|(c, _)| matches!(c, Component::DivisorLine { .. }))
    }

    pub fn same_chart(&self, other: &LogCycle) -> bool {
        self.log_vars == other.log_vars
    }

    /// Checks every multiplicity is a positive integer.
    pub fn finalize(self) -> Result<LogCycle, CycleError> {
        for (c, m) in &self.components {
            if !m.is_integer() || !m.is_positive() {
                return Err(CycleError::NonIntegral {
                    component: self.describe(c),
                    mult: crate::algebra::scalar::fmt_rational(m),
                });
            }
        }
        Ok(self)
    }

    /// Keeps the zero section and the lines over `D_j`, with twists
    /// restricted to the `j`-th coordinate.
    pub fn restrict_to_divisor(&self, j: usize) -> LogCycle {
        let mut out = LogCycle::new(self.names.clone(), self.log_vars.clone());
        for (c, m) in &self.components {
            match c {
                Component::ZeroSection => out.add(c.clone(), m.clone()),
                Component::DivisorLine {
                    divisor,
                    direction,
                    twist,
                    cover_degree,
                } if *divisor == j => {
                    let mut t = vec![Rational::zero(); twist.len()];
                    t[j] = twist[j].clone();
                    out.add(
                        Component::DivisorLine {
                            divisor: j,
                            direction: direction.clone(),
                            twist: t,
                            cover_degree: *cover_degree,
                        },
                        m.clone(),
                    )
                }
                _ => {}
            }
        }
        out
    }

    fn describe(&self, c: &Component) -> String {
        match c {
            Component::ZeroSection => "ZeroSection".into(),
            Component::DivisorLine {
                divisor,
                direction,
                cover_degree,
                ..
            } => {
                let dir: Vec<String> = direction.iter().map(|p| p.display_with(&self.names)).collect();
                let mut s = format!("Line D_{} dir=[{}]", divisor + 1, dir.join(", "));
                if *cover_degree > 1 {
                    s.push_str(&format!(" cover={cover_degree}"));
                }
                s
            }
            Component::CoordinateSubspace {
                x_vanish,
                xi_vanish,
            } => {
                let xs: Vec<&str> = x_vanish.iter().map(|&i| self.names[i].as_str()).collect();
                let ks: Vec<String> = xi_vanish.iter().map(|&i| format!("xi_{}", self.names[i])).collect();
                format!(
                    "Subspace dim={} zero=[{}]",
                    c.dim(self.nvars()),
                    xs.iter().map(|s| s.to_string()).chain(ks).collect::<Vec<_>>().join(", ")
                )
            }
            Component::LowerDim { support, dim } => format!("LowerDim dim={dim} support={support}"),
        }
    }

    /// One line per component, in canonical order.
    pub fn report_lines(&self) -> Vec<String> {
        self.components
            .iter()
            .map(|(c, m)| {
                let m = crate::algebra::scalar::fmt_rational(m);
                match c {
                    Component::ZeroSection => format!("ZeroSection mult={m}"),
                    Component::LowerDim { dim, .. } => format!("LowerDim dim={dim} mult={m}"),
                    Component::DivisorLine { .. } => {
                        let d = self.describe(c);
                        match d.find(" cover=") {
                            Some(pos) => format!("{} mult={m}{}", &d[..pos], &d[pos..]),
                            None => format!("{d} mult={m}"),
                        }
                    }
                    _ => format!("{} mult={m}", self.describe(c)),
                }
            })
            .collect()
    }
}

impl fmt::Display for LogCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in self.report_lines() {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// Exact equality after canonical ordering; directions are already stored
/// in canonical projective form.
pub fn cycle_equal(a: &LogCycle, b: &LogCycle) -> Result<bool, CycleError> {
    if !a.same_chart(b) {
        return Err(CycleError::ChartMismatch);
    }
    Ok(a.components == b.components)
}

/// Canonical representative of the projective class of a direction vector:
/// common monomial (and, when all entries involve at most one variable, the
/// common univariate factor) removed, then scaled so the leading coefficient
/// of the first nonzero entry is 1.
pub fn canonical_direction(dir: &[LaurentPolynomial]) -> Result<Vec<LaurentPolynomial>, CycleError> {
    let nz: Vec<&LaurentPolynomial> = dir.iter().filter(|p| !p.is_zero()).collect();
    if nz.is_empty() {
        return Err(CycleError::ZeroDirection);
    }
    let n = nz[0].nvars();
    let mut corner: Vec<i64> = nz[0].min_corner().unwrap();
    for p in &nz[1..] {
        let c = p.min_corner().unwrap();
        for (a, b) in corner.iter_mut().zip(c) {
            *a = (*a).min(b);
        }
    }
    let neg: Vec<i64> = corner.iter().map(|a| -a).collect();
    let mut out: Vec<LaurentPolynomial> = dir.iter().map(|p| p.shift(&neg)).collect();

    let vars: Vec<usize> = (0..n)
        .filter(|&j| out.iter().any(|p| p.max_exponent(j).unwrap_or(0) != 0))
        .collect();
    if vars.len() == 1 {
        let v = vars[0];
        let to_poly = |p: &LaurentPolynomial| -> Poly<Scalar> {
            let deg = p.max_exponent(v).unwrap_or(0).max(0) as usize;
            let mut c = vec![Scalar::zero(); deg + 1];
            for (e, s) in p.terms() {
                c[e[v] as usize] = s.clone();
            }
            Poly::new(c)
        };
        let g = out
            .iter()
            .filter(|p| !p.is_zero())
            .map(to_poly)
            .fold(Poly::zero(), |acc, p| acc.gcd(&p));
        if g.degree().unwrap_or(0) > 0 {
            out = out
                .iter()
                .map(|p| {
                    let (q, r) = to_poly(p).div_rem(&g);
                    debug_assert!(r.is_zero());
                    let mut lp = LaurentPolynomial::zero(n);
                    for (k, c) in q.coeffs().iter().enumerate() {
                        let mut e = vec![0; n];
                        e[v] = k as i64;
                        lp.add_term(c.clone(), e);
                    }
                    lp
                })
                .collect();
        }
    }
    let first = out.iter().find(|p| !p.is_zero()).unwrap();
    let lead = first.terms().last().unwrap().1.clone();
    let inv = lead.inv().unwrap();
    Ok(out.iter().map(|p| p.scale(&inv)).collect())
}

/// Pullback along `x_j ↦ x_j^{h_j}`.  Lines over `D_j` gain the factor
/// `h_j`; directions transform as cotangent vectors in the log basis.
pub fn kummer_pullback(c: &LogCycle, h: &[i64]) -> Result<LogCycle, CycleError> {
    if h.len() != c.nvars() {
        return Err(CycleError::Dimension {
            expected: c.nvars(),
            found: h.len(),
        });
    }
    let mut out = LogCycle::new(c.names.clone(), c.log_vars.clone());
    for (comp, m) in &c.components {
        match comp {
            Component::DivisorLine {
                divisor,
                direction,
                twist,
                cover_degree,
            } => {
                let dir: Vec<LaurentPolynomial> = direction
                    .iter()
                    .enumerate()
                    .map(|(l, p)| {
                        let s = if c.log_vars[l] { h[l] } else { 1 };
                        p.inflate(h).scale(&Scalar::int(s))
                    })
                    .collect();
                let twist = twist
                    .iter()
                    .zip(h)
                    .map(|(t, &k)| t * Rational::from_integer(k.into()))
                    .collect();
                out.add(
                    Component::DivisorLine {
                        divisor: *divisor,
                        direction: canonical_direction(&dir)?,
                        twist,
                        cover_degree: *cover_degree,
                    },
                    m * Rational::from_integer(h[*divisor].into()),
                );
            }
            other => out.add(other.clone(), m.clone()),
        }
    }
    Ok(out)
}

/// Merges each orbit of conjugate lines into one line defined over a
/// residue extension of degree `r = |orbit|`, with multiplicity
/// `Σ mult / r`; the result must be integral.
pub fn pushforward_from_cover(c: &LogCycle, orbits: &[Vec<Component>]) -> Result<LogCycle, CycleError> {
    let mut rest = c.components.clone();
    let mut out = LogCycle::new(c.names.clone(), c.log_vars.clone());
    for orbit in orbits {
        let Some(Component::DivisorLine {
            divisor,
            direction,
            twist,
            cover_degree,
        }) = orbit.first()
        else {
            return Err(CycleError::BadOrbit("orbit must start with a line".into()));
        };
        let mut total = Rational::zero();
        for member in orbit {
            match member {
                Component::DivisorLine { divisor: d, .. } if d == divisor => {}
                _ => return Err(CycleError::BadOrbit("members must be lines over one divisor".into())),
            }
            let m = rest
                .remove(member)
                .ok_or_else(|| CycleError::BadOrbit("member not in cycle".into()))?;
            total += m;
        }
        let r = orbit.len() as u64;
        out.add(
            Component::DivisorLine {
                divisor: *divisor,
                direction: direction.clone(),
                twist: twist.clone(),
                cover_degree: cover_degree * r,
            },
            total / Rational::from_integer(r.into()),
        );
    }
    for (comp, m) in rest {
        out.add(comp, m);
    }
    out.finalize()
}

/// Cycle of the graded module presented by
/// `(x^b ξ_j, θ_j ξ_l − θ_l ξ_j)`: `d·[X] + Σ_{b_j>0} d·b_j·L_j` with `L_j` the
/// line over `D_j` spanned by the reduction of `θ` modulo `x_j`.
pub fn gr_extract_structured(
    b: &[Rational],
    theta: &[LaurentPolynomial],
    d: usize,
    names: &[String],
    log_vars: &[bool],
) -> Result<LogCycle, CycleError> {
    let n = log_vars.len();
    if b.len() != n || theta.len() != n {
        return Err(CycleError::Dimension {
            expected: n,
            found: b.len().min(theta.len()),
        });
    }
    let mut out = LogCycle::new(names.to_vec(), log_vars.to_vec());
    out.add(Component::ZeroSection, Rational::from_integer(d.into()));
    for j in 0..n {
        if !log_vars[j] || !b[j].is_positive() {
            continue;
        }
        // lowest x_j-slice of θ is the reduction up to a power of x_j
        let low = theta
            .iter()
            .filter_map(|p| p.min_exponent(j))
            .min()
            .ok_or(CycleError::ZeroDirection)?;
        let red: Vec<LaurentPolynomial> = theta.iter().map(|p| p.slice(j, low)).collect();
        if red[j].is_zero() {
            return Err(CycleError::VanishingTheta { divisor: j });
        }
        out.add(
            Component::DivisorLine {
                divisor: j,
                direction: canonical_direction(&red)?,
                twist: b.to_vec(),
                cover_degree: 1,
            },
            &b[j] * Rational::from_integer(d.into()),
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::qi;

    fn names(n: usize) -> Vec<String> {
        ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect()
    }

    fn lp(n: usize, t: &[(i64, &[i64])]) -> LaurentPolynomial {
        LaurentPolynomial::from_int_terms(n, t)
    }

    fn line(dir: Vec<LaurentPolynomial>, twist: &[i64]) -> Component {
        Component::DivisorLine {
            divisor: 0,
            direction: canonical_direction(&dir).unwrap(),
            twist: twist.iter().map(|&x| qi(x)).collect(),
            cover_degree: 1,
        }
    }

    #[test]
    fn projective_equality() {
        let a = canonical_direction(&[lp(2, &[(-2, &[0, -3])]), lp(2, &[(-3, &[0, -3])])]).unwrap();
        let b = canonical_direction(&[lp(2, &[(2, &[0, 0])]), lp(2, &[(3, &[0, 0])])]).unwrap();
        assert_eq!(a, b);
        // common univariate factor (1 + y)
        let c = canonical_direction(&[
            lp(2, &[(1, &[0, 0]), (1, &[0, 1])]),
            lp(2, &[(2, &[0, 0]), (2, &[0, 1])]),
        ])
        .unwrap();
        assert_eq!(c, canonical_direction(&[lp(2, &[(1, &[0, 0])]), lp(2, &[(2, &[0, 0])])]).unwrap());
        assert!(canonical_direction(&[LaurentPolynomial::zero(1)]).is_err());
    }

    #[test]
    fn equality_examples() {
        let mut a = LogCycle::new(names(1), vec![true]);
        a.add(Component::ZeroSection, qi(1));
        let b = a.clone();
        assert!(cycle_equal(&a, &b).unwrap());
        let mut a2 = a.clone();
        a2.add(line(vec![lp(1, &[(1, &[0])])], &[1]), qi(2));
        let mut b2 = b.clone();
        b2.add(line(vec![lp(1, &[(-5, &[0])])], &[1]), qi(3));
        assert!(!cycle_equal(&a2, &b2).unwrap());
        let other = LogCycle::new(names(2), vec![true, true]);
        assert!(cycle_equal(&a, &other).is_err());
    }

    #[test]
    fn kummer_pullback_scales_lines() {
        let mut c = LogCycle::new(names(1), vec![true]);
        c.add(Component::ZeroSection, qi(1));
        c.add(line(vec![lp(1, &[(1, &[0])])], &[2]), qi(2));
        let p = kummer_pullback(&c, &[3]).unwrap();
        assert_eq!(p.multiplicity(&line(vec![lp(1, &[(1, &[0])])], &[6])), qi(6));
        assert_eq!(kummer_pullback(&c, &[1]).unwrap(), c);
    }

    #[test]
    fn pushforward_merges_conjugates() {
        let mut c = LogCycle::new(names(1), vec![true]);
        c.add(Component::ZeroSection, qi(2));
        let l = line(vec![lp(1, &[(1, &[0])])], &[1]);
        c.add(l.clone(), crate::algebra::q(1, 2));
        c.add(l.clone(), crate::algebra::q(1, 2));
        let p = pushforward_from_cover(&c, &[]).unwrap();
        assert_eq!(p.multiplicity(&l), qi(1));

        // two distinct conjugate lines merged into one of degree 2
        let mut c = LogCycle::new(names(2), vec![true, false]);
        let l1 = line(vec![lp(2, &[(1, &[0, 0])]), lp(2, &[(1, &[0, 1])])], &[1, 0]);
        let l2 = line(vec![lp(2, &[(1, &[0, 0])]), lp(2, &[(-1, &[0, 1])])], &[1, 0]);
        c.add(l1.clone(), qi(1));
        c.add(l2.clone(), qi(1));
        let p = pushforward_from_cover(&c, &[vec![l1, l2]]).unwrap();
        let lines: Vec<_> = p.lines().collect();
        assert_eq!(lines.len(), 1);
        assert_eq!(*lines[0].1, qi(1));
        assert!(matches!(lines[0].0, Component::DivisorLine { cover_degree: 2, .. }));
    }

    #[test]
    fn structured_examples() {
        let c = gr_extract_structured(&[qi(3)], &[lp(1, &[(-3, &[0])])], 1, &names(1), &[true]).unwrap();
        assert_eq!(c.report_lines(), vec!["ZeroSection mult=1", "Line D_1 dir=[1] mult=3"]);
        let c = gr_extract_structured(&[qi(0)], &[lp(1, &[(0, &[0])])], 5, &names(1), &[true]).unwrap();
        assert_eq!(c.report_lines(), vec!["ZeroSection mult=5"]);
        let theta = vec![lp(2, &[(-2, &[0, 0])]), lp(2, &[(-3, &[0, 0])])];
        let c = gr_extract_structured(&[qi(2), qi(3)], &theta, 2, &names(2), &[true, true]).unwrap();
        assert_eq!(
            c.report_lines(),
            vec![
                "ZeroSection mult=2",
                "Line D_1 dir=[1, 3/2] mult=4",
                "Line D_2 dir=[1, 3/2] mult=6"
            ]
        );
    }
}
