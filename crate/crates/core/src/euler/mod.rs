//! Euler characteristics: the curve and surface formulas, the Chern-class
//! formula, the degree of a cycle against the zero section, and a de Rham
//! oracle on the punctured line.

mod oracle;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::algebra::Rational;
use crate::cycles::{Component, LogCycle};
use crate::goodmodel::IrregularityDivisor;

pub use oracle::{derham_oracle_curve, OracleResult};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EulerError {
    #[error("non-integral value {value} ({context})")]
    NonIntegral { context: String, value: String },
    #[error("invalid geometry: {0}")]
    Geometry(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("window {window} too small, need at least {min}")]
    WindowTooSmall { window: usize, min: usize },
    #[error("window instability: chi = {first} at B = {b}, {second} at B + 3")]
    WindowInstability { b: usize, first: i64, second: i64 },
    #[error("oracle needs a one-variable Laurent polynomial with rational coefficients")]
    OracleInput,
}

/// A puncture of a curve with the irregularities of the rows there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Puncture {
    pub name: String,
    pub irr: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveGeometry {
    pub genus: u32,
    pub punctures: Vec<Puncture>,
}

impl CurveGeometry {
    pub fn chi_u(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.punctures.len() as i64
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceComponent {
    pub name: String,
    /// `χ(D_j°)`, the Euler characteristic of the component minus the others.
    pub chi_open: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceGeometry {
    pub chi_u: i64,
    pub components: Vec<SurfaceComponent>,
    /// `(D_j·D_j')`, self-intersections on the diagonal.
    pub intersections: Vec<Vec<i64>>,
}

impl SurfaceGeometry {
    pub fn check(&self) -> Result<(), EulerError> {
        let k = self.components.len();
        if self.intersections.len() != k || self.intersections.iter().any(|r| r.len() != k) {
            return Err(EulerError::Geometry(format!(
                "intersection matrix must be {k}x{k}"
            )));
        }
        for i in 0..k {
            for j in 0..i {
                if self.intersections[i][j] != self.intersections[j][i] {
                    return Err(EulerError::Geometry("intersection matrix not symmetric".into()));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeometryData {
    Curve(CurveGeometry),
    Surface(SurfaceGeometry),
}

impl GeometryData {
    pub fn dim(&self) -> usize {
        match self {
            GeometryData::Curve(_) => 1,
            GeometryData::Surface(_) => 2,
        }
    }

    pub fn chi_u(&self) -> i64 {
        match self {
            GeometryData::Curve(c) => c.chi_u(),
            GeometryData::Surface(s) => s.chi_u,
        }
    }

    pub fn component_count(&self) -> usize {
        match self {
            GeometryData::Curve(c) => c.punctures.len(),
            GeometryData::Surface(s) => s.components.len(),
        }
    }

    fn check(&self) -> Result<(), EulerError> {
        match self {
            GeometryData::Curve(_) => Ok(()),
            GeometryData::Surface(s) => s.check(),
        }
    }
}

/// Degrees of `c(Ω¹_X(log D))`: `deg c_n` and, for surfaces, `deg(c₁·D_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChernData {
    pub top: i64,
    pub c1_dot: Vec<i64>,
    pub from_topology: bool,
}

impl ChernData {
    /// `deg c_n = (−1)ⁿχ(U)` and `deg(c₁·D_j) = −χ(D_j°)`.
    pub fn from_topology(g: &GeometryData) -> Self {
        match g {
            GeometryData::Curve(c) => ChernData {
                top: -c.chi_u(),
                c1_dot: Vec::new(),
                from_topology: true,
            },
            GeometryData::Surface(s) => ChernData {
                top: s.chi_u,
                c1_dot: s.components.iter().map(|c| -c.chi_open).collect(),
                from_topology: true,
            },
        }
    }
}

fn int(k: i64) -> Rational {
    Rational::from_integer(k.into())
}

/// Returns the integer, or fails loudly.
pub fn integrality_check(value: &Rational) -> Result<i64, EulerError> {
    crate::algebra::poly::rational_to_i64(value).ok_or_else(|| EulerError::NonIntegral {
        context: "Euler characteristic".into(),
        value: crate::algebra::scalar::fmt_rational(value),
    })
}

/// `d·χ(U) − Σ_x Irr_x`, each puncture's total required to be integral.
pub fn chi_curve(d: usize, g: &CurveGeometry) -> Result<i64, EulerError> {
    let mut chi = int(d as i64 * g.chi_u());
    for p in &g.punctures {
        if p.irr.iter().any(|b| b.is_negative()) {
            return Err(EulerError::Geometry(format!("negative irregularity at {}", p.name)));
        }
        let total = p.irr.iter().fold(Rational::zero(), |a, b| a + b);
        if !total.is_integer() {
            return Err(EulerError::NonIntegral {
                context: format!("total irregularity at {}", p.name),
                value: crate::algebra::scalar::fmt_rational(&total),
            });
        }
        chi -= total;
    }
    integrality_check(&chi)
}

fn check_rows(rows: &[Vec<Rational>], k: usize) -> Result<(), EulerError> {
    if rows.iter().any(|r| r.len() != k) {
        return Err(EulerError::Geometry(format!("irregularity rows must have {k} entries")));
    }
    if rows.is_empty() {
        return Err(EulerError::Geometry("rank 0".into()));
    }
    Ok(())
}

fn self_intersection(b: &[Rational], m: &[Vec<i64>]) -> Rational {
    let mut acc = Rational::zero();
    for (j, bj) in b.iter().enumerate() {
        for (l, bl) in b.iter().enumerate() {
            acc += bj * bl * int(m[j][l]);
        }
    }
    acc
}

/// `Σ_rows [χ(U) − Σ_j b_j·χ(D_j°) + Σ_{j,j'} b_j b_j'·(D_j·D_j')]`.
pub fn chi_surface_kato(rows: &[Vec<Rational>], g: &SurfaceGeometry) -> Result<Rational, EulerError> {
    g.check()?;
    check_rows(rows, g.components.len())?;
    let mut chi = Rational::zero();
    for b in rows {
        chi += int(g.chi_u);
        for (bj, c) in b.iter().zip(&g.components) {
            chi -= bj * int(c.chi_open);
        }
        chi += self_intersection(b, &g.intersections);
    }
    Ok(chi)
}

/// `(−1)ⁿ Σ_i deg(c(Ω¹_X(log D))·(1 − R_i)⁻¹)` in degree `n`, for `n ≤ 2`.
pub fn chi_ep(
    rows: &[Vec<Rational>],
    g: &GeometryData,
    chern: Option<&ChernData>,
) -> Result<Rational, EulerError> {
    g.check()?;
    check_rows(rows, g.component_count())?;
    let derived = ChernData::from_topology(g);
    let chern = chern.unwrap_or(&derived);
    match g {
        GeometryData::Curve(_) => {
            // c₁ + deg R_i, with sign (−1)¹
            let mut acc = Rational::zero();
            for b in rows {
                let deg = b.iter().fold(Rational::zero(), |a, x| a + x);
                acc = acc + int(chern.top) + deg;
            }
            Ok(-acc)
        }
        GeometryData::Surface(s) => {
            if chern.c1_dot.len() != s.components.len() {
                return Err(EulerError::Geometry("Chern data does not match the components".into()));
            }
            let mut acc = Rational::zero();
            for b in rows {
                acc += int(chern.top);
                for (bj, c) in b.iter().zip(&chern.c1_dot) {
                    acc += bj * int(*c);
                }
                acc += self_intersection(b, &s.intersections);
            }
            Ok(acc)
        }
    }
}

/// Irregularity rows restricted to the boundary coordinates, in chart order
/// and padded with zeros to `k` components: the `j`-th boundary coordinate
/// is the `j`-th component of the geometry.
pub fn rows_for_geometry(irr: &IrregularityDivisor, k: usize) -> Vec<Vec<Rational>> {
    let cols = irr.divisors();
    irr.rows()
        .into_iter()
        .map(|r| {
            let mut row: Vec<Rational> = cols.iter().map(|&j| r[j].clone()).collect();
            row.resize(k.max(row.len()), Rational::zero());
            row
        })
        .collect()
}

/// Component of the geometry cut out by each chart coordinate, boundary
/// coordinates taken in order.
pub fn default_components(log_vars: &[bool]) -> Vec<Option<usize>> {
    let mut k = 0;
    log_vars
        .iter()
        .map(|&b| {
            if b {
                k += 1;
                Some(k - 1)
            } else {
                None
            }
        })
        .collect()
}

/// `(−1)ⁿ·deg([X]·C)` for a cycle on one chart; see
/// [`kashiwara_dubson_charts`].
pub fn kashiwara_dubson(
    c: &LogCycle,
    g: &GeometryData,
    chern: Option<&ChernData>,
) -> Result<Rational, EulerError> {
    kashiwara_dubson_charts(&[(c, default_components(c.log_vars()))], g, chern)
}

/// `(−1)ⁿ·deg([X]·C)` for a cycle given on several charts, each chart
/// coordinate mapped to a component of the geometry.  The zero section
/// meets itself in `deg c_n`; a line over `D_j` with twist `t` meets it in
/// `1` on a curve and in `c₁·D_j + Σ_l t_l (D_j·D_l)` on a surface.
/// Components of the wrong dimension contribute nothing.
pub fn kashiwara_dubson_charts(
    charts: &[(&LogCycle, Vec<Option<usize>>)],
    g: &GeometryData,
    chern: Option<&ChernData>,
) -> Result<Rational, EulerError> {
    g.check()?;
    let n = g.dim();
    let derived = ChernData::from_topology(g);
    let chern = chern.unwrap_or(&derived);
    let Some((first, _)) = charts.first() else {
        return Err(EulerError::Geometry("no charts".into()));
    };
    let mut seen = vec![false; g.component_count()];
    for (c, map) in charts {
        if c.nvars() != n || map.len() != n {
            return Err(EulerError::Unsupported(format!(
                "cycle on a chart of dimension {} against geometry of dimension {n}",
                c.nvars()
            )));
        }
        if c.zero_section_mult() != first.zero_section_mult() {
            return Err(EulerError::Geometry("charts disagree on the rank".into()));
        }
        for (j, comp) in map.iter().enumerate() {
            if let Some(k) = comp {
                if !c.log_vars()[j] || *k >= seen.len() || seen[*k] {
                    return Err(EulerError::Geometry(format!(
                        "chart coordinate {} mapped to component {} twice or out of range",
                        j + 1,
                        k + 1
                    )));
                }
                seen[*k] = true;
            }
        }
    }
    let mut acc = first.zero_section_mult() * int(chern.top);
    for (c, map) in charts {
        let line_degree = |j: usize, twist: &[Rational]| -> Result<Rational, EulerError> {
            let dj = map[j].ok_or_else(|| EulerError::Geometry("line over an unmapped coordinate".into()))?;
            match g {
                GeometryData::Curve(_) => Ok(int(1)),
                GeometryData::Surface(s) => {
                    let mut acc = int(chern.c1_dot[dj]);
                    for (l, t) in twist.iter().enumerate() {
                        if let Some(dl) = map[l] {
                            acc += t * int(s.intersections[dj][dl]);
                        }
                    }
                    Ok(acc)
                }
            }
        };
        for (comp, m) in c.components() {
            if comp.dim(n) != n {
                continue;
            }
            let contribution = match comp {
                Component::ZeroSection => continue,
                Component::DivisorLine {
                    divisor,
                    twist,
                    cover_degree,
                    ..
                } => line_degree(*divisor, twist)? * int(*cover_degree as i64),
                Component::CoordinateSubspace { x_vanish, .. } => match x_vanish.len() {
                    0 => int(chern.top),
                    1 => line_degree(x_vanish[0], &vec![Rational::zero(); n])?,
                    _ => int(1),
                },
                Component::LowerDim { .. } => Rational::zero(),
            };
            acc += m * contribution;
        }
    }
    Ok(if n % 2 == 1 { -acc } else { acc })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, qi};

    fn p1_minus(points: &[(&str, Vec<Rational>)]) -> CurveGeometry {
        CurveGeometry {
            genus: 0,
            punctures: points
                .iter()
                .map(|(n, irr)| Puncture {
                    name: n.to_string(),
                    irr: irr.clone(),
                })
                .collect(),
        }
    }

    fn kato_surface() -> SurfaceGeometry {
        SurfaceGeometry {
            chi_u: 1,
            components: vec![
                SurfaceComponent { name: "D1".into(), chi_open: 1 },
                SurfaceComponent { name: "D2".into(), chi_open: 1 },
            ],
            intersections: vec![vec![0, 1], vec![1, 0]],
        }
    }

    #[test]
    fn curve_examples() {
        let g = p1_minus(&[("0", vec![qi(3)]), ("inf", vec![qi(0)])]);
        assert_eq!(chi_curve(1, &g).unwrap(), -3);
        let torus = CurveGeometry { genus: 1, punctures: vec![] };
        assert_eq!(chi_curve(1, &torus).unwrap(), 0);
        let g = p1_minus(&[("0", vec![q(1, 2), q(1, 2)])]);
        assert_eq!(chi_curve(2, &g).unwrap(), 1);
        let g = p1_minus(&[("0", vec![q(1, 2)])]);
        assert!(matches!(chi_curve(1, &g), Err(EulerError::NonIntegral { .. })));
    }

    #[test]
    fn kato_examples() {
        let s = kato_surface();
        assert_eq!(chi_surface_kato(&[vec![qi(2), qi(3)]], &s).unwrap(), qi(8));
        assert_eq!(chi_surface_kato(&vec![vec![qi(0), qi(0)]; 3], &s).unwrap(), qi(3));
        let single = SurfaceGeometry {
            chi_u: 3,
            components: vec![SurfaceComponent { name: "D".into(), chi_open: 2 }],
            intersections: vec![vec![-1]],
        };
        assert_eq!(chi_surface_kato(&[vec![qi(1)]], &single).unwrap(), qi(0));
    }

    #[test]
    fn ep_matches_the_explicit_formulas() {
        let s = GeometryData::Surface(kato_surface());
        assert_eq!(chi_ep(&[vec![qi(2), qi(3)]], &s, None).unwrap(), qi(8));
        let c = GeometryData::Curve(p1_minus(&[("0", vec![qi(3)]), ("inf", vec![qi(0)])]));
        assert_eq!(chi_ep(&[vec![qi(3), qi(0)]], &c, None).unwrap(), qi(-3));
    }

    #[test]
    fn explicit_chern_data_overrides_topology() {
        let s = GeometryData::Surface(kato_surface());
        let chern = ChernData { top: 5, c1_dot: vec![0, 0], from_topology: false };
        assert_eq!(chi_ep(&[vec![qi(0), qi(0)]], &s, Some(&chern)).unwrap(), qi(5));
    }

    #[test]
    fn degree_against_the_zero_section() {
        use crate::cycles::{Component, LogCycle};
        let g = GeometryData::Curve(p1_minus(&[("0", vec![qi(3)]), ("inf", vec![qi(0)])]));
        let mut c = LogCycle::new(vec!["x".into()], vec![true]);
        c.add(Component::ZeroSection, qi(1));
        c.add(
            Component::DivisorLine {
                divisor: 0,
                direction: vec![crate::algebra::LaurentPolynomial::from_int_terms(1, &[(1, &[0])])],
                twist: vec![qi(3)],
                cover_degree: 1,
            },
            qi(3),
        );
        assert_eq!(kashiwara_dubson(&c, &g, None).unwrap(), qi(-3));
        c.add(Component::LowerDim { support: "origin".into(), dim: 0 }, qi(1));
        assert_eq!(kashiwara_dubson(&c, &g, None).unwrap(), qi(-3));

        let torus = GeometryData::Curve(CurveGeometry { genus: 2, punctures: vec![] });
        let mut r = LogCycle::new(vec!["x".into()], vec![true]);
        r.add(Component::ZeroSection, qi(2));
        assert!(kashiwara_dubson(&r, &torus, None).is_err());
    }

    #[test]
    fn integrality() {
        assert_eq!(integrality_check(&qi(8)).unwrap(), 8);
        assert!(integrality_check(&q(1, 2)).is_err());
    }

    #[test]
    fn asymmetric_intersections_are_rejected() {
        let mut s = kato_surface();
        s.intersections[0][1] = 2;
        assert!(chi_surface_kato(&[vec![qi(0), qi(0)]], &s).is_err());
    }
}
