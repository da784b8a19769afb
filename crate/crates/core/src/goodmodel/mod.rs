//! Models `M = ⊕ E(φ_α)^{d_α}` on a chart `(Spec k⟦x⟧, D = ∪ V(x_j))`:
//! validation, irregularity divisors, refined forms, cleanness and the
//! conjectural cycle builder.
//!
//! Exponents of `φ` are stored on the Kummer cover `x_j = x'_j^{h_j}`, so an
//! integer exponent `a` in variable `j` stands for `x_j^{a/h_j}`.

mod clean;
mod zcar;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use thiserror::Error;

use crate::algebra::{
    AlgebraError, LaurentPolynomial, Mode, NumberField, Rational, Scalar, Zero,
};
use crate::cdvf::CdvfError;
use crate::cycles::CycleError;
use crate::tropical::{TropicalError, TropicalFn};

pub use clean::{
    end_criterion, CleanVerdict, LocusGenerators, NoncleanLocus, NumericalVerdict, ThetaCheck,
};
pub use zcar::{theta_on_divisor, zcar_prime};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("point has {found} coordinates, expected {expected}")]
    Dimension { expected: usize, found: usize },
    #[error("point does not lie on the boundary divisor")]
    PointNotOnD,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("non-clean locus along D_{divisor} is not of codimension 2")]
    CodimensionViolation { divisor: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Tropical(#[from] TropicalError),
    #[error(transparent)]
    Cycle(#[from] CycleError),
    #[error(transparent)]
    Cdvf(#[from] CdvfError),
}

/// Coefficients with rational exponent vectors.
pub type RationalTerms = Vec<(Scalar, Vec<Rational>)>;

/// Variable names and which coordinates cut out boundary components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    names: Vec<String>,
    log_vars: Vec<bool>,
}

impl Chart {
    pub fn new(names: Vec<String>, log_vars: Vec<bool>) -> Result<Self, ModelError> {
        if names.len() != log_vars.len() {
            return Err(ModelError::InvalidChart("names and log flags differ in length".into()));
        }
        if names.is_empty() {
            return Err(ModelError::InvalidChart("no variables".into()));
        }
        let distinct: BTreeSet<&String> = names.iter().collect();
        if distinct.len() != names.len() {
            return Err(ModelError::InvalidChart("variable names must be distinct".into()));
        }
        if !log_vars.iter().any(|&b| b) {
            return Err(ModelError::InvalidChart("at least one boundary component required".into()));
        }
        Ok(Chart { names, log_vars })
    }

    /// Chart with variables `x1..xn`, the first `m` logarithmic.
    pub fn standard(n: usize, m: usize) -> Self {
        let names = (1..=n).map(|i| format!("x{i}")).collect();
        let log_vars = (0..n).map(|i| i < m).collect();
        Chart::new(names, log_vars).expect("standard chart")
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn m(&self) -> usize {
        self.log_vars.iter().filter(|&&b| b).count()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn log_vars(&self) -> &[bool] {
        &self.log_vars
    }
}

/// `E(φ) ⊗ Reg` with the regular twist recorded by its rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelSummand {
    pub phi: LaurentPolynomial,
    pub rank: usize,
}

impl ModelSummand {
    pub fn new(phi: LaurentPolynomial, rank: usize) -> Self {
        ModelSummand { phi, rank }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodModel {
    chart: Chart,
    summands: Vec<ModelSummand>,
    kummer: Vec<i64>,
    field: Option<Arc<NumberField>>,
}

impl GoodModel {
    pub fn new(
        chart: Chart,
        summands: Vec<ModelSummand>,
        kummer: Vec<i64>,
    ) -> Result<Self, ModelError> {
        let n = chart.n();
        if kummer.len() != n {
            return Err(ModelError::Dimension {
                expected: n,
                found: kummer.len(),
            });
        }
        for (j, &h) in kummer.iter().enumerate() {
            if h < 1 || (!chart.log_vars[j] && h != 1) {
                return Err(ModelError::InvalidModel(format!(
                    "Kummer denominator {h} on {}",
                    chart.names[j]
                )));
            }
        }
        if summands.is_empty() {
            return Err(ModelError::InvalidModel("empty model".into()));
        }
        let mut field = None;
        for (a, s) in summands.iter().enumerate() {
            if s.rank == 0 {
                return Err(ModelError::InvalidModel(format!("summand {} has rank 0", a + 1)));
            }
            if s.phi.nvars() != n {
                return Err(ModelError::Dimension {
                    expected: n,
                    found: s.phi.nvars(),
                });
            }
            for j in 0..n {
                if !chart.log_vars[j] && s.phi.min_exponent(j).unwrap_or(0) < 0 {
                    return Err(ModelError::InvalidModel(format!(
                        "summand {} has a pole along {} = 0, which is not a boundary component",
                        a + 1,
                        chart.names[j]
                    )));
                }
            }
            for (_, c) in s.phi.terms() {
                if let Some(f) = c.field() {
                    field = Some(f.clone());
                }
            }
        }
        Ok(GoodModel {
            chart,
            summands,
            kummer,
            field,
        })
    }

    /// Builds a model from terms with rational exponents, choosing the
    /// smallest Kummer denominators that make them integral.
    pub fn from_rational_exponents(
        chart: Chart,
        summands: Vec<(RationalTerms, usize)>,
    ) -> Result<Self, ModelError> {
        let n = chart.n();
        let mut h = vec![1i64; n];
        for (terms, _) in &summands {
            for (_, e) in terms {
                if e.len() != n {
                    return Err(ModelError::Dimension {
                        expected: n,
                        found: e.len(),
                    });
                }
                for (j, q) in e.iter().enumerate() {
                    let d = q.denom().to_i64().ok_or_else(|| {
                        ModelError::InvalidModel("exponent denominator too large".into())
                    })?;
                    h[j] = h[j].lcm(&d);
                }
            }
        }
        let out = summands
            .into_iter()
            .map(|(terms, rank)| {
                let mut phi = LaurentPolynomial::zero(n);
                for (c, e) in terms {
                    let exp = e
                        .iter()
                        .zip(&h)
                        .map(|(q, &hj)| (q * Rational::from_integer(hj.into())).to_integer().to_i64())
                        .collect::<Option<Vec<i64>>>()
                        .ok_or_else(|| ModelError::InvalidModel("exponent too large".into()))?;
                    phi.add_term(c, exp);
                }
                Ok(ModelSummand::new(phi, rank))
            })
            .collect::<Result<Vec<_>, ModelError>>()?;
        GoodModel::new(chart, out, h)
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn summands(&self) -> &[ModelSummand] {
        &self.summands
    }

    pub fn kummer(&self) -> &[i64] {
        &self.kummer
    }

    pub fn field(&self) -> Option<&Arc<NumberField>> {
        self.field.as_ref()
    }

    pub fn rank(&self) -> usize {
        self.summands.iter().map(|s| s.rank).sum()
    }

    /// Exponents of `phi` as rationals on the base.
    pub fn base_exponents(&self, phi: &LaurentPolynomial) -> Vec<Vec<Rational>> {
        phi.support()
            .map(|e| {
                e.iter()
                    .zip(&self.kummer)
                    .map(|(&a, &h)| Rational::new(a.into(), h.into()))
                    .collect()
            })
            .collect()
    }

    /// The same module on the cover `x_j = y_j^{h_j}`: base exponents are
    /// multiplied by `h_j`, cover coordinates are kept.
    pub fn kummer_pullback(&self, h: &[i64]) -> Result<GoodModel, ModelError> {
        self.check_factors(h)?;
        let summands = self
            .summands
            .iter()
            .map(|s| ModelSummand::new(s.phi.inflate(h), s.rank))
            .collect();
        GoodModel::new(self.chart.clone(), summands, self.kummer.clone())
    }

    /// The same module written on a finer Kummer cover (denominators
    /// multiplied by `h`).
    pub fn refine_cover(&self, h: &[i64]) -> Result<GoodModel, ModelError> {
        self.check_factors(h)?;
        let summands = self
            .summands
            .iter()
            .map(|s| ModelSummand::new(s.phi.inflate(h), s.rank))
            .collect();
        let kummer = self.kummer.iter().zip(h).map(|(a, b)| a * b).collect();
        GoodModel::new(self.chart.clone(), summands, kummer)
    }

    fn check_factors(&self, h: &[i64]) -> Result<(), ModelError> {
        if h.len() != self.chart.n() {
            return Err(ModelError::Dimension {
                expected: self.chart.n(),
                found: h.len(),
            });
        }
        for (j, &k) in h.iter().enumerate() {
            if k < 1 || (!self.chart.log_vars[j] && k != 1) {
                return Err(ModelError::InvalidModel(format!(
                    "cover degree {k} on {}",
                    self.chart.names[j]
                )));
            }
        }
        Ok(())
    }

    /// The model re-expanded around `z ∈ D`.  Coordinates with `z_l ≠ 0`
    /// are translated, and a boundary component not through `z` stops being
    /// logarithmic.  Negative powers of translated variables are cleared by
    /// one common monomial, a unit near `z`; valuations, the goodness
    /// conditions and the vanishing of the reduced refined forms at `z` are
    /// unchanged by a common unit factor.
    pub fn at_point(&self, z: &[Scalar]) -> Result<GoodModel, ModelError> {
        let n = self.chart.n();
        if z.len() != n {
            return Err(ModelError::Dimension {
                expected: n,
                found: z.len(),
            });
        }
        if !(0..n).any(|j| self.chart.log_vars[j] && z[j].is_zero()) {
            return Err(ModelError::PointNotOnD);
        }
        if z.iter().all(|c| c.is_zero()) {
            return Ok(self.clone());
        }
        let mut clear = vec![0i64; n];
        let mut log_vars = self.chart.log_vars.clone();
        let mut shift: Vec<Option<Scalar>> = vec![None; n];
        for j in 0..n {
            if z[j].is_zero() {
                continue;
            }
            if self.kummer[j] > 1 {
                return Err(ModelError::Unsupported(format!(
                    "recentring in {} on a ramified cover",
                    self.chart.names[j]
                )));
            }
            log_vars[j] = false;
            shift[j] = Some(z[j].clone());
            clear[j] = self
                .summands
                .iter()
                .filter_map(|s| s.phi.min_exponent(j))
                .map(|e| -e)
                .max()
                .unwrap_or(0)
                .max(0);
        }
        let summands = self
            .summands
            .iter()
            .map(|s| ModelSummand::new(s.phi.shift(&clear).translate(&shift), s.rank))
            .collect();
        let chart = Chart {
            names: self.chart.names.clone(),
            log_vars,
        };
        let mut out = GoodModel::new(chart, summands, self.kummer.clone())?;
        out.field = self.field.clone();
        Ok(out)
    }

    /// `g(φ)` with forms in base units.
    pub fn tropical(&self, phi: &LaurentPolynomial, mode: Mode) -> TropicalFn {
        let free = TropicalFn::mask(mode, &self.chart.log_vars);
        let forms = self
            .base_exponents(phi)
            .into_iter()
            .map(|e| e.into_iter().map(|q| -q).collect::<Vec<_>>());
        TropicalFn::new(forms, mode, free)
    }

    pub fn validate(&self) -> ValidationReport {
        let lv = &self.chart.log_vars;
        let summands: Vec<Verdict> = self
            .summands
            .iter()
            .map(|s| classify(&s.phi, lv, &self.kummer))
            .collect();
        let mut pairs = Vec::new();
        for a in 0..self.summands.len() {
            for b in a + 1..self.summands.len() {
                let diff = self.summands[a].phi.clone() - self.summands[b].phi.clone();
                pairs.push(((a, b), classify(&diff, lv, &self.kummer)));
            }
        }
        let good = summands.iter().chain(pairs.iter().map(|(_, v)| v)).all(Verdict::is_good);
        ValidationReport {
            summands,
            pairs,
            good,
        }
    }

    /// Validation of the model re-expanded at `z`.
    pub fn validate_at(&self, z: &[Scalar]) -> Result<ValidationReport, ModelError> {
        Ok(self.at_point(z)?.validate())
    }

    pub fn irregularity_divisor(&self) -> IrregularityDivisor {
        let n = self.chart.n();
        let b = self
            .summands
            .iter()
            .map(|s| {
                (0..n)
                    .map(|j| pole_order(&s.phi, j, &self.chart.log_vars, &self.kummer))
                    .collect()
            })
            .collect();
        IrregularityDivisor {
            log_vars: self.chart.log_vars.clone(),
            b,
            ranks: self.summands.iter().map(|s| s.rank).collect(),
        }
    }

    pub fn refined_form(&self, alpha: usize) -> RefinedForm {
        refined_form(&self.summands[alpha].phi, &self.chart, &self.kummer)
    }
}

/// `max(0, −v_{e_j}(φ))` in base units; zero off the boundary.
fn pole_order(phi: &LaurentPolynomial, j: usize, log_vars: &[bool], h: &[i64]) -> Rational {
    if !log_vars[j] {
        return Rational::zero();
    }
    let low = phi.min_exponent(j).unwrap_or(0);
    Rational::new((-low).max(0).into(), h[j].into())
}

/// Outcome of the goodness test on a single function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// In `k⟦x⟧`.
    Holomorphic,
    /// `u·x^{−pole}` with `u` a unit.
    MonomialUnit { pole: Vec<Rational> },
    Fails { reason: String },
}

impl Verdict {
    pub fn is_good(&self) -> bool {
        !matches!(self, Verdict::Fails { .. })
    }
}

fn classify(f: &LaurentPolynomial, log_vars: &[bool], h: &[i64]) -> Verdict {
    if f.support().all(|e| e.iter().all(|&a| a >= 0)) {
        return Verdict::Holomorphic;
    }
    let c = f.min_corner().expect("nonzero");
    for (j, &a) in c.iter().enumerate() {
        if !log_vars[j] && a != 0 {
            return Verdict::Fails {
                reason: format!("factor in variable {} is not a unit", j + 1),
            };
        }
        if log_vars[j] && a > 0 {
            return Verdict::Fails {
                reason: format!("vanishes along variable {} while having poles", j + 1),
            };
        }
    }
    if f.coeff(&c).is_zero() {
        return Verdict::Fails {
            reason: "no dominant monomial".into(),
        };
    }
    Verdict::MonomialUnit {
        pole: c
            .iter()
            .zip(h)
            .map(|(&a, &k)| Rational::new((-a).into(), k.into()))
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub summands: Vec<Verdict>,
    /// Verdicts on `φ_α − φ_β` for `α < β`.
    pub pairs: Vec<((usize, usize), Verdict)>,
    pub good: bool,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &Verdict| match v {
            Verdict::Holomorphic => "holomorphic".to_string(),
            Verdict::MonomialUnit { pole } => format!(
                "unit times pole ({})",
                pole.iter().map(crate::algebra::scalar::fmt_rational).collect::<Vec<_>>().join(", ")
            ),
            Verdict::Fails { reason } => format!("fails: {reason}"),
        };
        for (a, v) in self.summands.iter().enumerate() {
            match v {
                Verdict::Fails { reason } => writeln!(f, "condition (1) fails for summand {}: {reason}", a + 1)?,
                _ => writeln!(f, "summand {}: {}", a + 1, show(v))?,
            }
        }
        for ((a, b), v) in &self.pairs {
            match v {
                Verdict::Fails { reason } => {
                    writeln!(f, "condition (2) fails for summands {}, {}: {reason}", a + 1, b + 1)?
                }
                _ => writeln!(f, "difference {}-{}: {}", a + 1, b + 1, show(v))?,
            }
        }
        write!(f, "GOOD DECOMPOSITION: {}", if self.good { "yes" } else { "no" })
    }
}

/// The pole vectors `b_α` of the summands, in base units.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrregularityDivisor {
    log_vars: Vec<bool>,
    pub b: Vec<Vec<Rational>>,
    pub ranks: Vec<usize>,
}

impl IrregularityDivisor {
    /// One `b`-vector per row of the model (summands repeated by rank),
    /// sorted lexicographically, largest first.
    pub fn rows(&self) -> Vec<Vec<Rational>> {
        let mut rows: Vec<Vec<Rational>> = self
            .b
            .iter()
            .zip(&self.ranks)
            .flat_map(|(b, &d)| std::iter::repeat_n(b.clone(), d))
            .collect();
        rows.sort_by(|a, b| b.cmp(a));
        rows
    }

    /// Sorted multiset `R_1 ≥ … ≥ R_d` of coefficients along `D_j`.
    pub fn along(&self, j: usize) -> Vec<Rational> {
        let mut v: Vec<Rational> = self.rows().into_iter().map(|r| r[j].clone()).collect();
        v.sort_by(|a, b| b.cmp(a));
        v
    }

    /// `Σ_α d_α·b_αj`.
    pub fn total_along(&self, j: usize) -> Rational {
        self.along(j).into_iter().fold(Rational::zero(), |a, b| a + b)
    }

    pub fn is_regular(&self) -> bool {
        self.b.iter().flatten().all(|q| !q.is_positive())
    }

    pub fn divisors(&self) -> Vec<usize> {
        (0..self.log_vars.len()).filter(|&j| self.log_vars[j]).collect()
    }
}

/// `𝕥·dφ` in the log basis, with `𝕥 = Π x_j^{b_j}`.  Entries live on the
/// Kummer cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefinedForm {
    pub b: Vec<Rational>,
    pub theta: Vec<LaurentPolynomial>,
}

pub fn refined_form(phi: &LaurentPolynomial, chart: &Chart, kummer: &[i64]) -> RefinedForm {
    let n = chart.n();
    let twist: Vec<i64> = (0..n)
        .map(|j| {
            if chart.log_vars[j] {
                (-phi.min_exponent(j).unwrap_or(0)).max(0)
            } else {
                0
            }
        })
        .collect();
    let theta = (0..n)
        .map(|l| log_derivative_on_cover(phi, l, &chart.log_vars, kummer).shift(&twist))
        .collect();
    let b = twist
        .iter()
        .zip(kummer)
        .map(|(&t, &h)| Rational::new(t.into(), h.into()))
        .collect();
    RefinedForm { b, theta }
}

/// `x_l∂_l` (log) or `∂_l` in base coordinates, applied to a function
/// written on the cover.
pub(crate) fn log_derivative_on_cover(
    phi: &LaurentPolynomial,
    l: usize,
    log_vars: &[bool],
    kummer: &[i64],
) -> LaurentPolynomial {
    if log_vars[l] {
        phi.euler(l).scale(&Scalar::frac(1, kummer[l]))
    } else {
        phi.partial(l)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, qi};

    pub(crate) fn lp(n: usize, t: &[(i64, &[i64])]) -> LaurentPolynomial {
        LaurentPolynomial::from_int_terms(n, t)
    }

    pub(crate) fn model(chart: Chart, phis: &[(LaurentPolynomial, usize)]) -> GoodModel {
        let n = chart.n();
        GoodModel::new(
            chart,
            phis.iter().map(|(p, d)| ModelSummand::new(p.clone(), *d)).collect(),
            vec![1; n],
        )
        .unwrap()
    }

    pub(crate) fn xy(log_x: bool, log_y: bool) -> Chart {
        Chart::new(vec!["x".into(), "y".into()], vec![log_x, log_y]).unwrap()
    }

    #[test]
    fn chart_checks() {
        assert!(Chart::new(vec!["x".into(), "x".into()], vec![true, false]).is_err());
        assert!(Chart::new(vec!["x".into()], vec![false]).is_err());
        assert_eq!(Chart::standard(3, 2).m(), 2);
    }

    #[test]
    fn validation_examples() {
        let m = model(xy(true, true), &[(lp(2, &[(1, &[-1, 0])]), 1)]);
        assert!(m.validate().good);

        let m = model(
            xy(true, true),
            &[(lp(2, &[(1, &[-1, 0])]), 1), (lp(2, &[(1, &[-1, 0]), (1, &[0, -1])]), 1)],
        );
        // the difference is fine, but x⁻¹ + y⁻¹ is not a unit times a monomial
        let r = m.validate();
        assert!(!r.good);
        assert!(r.summands[0].is_good() && !r.summands[1].is_good());
        assert_eq!(r.pairs[0].1, Verdict::MonomialUnit { pole: vec![qi(0), qi(1)] });

        let m = model(xy(false, true), &[(lp(2, &[(1, &[1, -2])]), 1)]);
        let r = m.validate();
        assert!(!r.good);
        assert!(!r.summands[0].is_good());
        assert!(r.to_string().ends_with("GOOD DECOMPOSITION: no"));
    }

    #[test]
    fn poles_off_the_boundary_are_rejected() {
        let c = xy(false, true);
        let s = ModelSummand::new(lp(2, &[(1, &[-1, 0])]), 1);
        assert!(GoodModel::new(c, vec![s], vec![1, 1]).is_err());
    }

    #[test]
    fn irregularity_examples() {
        let m = model(xy(true, true), &[(lp(2, &[(1, &[-2, -3])]), 1)]);
        assert_eq!(m.irregularity_divisor().b[0], vec![qi(2), qi(3)]);
        let m = model(xy(false, true), &[(lp(2, &[(1, &[1, -2])]), 1)]);
        assert_eq!(m.irregularity_divisor().along(1), vec![qi(2)]);
        let m = model(Chart::standard(1, 1), &[(lp(1, &[(1, &[0]), (1, &[1])]), 1)]);
        assert!(m.irregularity_divisor().is_regular());
    }

    #[test]
    fn fractional_exponents_choose_minimal_cover() {
        let m = GoodModel::from_rational_exponents(
            Chart::standard(1, 1),
            vec![(vec![(Scalar::int(1), vec![q(-3, 2)])], 2)],
        )
        .unwrap();
        assert_eq!(m.kummer(), &[2]);
        let irr = m.irregularity_divisor();
        assert_eq!(irr.along(0), vec![q(3, 2), q(3, 2)]);
        assert_eq!(irr.total_along(0), qi(3));
    }

    #[test]
    fn refined_form_examples() {
        let c = xy(false, true);
        let r = refined_form(&lp(2, &[(1, &[1, -2])]), &c, &[1, 1]);
        assert_eq!(r.theta, vec![lp(2, &[(1, &[0, 0])]), lp(2, &[(-2, &[1, 0])])]);
        let r = refined_form(&lp(1, &[(1, &[-1])]), &Chart::standard(1, 1), &[1]);
        assert_eq!(r.theta, vec![lp(1, &[(-1, &[0])])]);
        let r = refined_form(&lp(2, &[(1, &[-2, -3])]), &xy(true, true), &[1, 1]);
        assert_eq!(r.theta, vec![lp(2, &[(-2, &[0, 0])]), lp(2, &[(-3, &[0, 0])])]);
        assert_eq!(r.b, vec![qi(2), qi(3)]);
    }

    #[test]
    fn recentring_clears_units_and_translates() {
        let m = model(xy(false, true), &[(lp(2, &[(1, &[1, -2])]), 1)]);
        let z = m.at_point(&[Scalar::int(1), Scalar::int(0)]).unwrap();
        assert_eq!(z.summands()[0].phi, lp(2, &[(1, &[0, -2]), (1, &[1, -2])]));
        assert!(m.at_point(&[Scalar::int(1), Scalar::int(1)]).is_err());

        let m = model(xy(true, true), &[(lp(2, &[(1, &[-1, 0])]), 1)]);
        let z = m.at_point(&[Scalar::int(2), Scalar::int(0)]).unwrap();
        assert_eq!(z.chart().log_vars(), &[false, true]);
        assert_eq!(z.summands()[0].phi, lp(2, &[(1, &[0, 0])]));
    }
}
