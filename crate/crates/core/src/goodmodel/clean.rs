//! Cleanness verdicts and the non-clean locus.

use std::collections::BTreeSet;
use std::fmt;

use crate::algebra::{factor_rational, Field, LaurentPolynomial, Mode, Poly, Rational, Scalar, Zero};
use crate::tropical::{end_profile_linear, sorted_profile_linear, ProfileVerdict, RadiusProfile};

use super::{refined_form, theta_on_divisor, GoodModel, ModelError};

/// Value at `z` of the reduced refined form of one summand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaCheck {
    pub summand: usize,
    pub value: Vec<Scalar>,
}

impl ThetaCheck {
    pub fn nonzero(&self) -> bool {
        self.value.iter().any(|c| !c.is_zero())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CleanVerdict {
    pub clean: bool,
    /// Sharp-mode profile at `z`.
    pub profile: ProfileVerdict,
    /// One entry per summand with a pole through `z`.
    pub theta: Vec<ThetaCheck>,
}

impl fmt::Display for CleanVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "clean: {}", yes_no(self.clean))?;
        write_profile(f, "sharp", &self.profile)?;
        for t in &self.theta {
            let v: Vec<String> = t.value.iter().map(|c| c.to_string()).collect();
            writeln!(
                f,
                "  theta(z) summand {}: [{}]{}",
                t.summand + 1,
                v.join(", "),
                if t.nonzero() { "" } else { " vanishes" }
            )?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumericalVerdict {
    pub numerically_clean: bool,
    /// Full-mode profile at `z`.
    pub profile: ProfileVerdict,
}

impl fmt::Display for NumericalVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "numerically clean: {}", yes_no(self.numerically_clean))?;
        write_profile(f, "full", &self.profile)
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn fmt_form(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(crate::algebra::scalar::fmt_rational).collect();
    format!("({})", parts.join(", "))
}

fn write_profile(f: &mut fmt::Formatter<'_>, label: &str, p: &ProfileVerdict) -> fmt::Result {
    for (i, form) in p.per_index.iter().enumerate() {
        match form {
            Some(l) => writeln!(f, "  g{}[{label}] = {}", i + 1, fmt_form(l))?,
            None => writeln!(f, "  g{}[{label}] not linear", i + 1)?,
        }
    }
    if let Some((i, pt)) = &p.witness {
        writeln!(f, "  witness: g{} kinks near r = {}", i + 1, fmt_form(pt))?;
    }
    Ok(())
}

impl GoodModel {
    fn profile(&self, mode: Mode) -> Result<ProfileVerdict, ModelError> {
        let entries = self
            .summands
            .iter()
            .map(|s| (self.tropical(&s.phi, mode), s.rank))
            .collect();
        Ok(sorted_profile_linear(&RadiusProfile::new(entries)?))
    }

    /// Sharp-mode linearity at `z` together with nonvanishing at `z` of the
    /// reduced refined form of every summand with a pole through `z`.
    pub fn clean_at_point(&self, z: &[Scalar]) -> Result<CleanVerdict, ModelError> {
        let local = self.at_point(z)?;
        let profile = local.profile(Mode::Sharp)?;
        let mut theta = Vec::new();
        for (a, s) in local.summands.iter().enumerate() {
            let rf = refined_form(&s.phi, &local.chart, &local.kummer);
            if rf.b.iter().all(|b| b.is_zero()) {
                continue;
            }
            theta.push(ThetaCheck {
                summand: a,
                value: rf.theta.iter().map(|p| p.constant_term()).collect(),
            });
        }
        let clean = profile.linear && theta.iter().all(ThetaCheck::nonzero);
        Ok(CleanVerdict {
            clean,
            profile,
            theta,
        })
    }

    /// Full-mode linearity of every sorted subsidiary function at `z`.
    pub fn numerically_clean_at_point(&self, z: &[Scalar]) -> Result<NumericalVerdict, ModelError> {
        let profile = self.at_point(z)?.profile(Mode::Full)?;
        Ok(NumericalVerdict {
            numerically_clean: profile.linear,
            profile,
        })
    }

    /// Non-clean points.  Along `D_j` away from the other components,
    /// cleanness is the nonvanishing of the reduced refined forms, so the
    /// locus there is cut out by their entries; crossing points are tested
    /// directly.  Points are enumerated for `n ≤ 2`.
    pub fn nonclean_locus(&self) -> Result<NoncleanLocus, ModelError> {
        let n = self.chart.n();
        let origin = vec![Scalar::zero(); n];
        let mut generators = Vec::new();
        for j in 0..n {
            if !self.chart.log_vars[j] {
                continue;
            }
            for (a, s) in self.summands.iter().enumerate() {
                if s.phi.min_exponent(j).unwrap_or(0) >= 0 {
                    continue;
                }
                generators.push(LocusGenerators {
                    divisor: j,
                    summand: a,
                    entries: theta_on_divisor(&s.phi, &self.chart, &self.kummer, j)?,
                });
            }
        }
        let mut points = BTreeSet::new();
        let mut algebraic = BTreeSet::new();
        if n > 2 {
            return Ok(NoncleanLocus {
                enumerated: false,
                points: Vec::new(),
                algebraic: Vec::new(),
                generators,
            });
        }
        if !self.clean_at_point(&origin)?.clean {
            points.insert(origin);
        }
        if n == 2 {
            for g in &generators {
                let o = 1 - g.divisor;
                let gcd = univariate_gcd(&g.entries, o);
                if gcd.is_zero() {
                    return Err(ModelError::CodimensionViolation { divisor: g.divisor });
                }
                let (roots, rest) = nonzero_roots(&gcd);
                for t in roots {
                    let mut z = vec![Scalar::zero(); 2];
                    z[o] = t.pow(self.kummer[o] as u32);
                    points.insert(z);
                }
                for p in rest {
                    let var = if self.kummer[o] > 1 {
                        format!("{}^(1/{})", self.chart.names[o], self.kummer[o])
                    } else {
                        self.chart.names[o].clone()
                    };
                    algebraic.insert((g.divisor, format!("{} = 0", p.display_in(&var))));
                }
            }
        }
        Ok(NoncleanLocus {
            enumerated: true,
            points: points.into_iter().collect(),
            algebraic: algebraic.into_iter().collect(),
            generators,
        })
    }
}

/// Generators of the vanishing ideal of a reduced refined form on `D_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocusGenerators {
    pub divisor: usize,
    pub summand: usize,
    pub entries: Vec<LaurentPolynomial>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoncleanLocus {
    /// Whether `points` and `algebraic` describe the whole locus.
    pub enumerated: bool,
    pub points: Vec<Vec<Scalar>>,
    /// Points with coordinates outside the coefficient field, as
    /// `(divisor, irreducible equation)`.
    pub algebraic: Vec<(usize, String)>,
    pub generators: Vec<LocusGenerators>,
}

impl NoncleanLocus {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty() && self.algebraic.is_empty()
    }
}

impl GoodModel {
    pub fn describe_locus(&self, l: &NoncleanLocus) -> String {
        let names = self.chart.names();
        let mut out = Vec::new();
        if !l.enumerated {
            out.push("non-clean locus: not enumerated for n > 2".to_string());
            for g in &l.generators {
                let e: Vec<String> = g.entries.iter().map(|p| p.display_with(names)).collect();
                out.push(format!(
                    "  D_{} summand {}: ({})",
                    g.divisor + 1,
                    g.summand + 1,
                    e.join(", ")
                ));
            }
            return out.join("\n");
        }
        if l.is_empty() {
            out.push("non-clean locus: empty".to_string());
        } else {
            out.push("non-clean locus:".to_string());
            for p in &l.points {
                let c: Vec<String> = names
                    .iter()
                    .zip(p)
                    .map(|(n, v)| format!("{n}={v}"))
                    .collect();
                out.push(format!("  point {}", c.join(",")));
            }
            for (j, eq) in &l.algebraic {
                out.push(format!("  on D_{}: {}", j + 1, eq));
            }
        }
        out.join("\n")
    }
}

/// Profile linearity of `End(M)` at `z` in full mode, a numerical test for
/// the existence of a good decomposition.
pub fn end_criterion(g: &GoodModel, z: &[Scalar]) -> Result<ProfileVerdict, ModelError> {
    let local = g.at_point(z)?;
    let s: Vec<(LaurentPolynomial, usize)> =
        local.summands.iter().map(|s| (s.phi.clone(), s.rank)).collect();
    Ok(end_profile_linear(&s, Mode::Full, local.chart.log_vars())?)
}

/// Gcd of entries depending on variable `o` only, after removing the common
/// power of `x_o`.
fn univariate_gcd(entries: &[LaurentPolynomial], o: usize) -> Poly<Scalar> {
    let low = entries.iter().filter_map(|p| p.min_exponent(o)).min().unwrap_or(0);
    let mut g: Poly<Scalar> = Poly::zero();
    for p in entries {
        if p.is_zero() {
            continue;
        }
        let deg = (p.max_exponent(o).unwrap() - low) as usize;
        let mut c = vec![Scalar::zero(); deg + 1];
        for (e, s) in p.terms() {
            c[(e[o] - low) as usize] = s.clone();
        }
        g = g.gcd(&Poly::new(c));
    }
    g
}

/// Nonzero roots in the coefficient field and remaining irreducible factors.
fn nonzero_roots(p: &Poly<Scalar>) -> (Vec<Scalar>, Vec<Poly<Scalar>>) {
    // strip factors of the variable itself
    let k = p.coeffs().iter().take_while(|c| c.is_zero()).count();
    let p = Poly::new(p.coeffs()[k..].to_vec());
    if p.degree().unwrap_or(0) == 0 {
        return (Vec::new(), Vec::new());
    }
    let rational: Option<Vec<Rational>> = p.coeffs().iter().map(|c| c.as_rational()).collect();
    let mut roots = Vec::new();
    let mut rest = Vec::new();
    match rational.map(|c| factor_rational(&Poly::new(c))) {
        Some(Ok(factors)) => {
            for (f, _) in factors {
                if f.degree() == Some(1) {
                    roots.push(Scalar::rational(-f.coeff(0) / f.coeff(1)));
                } else {
                    rest.push(Poly::new(f.coeffs().iter().cloned().map(Scalar::rational).collect()));
                }
            }
        }
        _ => {
            if p.degree() == Some(1) {
                roots.push(-(p.coeff(0) * p.coeff(1).inv().expect("nonzero")));
            } else {
                rest.push(p.monic());
            }
        }
    }
    (roots, rest)
}

#[cfg(test)]
mod tests {
    use super::super::tests::{lp, model, xy};
    use super::*;
    use crate::goodmodel::Chart;

    fn pt(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&c| Scalar::int(c)).collect()
    }

    #[test]
    fn x_over_y_squared() {
        let m = model(xy(false, true), &[(lp(2, &[(1, &[1, -2])]), 1)]);
        let c = m.clean_at_point(&pt(&[0, 0])).unwrap();
        assert!(c.clean);
        assert_eq!(c.theta[0].value, pt(&[1, 0]));
        assert!(!m.numerically_clean_at_point(&pt(&[0, 0])).unwrap().numerically_clean);
        assert!(m.numerically_clean_at_point(&pt(&[1, 0])).unwrap().numerically_clean);
        assert!(m.nonclean_locus().unwrap().is_empty());
    }

    #[test]
    fn crossing_of_two_poles() {
        let m = model(
            xy(true, true),
            &[(lp(2, &[(1, &[-1, 0])]), 1), (lp(2, &[(1, &[0, -1])]), 1)],
        );
        let c = m.clean_at_point(&pt(&[0, 0])).unwrap();
        assert!(!c.clean);
        assert!(!c.profile.linear);
        let l = m.nonclean_locus().unwrap();
        assert_eq!(l.points, vec![pt(&[0, 0])]);
        assert!(m.clean_at_point(&pt(&[0, 3])).unwrap().clean);
    }

    #[test]
    fn monomial_pole_is_clean() {
        let m = model(xy(true, true), &[(lp(2, &[(1, &[-1, -1])]), 1)]);
        let c = m.clean_at_point(&pt(&[0, 0])).unwrap();
        assert!(c.clean);
        assert_eq!(c.theta[0].value, pt(&[-1, -1]));
        assert!(m.numerically_clean_at_point(&pt(&[0, 0])).unwrap().numerically_clean);
        let m = model(Chart::standard(1, 1), &[(lp(1, &[(1, &[-1])]), 1)]);
        assert!(m.nonclean_locus().unwrap().is_empty());
    }

    #[test]
    fn vanishing_refined_form_along_a_divisor() {
        // φ = (x − 1)²·y⁻¹ with x non-logarithmic: θ on D_y is a multiple of (x − 1)
        let m = model(xy(false, true), &[(lp(2, &[(1, &[2, -1]), (-2, &[1, -1]), (1, &[0, -1])]), 1)]);
        let l = m.nonclean_locus().unwrap();
        assert_eq!(l.points, vec![pt(&[1, 0])]);
        assert!(!m.clean_at_point(&pt(&[1, 0])).unwrap().clean);
        assert!(m.clean_at_point(&pt(&[2, 0])).unwrap().clean);
        // (x² + 2)²·y⁻¹: an irreducible quadratic
        let m = model(xy(false, true), &[(lp(2, &[(1, &[4, -1]), (4, &[2, -1]), (4, &[0, -1])]), 1)]);
        let l = m.nonclean_locus().unwrap();
        assert!(l.points.is_empty());
        assert_eq!(l.algebraic.len(), 1);
    }

    #[test]
    fn kummer_refinement_keeps_verdicts() {
        let m = model(
            xy(true, true),
            &[(lp(2, &[(1, &[-1, 0])]), 1), (lp(2, &[(1, &[-2, -1])]), 2)],
        );
        let r = m.refine_cover(&[2, 3]).unwrap();
        let z = pt(&[0, 0]);
        assert_eq!(m.clean_at_point(&z).unwrap().clean, r.clean_at_point(&z).unwrap().clean);
        assert_eq!(
            m.numerically_clean_at_point(&z).unwrap().numerically_clean,
            r.numerically_clean_at_point(&z).unwrap().numerically_clean
        );
    }

    #[test]
    fn end_criterion_on_good_model() {
        let m = model(
            xy(true, true),
            &[(lp(2, &[(1, &[-1, 0])]), 1), (lp(2, &[(1, &[-1, 0]), (1, &[0, -1])]), 1)],
        );
        assert!(end_criterion(&m, &pt(&[0, 0])).unwrap().linear);
        let m = model(
            xy(true, true),
            &[(lp(2, &[(1, &[-1, 0])]), 1), (lp(2, &[(1, &[0, -1])]), 1)],
        );
        assert!(!end_criterion(&m, &pt(&[0, 0])).unwrap().linear);
    }
}
