//! The conjectural cycle `rank·[X] + Σ_j Σ_α d_α·b_αj·L_αj`.

use crate::algebra::{LaurentPolynomial, Rational};
use crate::cycles::{canonical_direction, Component, CycleError, LogCycle};

use super::{log_derivative_on_cover, Chart, GoodModel, ModelError};

/// Reduction modulo `x_j` of `x_j^{b_j}·dφ` in the log basis, on the cover.
pub fn theta_on_divisor(
    phi: &LaurentPolynomial,
    chart: &Chart,
    kummer: &[i64],
    j: usize,
) -> Result<Vec<LaurentPolynomial>, ModelError> {
    let n = chart.n();
    let mut shift = vec![0; n];
    shift[j] = (-phi.min_exponent(j).unwrap_or(0)).max(0);
    let red: Vec<LaurentPolynomial> = (0..n)
        .map(|l| log_derivative_on_cover(phi, l, chart.log_vars(), kummer).shift(&shift).slice(j, 0))
        .collect();
    if shift[j] > 0 && red[j].is_zero() {
        return Err(CycleError::VanishingTheta { divisor: j }.into());
    }
    Ok(red)
}

/// Lines over `D_j` for every summand with a pole along `D_j`, directed by
/// the reduced refined form and weighted by `d_α·b_αj`; equal lines merge.
/// Multiplicities must come out integral.
pub fn zcar_prime(g: &GoodModel) -> Result<LogCycle, ModelError> {
    let chart = g.chart();
    let irr = g.irregularity_divisor();
    let mut out = LogCycle::new(chart.names().to_vec(), chart.log_vars().to_vec());
    out.add(Component::ZeroSection, Rational::from_integer(g.rank().into()));
    for (a, s) in g.summands().iter().enumerate() {
        for j in 0..chart.n() {
            let b = &irr.b[a][j];
            if b.numer() <= &0.into() {
                continue;
            }
            let dir = theta_on_divisor(&s.phi, chart, g.kummer(), j)?;
            out.add(
                Component::DivisorLine {
                    divisor: j,
                    direction: canonical_direction(&dir)?,
                    twist: irr.b[a].clone(),
                    cover_degree: 1,
                },
                b * Rational::from_integer(s.rank.into()),
            );
        }
    }
    Ok(out.finalize()?)
}

#[cfg(test)]
mod tests {
    use super::super::tests::{lp, model, xy};
    use super::*;
    use crate::algebra::{q, qi, Scalar};
    use crate::cycles::{cycle_equal, gr_extract_structured, kummer_pullback};
    use crate::goodmodel::{refined_form, ModelSummand};

    #[test]
    fn rank_one_curve() {
        let m = model(Chart::standard(1, 1), &[(lp(1, &[(1, &[-3])]), 1)]);
        let c = zcar_prime(&m).unwrap();
        assert_eq!(c.report_lines(), vec!["ZeroSection mult=1", "Line D_1 dir=[1] mult=3"]);
        let local = crate::cdvf::local_zcar_rank1(&lp(1, &[(1, &[-3])]), 1, c.names(), c.log_vars(), 0).unwrap();
        assert!(cycle_equal(&c, &local).unwrap());
    }

    #[test]
    fn regular_model() {
        let m = model(xy(true, false), &[(lp(2, &[(1, &[0, 1])]), 4)]);
        assert_eq!(zcar_prime(&m).unwrap().report_lines(), vec!["ZeroSection mult=4"]);
    }

    #[test]
    fn monomial_surface_matches_gr() {
        let phi = lp(2, &[(1, &[-2, -3])]);
        let m = model(xy(true, true), &[(phi.clone(), 2)]);
        let c = zcar_prime(&m).unwrap();
        let rf = refined_form(&phi, m.chart(), m.kummer());
        let gr = gr_extract_structured(&rf.b, &rf.theta, 2, c.names(), c.log_vars()).unwrap();
        assert!(cycle_equal(&c, &gr).unwrap());
        assert_eq!(
            c.report_lines(),
            vec![
                "ZeroSection mult=2",
                "Line D_1 dir=[1, 3/2] mult=4",
                "Line D_2 dir=[1, 3/2] mult=6"
            ]
        );
    }

    #[test]
    fn conjugate_half_slopes_merge() {
        let m = crate::goodmodel::GoodModel::from_rational_exponents(
            Chart::standard(1, 1),
            vec![
                (vec![(Scalar::int(1), vec![q(-1, 2)])], 1),
                (vec![(Scalar::int(-1), vec![q(-1, 2)])], 1),
            ],
        )
        .unwrap();
        let c = zcar_prime(&m).unwrap();
        assert_eq!(c.report_lines(), vec!["ZeroSection mult=2", "Line D_1 dir=[1] mult=1"]);
        // one of the two alone is not integral
        let half = crate::goodmodel::GoodModel::new(
            m.chart().clone(),
            vec![ModelSummand::new(lp(1, &[(1, &[-1])]), 1)],
            vec![2],
        )
        .unwrap();
        assert!(matches!(
            zcar_prime(&half),
            Err(ModelError::Cycle(CycleError::NonIntegral { .. }))
        ));
    }

    #[test]
    fn kummer_functoriality() {
        let m = model(
            xy(true, false),
            &[(lp(2, &[(1, &[-2, 0]), (3, &[-2, 1]), (1, &[-1, 0])]), 1), (lp(2, &[(1, &[0, 1])]), 2)],
        );
        let h = [3, 1];
        let lhs = kummer_pullback(&zcar_prime(&m).unwrap(), &h).unwrap();
        let rhs = zcar_prime(&m.kummer_pullback(&h).unwrap()).unwrap();
        assert!(cycle_equal(&lhs, &rhs).unwrap());
        assert_eq!(rhs.multiplicity(&rhs.lines().next().unwrap().0.clone()), qi(6));
    }
}
