//! Rank-one pieces over the local field at the generic point of a divisor.

use num_traits::Zero;

use super::CdvfError;
use crate::algebra::{log_derivative, LaurentPolynomial, Rational, Scalar};
use crate::cycles::{canonical_direction, Component, LogCycle};

/// `b = max(0, −v_{x_j}(φ))` as an integer.
fn pole_order(phi: &LaurentPolynomial, j: usize) -> i64 {
    phi.min_exponent(j).map_or(0, |k| (-k).max(0))
}

/// Reduction modulo `x_j` of `x_j^b·D_l φ` for every `l`.
fn reduced_theta(
    phi: &LaurentPolynomial,
    log_vars: &[bool],
    j: usize,
    b: i64,
) -> Result<Vec<LaurentPolynomial>, CdvfError> {
    let mut shift = vec![0; phi.nvars()];
    shift[j] = b;
    (0..phi.nvars())
        .map(|l| Ok(log_derivative(phi, l, log_vars)?.shift(&shift).slice(j, 0)))
        .collect()
}

/// Checks `θ_l = −D_l(θ_j)/b` modulo `x_j` for all `l ≠ j`, where `θ` is the
/// reduced refined form along `D_j` and `D_l` the chart derivation.
pub fn theta_relation_check(
    phi: &LaurentPolynomial,
    log_vars: &[bool],
    j: usize,
) -> Result<bool, CdvfError> {
    let b = pole_order(phi, j);
    if b == 0 {
        return Err(CdvfError::ZeroIrregularity);
    }
    let theta = reduced_theta(phi, log_vars, j, b)?;
    let inv_b = Scalar::frac(-1, b);
    for l in 0..phi.nvars() {
        if l == j {
            continue;
        }
        let rhs = log_derivative(&theta[j], l, log_vars)?.scale(&inv_b);
        if rhs != theta[l] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `d·[X] + d·b·Z_θ` over `D_j` for `E(φ)^{⊕d}`, with `θ` obtained from its
/// `j`-th entry through the relation `θ_l = −D_l(θ_j)/b`.
pub fn local_zcar_rank1(
    phi: &LaurentPolynomial,
    d: usize,
    names: &[String],
    log_vars: &[bool],
    j: usize,
) -> Result<LogCycle, CdvfError> {
    let mut out = LogCycle::new(names.to_vec(), log_vars.to_vec());
    out.add(Component::ZeroSection, Rational::from_integer(d.into()));
    let b = pole_order(phi, j);
    if b == 0 {
        return Ok(out);
    }
    let mut shift = vec![0; phi.nvars()];
    shift[j] = b;
    let theta_j = phi.euler(j).shift(&shift).slice(j, 0);
    if theta_j.is_zero() {
        return Err(CdvfError::VanishingTheta);
    }
    let inv_b = Scalar::frac(-1, b);
    let theta: Vec<LaurentPolynomial> = (0..phi.nvars())
        .map(|l| {
            if l == j {
                Ok(theta_j.clone())
            } else {
                Ok(log_derivative(&theta_j, l, log_vars)?.scale(&inv_b))
            }
        })
        .collect::<Result<_, CdvfError>>()?;
    let mut twist = vec![Rational::zero(); phi.nvars()];
    twist[j] = Rational::from_integer(b.into());
    out.add(
        Component::DivisorLine {
            divisor: j,
            direction: canonical_direction(&theta)?,
            twist,
            cover_degree: 1,
        },
        Rational::from_integer((d as i64 * b).into()),
    );
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(n: usize, t: &[(i64, &[i64])]) -> LaurentPolynomial {
        LaurentPolynomial::from_int_terms(n, t)
    }

    fn names(n: usize) -> Vec<String> {
        ["t", "y"][..n].iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn relation_examples() {
        assert!(theta_relation_check(&lp(2, &[(1, &[-2, -3])]), &[true, true], 0).unwrap());
        assert!(theta_relation_check(&lp(1, &[(1, &[-1])]), &[true], 0).unwrap());
        assert!(theta_relation_check(&lp(2, &[(5, &[-3, 1])]), &[true, true], 0).unwrap());
        assert!(theta_relation_check(&lp(2, &[(5, &[-3, 1])]), &[true, false], 0).unwrap());
        // higher-order terms in x do not affect the reduction
        let phi = lp(2, &[(1, &[-2, 1]), (7, &[-1, 3]), (2, &[0, -1])]);
        assert!(theta_relation_check(&phi, &[true, false], 0).unwrap());
        assert!(theta_relation_check(&lp(1, &[(1, &[2])]), &[true], 0).is_err());
    }

    #[test]
    fn local_cycles() {
        let c = local_zcar_rank1(&lp(1, &[(1, &[-3])]), 1, &names(1), &[true], 0).unwrap();
        assert_eq!(c.report_lines(), vec!["ZeroSection mult=1", "Line D_1 dir=[1] mult=3"]);
        let c = local_zcar_rank1(&lp(1, &[(1, &[0]), (1, &[2])]), 2, &names(1), &[true], 0).unwrap();
        assert_eq!(c.report_lines(), vec!["ZeroSection mult=2"]);
        let c = local_zcar_rank1(&lp(2, &[(1, &[-1, 0])]), 1, &names(2), &[true, false], 0).unwrap();
        assert_eq!(c.report_lines(), vec!["ZeroSection mult=1", "Line D_1 dir=[1, 0] mult=1"]);
    }
}
