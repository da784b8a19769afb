//! Matrix connections `∂e_j = Σ_i A_ij e_i`: cyclic vectors, companion
//! matrices and a brute-force radius estimate.

use num_traits::{One, Signed, Zero};

use super::{CdvfError, DiffOperator, Gauge};
use crate::algebra::linalg::{determinant, solve, Matrix};
use crate::algebra::{LaurentSeries, Rational, Scalar};

pub const MAX_CYCLIC_RANK: usize = 4;

/// `f ↦ f' + A f` on coordinate vectors.
fn nabla(a: &Matrix<LaurentSeries>, f: &[LaurentSeries]) -> Vec<LaurentSeries> {
    (0..f.len())
        .map(|i| {
            let mut acc = f[i].derivative();
            for (j, fj) in f.iter().enumerate() {
                if !a[i][j].is_exact_zero() && !fj.is_exact_zero() {
                    acc = acc + a[i][j].clone() * fj.clone();
                }
            }
            acc
        })
        .collect()
}

fn check_square(a: &Matrix<LaurentSeries>) -> Result<usize, CdvfError> {
    let d = a.len();
    if d == 0 || a.iter().any(|r| r.len() != d) {
        return Err(CdvfError::InvalidOperator("connection matrix must be square".into()));
    }
    Ok(d)
}

/// Monic operator annihilating the first cyclic vector among
/// `e_1, e_1 + t·e_2, e_1 + t·e_2 + t²·e_3, …`.
pub fn cyclic_vector(a: &Matrix<LaurentSeries>) -> Result<DiffOperator, CdvfError> {
    let d = check_square(a)?;
    if d > MAX_CYCLIC_RANK {
        return Err(CdvfError::InvalidOperator(format!(
            "rank {d} exceeds {MAX_CYCLIC_RANK}"
        )));
    }
    for k in 0..d {
        let v: Vec<LaurentSeries> = (0..d)
            .map(|i| {
                if i <= k {
                    LaurentSeries::monomial(Scalar::one(), i as i64)
                } else {
                    LaurentSeries::zero()
                }
            })
            .collect();
        let mut iterates = vec![v];
        for _ in 0..d {
            let next = nabla(a, iterates.last().unwrap());
            iterates.push(next);
        }
        // W has columns v_0..v_{d-1}
        let w: Matrix<LaurentSeries> = (0..d)
            .map(|i| (0..d).map(|s| iterates[s][i].clone()).collect())
            .collect();
        if determinant(&w).is_zero() {
            continue;
        }
        let Some(c) = solve(&w, &iterates[d]) else {
            continue;
        };
        // ∂^d v = Σ c_s ∂^s v, so P = ∂^d − Σ c_s ∂^s
        let coeffs = (1..=d).map(|i| -c[d - i].clone()).collect();
        return DiffOperator::new(Gauge::D, coeffs);
    }
    Err(CdvfError::NoCyclicVector)
}

/// Connection on the basis `v, ∂v, …, ∂^{d-1}v` of `D/DP`.
pub fn companion(p: &DiffOperator) -> Result<Matrix<LaurentSeries>, CdvfError> {
    if p.gauge() != Gauge::D {
        return Err(CdvfError::InvalidOperator("companion needs the d/dt gauge".into()));
    }
    let d = p.order();
    let mut a: Matrix<LaurentSeries> = vec![vec![LaurentSeries::zero(); d]; d];
    for k in 0..d - 1 {
        a[k + 1][k] = LaurentSeries::one();
    }
    // ∂^d v = −Σ_i c_i ∂^{d-i} v
    for i in 1..=d {
        a[d - i][d - 1] = -p.coeff(i);
    }
    Ok(a)
}

/// Interval for the leading irregularity from the growth of `∂^s` on the
/// lattice basis, `s ≤ s_max`: `max(0, −v(A_s)/s − 1)` over the upper half
/// of the range, widened by its spread (at least `2/s_max`).
pub fn radius_oracle(
    a: &Matrix<LaurentSeries>,
    s_max: usize,
) -> Result<(Rational, Rational), CdvfError> {
    let d = check_square(a)?;
    if s_max < 10 {
        return Err(CdvfError::InvalidOperator("s_max must be at least 10".into()));
    }
    // columns of A_s are ∂^s e_j
    let mut cols: Vec<Vec<LaurentSeries>> = (0..d)
        .map(|j| {
            (0..d)
                .map(|i| if i == j { LaurentSeries::one() } else { LaurentSeries::zero() })
                .collect()
        })
        .collect();
    let mut estimates = Vec::new();
    for s in 1..=s_max {
        cols = cols.iter().map(|c| nabla(a, c)).collect();
        if s < s_max / 2 {
            continue;
        }
        let mut v: Option<i64> = None;
        for c in &cols {
            for e in c {
                match e.valuation() {
                    Ok(Some(k)) => v = Some(v.map_or(k, |m: i64| m.min(k))),
                    Ok(None) => {}
                    Err(_) => {
                        return Err(CdvfError::Precision(format!(
                            "iterate {s} has an entry with no known term"
                        )))
                    }
                }
            }
        }
        let est = match v {
            Some(k) => {
                let x = Rational::new((-k).into(), (s as i64).into()) - Rational::one();
                if x.is_positive() {
                    x
                } else {
                    Rational::zero()
                }
            }
            None => Rational::zero(),
        };
        estimates.push(est);
    }
    let lo = estimates.iter().min().unwrap().clone();
    let hi = estimates.iter().max().unwrap().clone();
    let floor = Rational::new(2.into(), (s_max as i64).into());
    let widen = std::cmp::max(&hi - &lo, floor);
    let low = &lo - &widen;
    Ok((
        if low.is_negative() { Rational::zero() } else { low },
        hi + widen,
    ))
}
