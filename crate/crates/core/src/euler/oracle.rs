//! `χ` of `f ↦ f' + φ'f` on `k[x, 1/x]` by exact linear algebra.

use crate::algebra::linalg::{rank, Matrix};
use crate::algebra::{LaurentPolynomial, Scalar, Zero};

use super::EulerError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub chi: i64,
    pub kernel: usize,
    pub cokernel: usize,
    pub window: usize,
}

/// Kernel and cokernel of `T f = f' + φ'f` computed from the degree window
/// `[−B, B]`.  With `p`, `q` the pole orders of `φ` at `0` and `∞`, every
/// `f` with `T f` supported in `[1 − B, B − 1]` is supported in
/// `[2 + p − B, B − q]`, so `im T ∩ W` is seen inside the window for
/// `W = [1 − B, B − 1]`; monomials outside `W` reduce into `W` modulo
/// `im T` by the leading terms, so `coker T ≅ W / (im T ∩ W)`.
pub fn derham_oracle_curve(phi: &LaurentPolynomial, window: usize) -> Result<OracleResult, EulerError> {
    if phi.nvars() != 1 {
        return Err(EulerError::OracleInput);
    }
    let p = (-phi.min_exponent(0).unwrap_or(0)).max(0) as usize;
    let q = phi.max_exponent(0).unwrap_or(0).max(0) as usize;
    let min = 2 * p.max(q) + 5;
    if window < min {
        return Err(EulerError::WindowTooSmall { window, min });
    }
    let first = at_window(phi, window, p, q);
    let second = at_window(phi, window + 3, p, q);
    if first.chi != second.chi || first.kernel != second.kernel {
        return Err(EulerError::WindowInstability {
            b: window,
            first: first.chi,
            second: second.chi,
        });
    }
    Ok(first)
}

fn at_window(phi: &LaurentPolynomial, b: usize, p: usize, q: usize) -> OracleResult {
    let b = b as i64;
    let dphi = phi.partial(0);
    let lo = -b - 1 - p as i64;
    let hi = b - 1 + q as i64;
    let rows = (hi - lo + 1) as usize;
    // column k: T(x^k) = k x^{k−1} + φ'·x^k
    let mut t: Matrix<Scalar> = vec![vec![Scalar::zero(); (2 * b + 1) as usize]; rows];
    for (col, k) in (-b..=b).enumerate() {
        let idx = |e: i64| (e - lo) as usize;
        if k != 0 {
            t[idx(k - 1)][col] = t[idx(k - 1)][col].clone() + Scalar::int(k);
        }
        for (e, c) in dphi.terms() {
            let r = idx(e[0] + k);
            t[r][col] = t[r][col].clone() + c.clone();
        }
    }
    let full = rank(&t);
    let outside: Matrix<Scalar> = (lo..=hi)
        .zip(t.iter())
        .filter(|(e, _)| *e < 1 - b || *e > b - 1)
        .map(|(_, row)| row.clone())
        .collect();
    let in_w = full - rank(&outside);
    let kernel = (2 * b + 1) as usize - full;
    let cokernel = (2 * b - 1) as usize - in_w;
    OracleResult {
        chi: kernel as i64 - cokernel as i64,
        kernel,
        cokernel,
        window: b as usize,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(t: &[(i64, i64)]) -> LaurentPolynomial {
        let v: Vec<(i64, Vec<i64>)> = t.iter().map(|&(c, e)| (c, vec![e])).collect();
        let r: Vec<(i64, &[i64])> = v.iter().map(|(c, e)| (*c, e.as_slice())).collect();
        LaurentPolynomial::from_int_terms(1, &r)
    }

    #[test]
    fn pole_of_order_three() {
        let r = derham_oracle_curve(&lp(&[(1, -3)]), 11).unwrap();
        assert_eq!((r.chi, r.kernel, r.cokernel), (-3, 0, 3));
    }

    #[test]
    fn trivial_connection() {
        let r = derham_oracle_curve(&LaurentPolynomial::zero(1), 5).unwrap();
        assert_eq!((r.chi, r.kernel, r.cokernel), (0, 1, 1));
    }

    #[test]
    fn irregular_at_infinity() {
        let r = derham_oracle_curve(&lp(&[(1, 1)]), 7).unwrap();
        assert_eq!(r.chi, -1);
    }

    #[test]
    fn binomial_both_ends() {
        let r = derham_oracle_curve(&lp(&[(2, -2), (-1, 3)]), 11).unwrap();
        assert_eq!(r.chi, -5);
    }

    #[test]
    fn window_precondition() {
        assert!(matches!(
            derham_oracle_curve(&lp(&[(1, -3)]), 10),
            Err(EulerError::WindowTooSmall { min: 11, .. })
        ));
    }
}
