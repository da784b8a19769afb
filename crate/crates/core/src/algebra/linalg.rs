//! Dense Gaussian elimination over an exact field.

use super::scalar::Field;
#[allow(unused_imports)]
use num_traits::{One, Zero};

/// Row-major matrix.
pub type Matrix<F> = Vec<Vec<F>>;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<F: Field>(m: &mut Matrix<F>) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let v = m[r][j].clone();
                    if !v.is_zero() {
                        m[i][j] = m[i][j].clone() - f.clone() * v;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(m: &Matrix<F>) -> usize {
    let mut a = m.clone();
    rref(&mut a).len()
}

/// Some solution of `a·x = b`, or `None` when inconsistent.
pub fn solve<F: Field>(a: &Matrix<F>, b: &[F]) -> Option<Vec<F>> {
    let cols = a.first().map_or(0, |r| r.len());
    let mut aug: Matrix<F> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![F::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = aug[i][cols].clone();
    }
    Some(x)
}

pub fn determinant<F: Field>(m: &Matrix<F>) -> F {
    let n = m.len();
    let mut a = m.clone();
    let mut det = F::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return F::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det = det * a[c][c].clone();
        let inv = a[c][c].inv().unwrap();
        for i in c + 1..n {
            if !a[i][c].is_zero() {
                let f = a[i][c].clone() * inv.clone();
                for j in c..n {
                    a[i][j] = a[i][j].clone() - f.clone() * a[c][j].clone();
                }
            }
        }
    }
    det
}
