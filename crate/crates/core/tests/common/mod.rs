#![allow(dead_code)]

use logchar::algebra::{qi, Scalar};
use logchar::cdvf::{DiffOperator, Gauge};
use logchar::euler::{SurfaceComponent, SurfaceGeometry};
use logchar::goodmodel::{Chart, GoodModel, ModelSummand};
use logchar::{LaurentPolynomial, Rational};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn names(n: usize) -> Vec<String> {
    ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect()
}

pub fn lp(n: usize, t: &[(i64, &[i64])]) -> LaurentPolynomial {
    LaurentPolynomial::from_int_terms(n, t)
}

/// `E(u·x^{-b})^{⊕d}` with `u` a polynomial unit.
#[derive(Clone, Debug)]
pub struct MonoCase {
    pub log_vars: Vec<bool>,
    pub b: Vec<i64>,
    pub u: LaurentPolynomial,
    pub d: usize,
}

impl MonoCase {
    pub fn n(&self) -> usize {
        self.log_vars.len()
    }

    pub fn names(&self) -> Vec<String> {
        names(self.n())
    }

    pub fn phi(&self) -> LaurentPolynomial {
        let neg: Vec<i64> = self.b.iter().map(|b| -b).collect();
        self.u.shift(&neg)
    }

    pub fn model(&self) -> GoodModel {
        let chart = Chart::new(self.names(), self.log_vars.clone()).unwrap();
        GoodModel::new(chart, vec![ModelSummand::new(self.phi(), self.d)], vec![1; self.n()]).unwrap()
    }

    /// `x^b·D_l(u x^{-b})`: `x_l∂_l u − b_l u` on log variables, `∂_l u`
    /// otherwise.
    pub fn theta(&self) -> Vec<LaurentPolynomial> {
        (0..self.n())
            .map(|l| {
                if self.log_vars[l] {
                    self.u.euler(l) - self.u.scale(&Scalar::int(self.b[l]))
                } else {
                    self.u.partial(l)
                }
            })
            .collect()
    }

    pub fn b_rational(&self) -> Vec<Rational> {
        self.b.iter().map(|&b| qi(b)).collect()
    }

    pub fn kummer_h(&self, h: i64) -> Vec<i64> {
        self.log_vars.iter().map(|&l| if l { h } else { 1 }).collect()
    }
}

fn random_unit(r: &mut ChaCha8Rng, n: usize) -> LaurentPolynomial {
    let consts = [-2, -1, 1, 2, 3];
    let mut u = LaurentPolynomial::constant(n, Scalar::int(consts[r.gen_range(0..consts.len())]));
    for _ in 0..r.gen_range(0..=2) {
        let e: Vec<i64> = (0..n).map(|_| r.gen_range(0..=2)).collect();
        if e.iter().all(|&k| k == 0) {
            continue;
        }
        let mut c = r.gen_range(-3..=3);
        if c == 0 {
            c = 1;
        }
        u.add_term(Scalar::int(c), e);
    }
    u
}

/// Fixed cases (including `b = 0` and mixed zero entries) followed by
/// seeded random ones, `count` in total.
pub fn monomial_suite(count: usize, seed: u64) -> Vec<MonoCase> {
    let fixed: Vec<(Vec<bool>, Vec<i64>, LaurentPolynomial, usize)> = vec![
        (vec![true], vec![0], lp(1, &[(1, &[0])]), 1),
        (vec![true], vec![3], lp(1, &[(1, &[0])]), 1),
        (vec![true], vec![2], lp(1, &[(2, &[0]), (1, &[1])]), 2),
        (vec![true, true], vec![0, 0], lp(2, &[(1, &[0, 0]), (1, &[1, 1])]), 1),
        (vec![true, true], vec![2, 0], lp(2, &[(1, &[0, 0])]), 1),
        (vec![true, true], vec![0, 3], lp(2, &[(1, &[0, 0]), (-1, &[1, 0])]), 2),
        (vec![true, true], vec![2, 3], lp(2, &[(1, &[0, 0])]), 1),
        (vec![true, true], vec![1, 1], lp(2, &[(3, &[0, 0]), (1, &[0, 2])]), 3),
        (vec![true, false], vec![2, 0], lp(2, &[(1, &[0, 0]), (1, &[0, 1])]), 1),
        (vec![false, true], vec![0, 1], lp(2, &[(-1, &[0, 0]), (2, &[2, 0])]), 1),
        (vec![true, true, false], vec![1, 0, 0], lp(3, &[(1, &[0, 0, 0]), (1, &[0, 1, 1])]), 1),
        (vec![true, true, true], vec![1, 2, 0], lp(3, &[(2, &[0, 0, 0])]), 2),
    ];
    let mut out: Vec<MonoCase> = fixed
        .into_iter()
        .map(|(log_vars, b, u, d)| MonoCase { log_vars, b, u, d })
        .collect();
    let mut r = rng(seed);
    while out.len() < count {
        let n = r.gen_range(1..=3);
        let mut log_vars: Vec<bool> = (0..n).map(|_| r.gen_bool(0.7)).collect();
        if !log_vars.iter().any(|&l| l) {
            log_vars[0] = true;
        }
        let b = log_vars
            .iter()
            .map(|&l| if l { r.gen_range(0..=3) } else { 0 })
            .collect();
        let u = random_unit(&mut r, n);
        out.push(MonoCase {
            log_vars,
            b,
            u,
            d: r.gen_range(1..=3),
        });
    }
    out.truncate(count);
    out
}

/// Models with several summands on two log variables; some are good,
/// some are not.
pub fn multi_suite(count: usize, seed: u64) -> Vec<GoodModel> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let k = r.gen_range(2..=3);
        let mut summands = Vec::new();
        for _ in 0..k {
            let b: Vec<i64> = (0..2).map(|_| r.gen_range(0..=2)).collect();
            let u = random_unit(&mut r, 2);
            summands.push(ModelSummand::new(u.shift(&[-b[0], -b[1]]), r.gen_range(1..=2)));
        }
        let chart = Chart::new(names(2), vec![true, true]).unwrap();
        out.push(GoodModel::new(chart, summands, vec![1, 1]).unwrap());
    }
    out
}

pub fn random_surface(r: &mut ChaCha8Rng) -> (Vec<Vec<Rational>>, SurfaceGeometry) {
    let k = r.gen_range(1..=3);
    let mut inter = vec![vec![0i64; k]; k];
    for i in 0..k {
        for j in i..k {
            let v = r.gen_range(-3..=3);
            inter[i][j] = v;
            inter[j][i] = v;
        }
    }
    let g = SurfaceGeometry {
        chi_u: r.gen_range(-6..=6),
        components: (0..k)
            .map(|j| SurfaceComponent {
                name: format!("D{}", j + 1),
                chi_open: r.gen_range(-4..=4),
            })
            .collect(),
        intersections: inter,
    };
    let d = r.gen_range(1..=3);
    let rows = (0..d)
        .map(|_| (0..k).map(|_| qi(r.gen_range(0..=5))).collect())
        .collect();
    (rows, g)
}

/// Monic operator of order `1..=max_order` with Laurent polynomial
/// coefficients, poles of order at most `max_pole`.
pub fn random_operator(r: &mut ChaCha8Rng, gauge: Gauge, max_order: usize, max_pole: i64) -> DiffOperator {
    let order = r.gen_range(1..=max_order);
    let coeffs: Vec<Vec<(i64, i64)>> = (0..order)
        .map(|_| {
            let mut c: Vec<(i64, i64)> = Vec::new();
            for _ in 0..r.gen_range(0..=2) {
                let e = r.gen_range(-max_pole..=2);
                if c.iter().any(|&(f, _)| f == e) {
                    continue;
                }
                let mut v = r.gen_range(-4..=4);
                if v == 0 {
                    v = 1;
                }
                c.push((e, v));
            }
            c
        })
        .collect();
    let refs: Vec<&[(i64, i64)]> = coeffs.iter().map(|c| c.as_slice()).collect();
    DiffOperator::from_ints(gauge, &refs)
}
