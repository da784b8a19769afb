//! Order filtrations of cyclic log-D-modules with monomial data (n ≤ 2, all
//! coordinates logarithmic): associated graded module, cycle and Hilbert
//! growth.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use super::{canonical_direction, Component, CycleError, LogCycle};
use crate::algebra::{LaurentPolynomial, Rational, Scalar};

/// A cyclic module `D^log·e` with a monomial description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonomialLogModule {
    /// `D^log` itself.
    Free { names: Vec<String> },
    /// `e = x^shift·ê` inside `E(c·x^{-beta})`, optionally modulo
    /// `x^bottom·k[x]·ê` (only for `beta = 0`).
    Lattice {
        names: Vec<String>,
        c: Scalar,
        beta: Vec<i64>,
        shift: Vec<i64>,
        bottom: Option<Vec<i64>>,
    },
}

impl MonomialLogModule {
    /// `x^{-1}k[x]/k[x]` on the line.
    pub fn skyscraper() -> Self {
        MonomialLogModule::Lattice {
            names: vec!["x".into()],
            c: Scalar::one(),
            beta: vec![0],
            shift: vec![-1],
            bottom: Some(vec![0]),
        }
    }

    /// The lattice `x^shift·k[x]` of `E(x^{-b})`.
    pub fn exp_lattice(b: &[i64], shift: &[i64]) -> Self {
        MonomialLogModule::Lattice {
            names: default_names(b.len()),
            c: Scalar::one(),
            beta: b.to_vec(),
            shift: shift.to_vec(),
            bottom: None,
        }
    }

    pub fn free(n: usize) -> Self {
        MonomialLogModule::Free {
            names: default_names(n),
        }
    }

    pub fn names(&self) -> &[String] {
        match self {
            MonomialLogModule::Free { names } | MonomialLogModule::Lattice { names, .. } => names,
        }
    }

    pub fn nvars(&self) -> usize {
        self.names().len()
    }

    /// The same module with generator multiplied by `x^k`.
    pub fn twisted(&self, k: &[i64]) -> Self {
        match self {
            MonomialLogModule::Free { .. } => self.clone(),
            MonomialLogModule::Lattice {
                names,
                c,
                beta,
                shift,
                bottom,
            } => MonomialLogModule::Lattice {
                names: names.clone(),
                c: c.clone(),
                beta: beta.clone(),
                shift: shift.iter().zip(k).map(|(a, b)| a + b).collect(),
                bottom: bottom
                    .as_ref()
                    .map(|v| v.iter().zip(k).map(|(a, b)| a + b).collect()),
            },
        }
    }

    fn check(&self) -> Result<(), CycleError> {
        let n = self.nvars();
        if n == 0 || n > 2 {
            return Err(CycleError::Unsupported(format!("{n} variables (need 1 or 2)")));
        }
        if let MonomialLogModule::Lattice {
            c,
            beta,
            shift,
            bottom,
            ..
        } = self
        {
            if beta.len() != n || shift.len() != n {
                return Err(CycleError::Dimension {
                    expected: n,
                    found: beta.len().min(shift.len()),
                });
            }
            if beta.iter().any(|&b| b < 0) {
                return Err(CycleError::Unsupported("pole orders must be nonnegative".into()));
            }
            if c.is_zero() && beta.iter().any(|&b| b != 0) {
                return Err(CycleError::Unsupported("zero exponential coefficient".into()));
            }
            if let Some(bot) = bottom {
                if beta.iter().any(|&b| b != 0) {
                    return Err(CycleError::Unsupported(
                        "quotient lattices only for regular modules".into(),
                    ));
                }
                if bot.len() != n || bot.iter().zip(shift).any(|(b, s)| b < s) {
                    return Err(CycleError::Unsupported(
                        "filtration not admissible: bottom lattice must lie inside the generator lattice".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

fn default_names(n: usize) -> Vec<String> {
    ["x", "y", "z", "w"][..n.min(4)].iter().map(|s| s.to_string()).collect()
}

/// A monomial in `k[x_1..x_n, ξ_1..ξ_n]`: x-exponents then ξ-exponents.
type Mono = Vec<u32>;

fn divides(a: &Mono, b: &Mono) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn minimalize(mut v: Vec<Mono>) -> Vec<Mono> {
    v.sort();
    v.dedup();
    let keep: Vec<Mono> = v
        .iter()
        .filter(|m| !v.iter().any(|g| g != *m && divides(g, m)))
        .cloned()
        .collect();
    keep
}

/// Monomial submodule of `k[x^{±1}]` given by minimal generators.
#[derive(Clone, Debug)]
struct MonoModule {
    gens: Vec<Vec<i64>>,
}

impl MonoModule {
    fn contains(&self, e: &[i64]) -> bool {
        self.gens
            .iter()
            .any(|g| g.iter().zip(e).all(|(a, b)| a <= b))
    }

    fn with(&self, e: Vec<i64>) -> MonoModule {
        let mut gens = self.gens.clone();
        gens.push(e);
        gens.sort();
        gens.dedup();
        let min: Vec<Vec<i64>> = gens
            .iter()
            .filter(|m| {
                !gens
                    .iter()
                    .any(|g| g != *m && g.iter().zip(m.iter()).all(|(a, b)| a <= b))
            })
            .cloned()
            .collect();
        MonoModule { gens: min }
    }
}

/// `Δ_j` on `f·ê` where `Δ_j ê = −c·β_j·x^{−β}·ê`.
fn delta(f: &LaurentPolynomial, j: usize, c: &Scalar, beta: &[i64]) -> LaurentPolynomial {
    let neg: Vec<i64> = beta.iter().map(|b| -b).collect();
    f.euler(j) - f.shift(&neg).scale(&(c.clone() * Scalar::int(-beta[j])))
}

/// Presentation `gr M = k[x, ξ]/I` by minimal monomial generators of `I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPresentation {
    pub nvars: usize,
    pub generators: Vec<Vec<u32>>,
}

const XI_DEGREE_BOX: u32 = 3;

/// Annihilator of the symbol of the generator in the graded module of the
/// order filtration.
pub fn graded_presentation(m: &MonomialLogModule) -> Result<GradedPresentation, CycleError> {
    m.check()?;
    let n = m.nvars();
    let (c, beta, shift, bottom) = match m {
        MonomialLogModule::Free { .. } => {
            return Ok(GradedPresentation {
                nvars: n,
                generators: vec![],
            })
        }
        MonomialLogModule::Lattice {
            c,
            beta,
            shift,
            bottom,
            ..
        } => (c, beta, shift, bottom),
    };
    if beta.iter().filter(|&&b| b != 0).count() > 1 {
        return Err(CycleError::NonMonomial(
            "poles along two divisors give binomial symbol relations".into(),
        ));
    }
    // fil_k for k = 0..=XI_DEGREE_BOX
    let mut fil: Vec<MonoModule> = vec![MonoModule {
        gens: vec![shift.clone()],
    }];
    for k in 0..XI_DEGREE_BOX as usize {
        let mut next = fil[k].clone();
        for g in &fil[k].gens {
            let mono = LaurentPolynomial::monomial(Scalar::one(), g.clone());
            for j in 0..n {
                let d = delta(&mono, j, c, beta);
                let outside: Vec<Vec<i64>> = d
                    .support()
                    .filter(|e| !fil[k].contains(e))
                    .cloned()
                    .collect();
                match outside.len() {
                    0 => {}
                    1 => next = next.with(outside[0].clone()),
                    _ => {
                        return Err(CycleError::NonMonomial(format!(
                            "filtration step {} is not monomial",
                            k + 1
                        )))
                    }
                }
            }
        }
        fil.push(next);
    }
    let bottom = bottom.as_ref().map(|b| MonoModule { gens: vec![b.clone()] });
    let in_lower = |f: &LaurentPolynomial, level: Option<usize>| -> bool {
        f.support().all(|e| {
            level.is_some_and(|l| fil[l].contains(e))
                || bottom.as_ref().is_some_and(|b| b.contains(e))
        })
    };
    let abox: i64 = 1 + beta
        .iter()
        .copied()
        .chain(
            bottom
                .iter()
                .flat_map(|b| b.gens[0].iter().zip(shift).map(|(x, y)| x - y)),
        )
        .max()
        .unwrap_or(0);
    let mut found: Vec<Mono> = Vec::new();
    let base = LaurentPolynomial::monomial(Scalar::one(), shift.clone());
    for cvec in exps(n, XI_DEGREE_BOX) {
        let deg: u32 = cvec.iter().sum();
        let mut f = base.clone();
        for (j, &cj) in cvec.iter().enumerate() {
            for _ in 0..cj {
                f = delta(&f, j, c, beta);
            }
        }
        let level = (deg > 0).then(|| deg as usize - 1);
        for a in exps_box(n, abox as u32) {
            let shifted = f.shift(&a.iter().map(|&x| x as i64).collect::<Vec<_>>());
            if in_lower(&shifted, level) {
                let mut mono = a.clone();
                mono.extend(cvec.iter().copied());
                found.push(mono);
            }
        }
    }
    Ok(GradedPresentation {
        nvars: n,
        generators: minimalize(found),
    })
}

fn exps(n: usize, max_total: u32) -> Vec<Vec<u32>> {
    exps_box(n, max_total)
        .into_iter()
        .filter(|v| v.iter().sum::<u32>() <= max_total)
        .collect()
}

fn exps_box(n: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=max).map(move |k| {
                    let mut w = v.clone();
                    w.push(k);
                    w
                })
            })
            .collect();
    }
    out
}

impl GradedPresentation {
    fn in_ideal(&self, m: &Mono) -> bool {
        self.generators.iter().any(|g| divides(g, m))
    }

    /// Minimal primes `(variables in S)` of the monomial ideal, as sorted
    /// index sets into `x_1..x_n, ξ_1..ξ_n`.
    pub fn minimal_primes(&self) -> Vec<Vec<usize>> {
        let k = 2 * self.nvars;
        let covers: Vec<Vec<usize>> = (0u32..(1 << k))
            .map(|mask| (0..k).filter(|i| mask & (1 << i) != 0).collect::<Vec<_>>())
            .filter(|s| {
                self.generators
                    .iter()
                    .all(|g| s.iter().any(|&i| g[i] > 0))
            })
            .collect();
        let mut min: Vec<Vec<usize>> = covers
            .iter()
            .filter(|s| {
                !covers
                    .iter()
                    .any(|t| t.len() < s.len() && t.iter().all(|i| s.contains(i)))
            })
            .cloned()
            .collect();
        min.sort();
        min
    }

    /// Length of the localization at the prime `(S)`: standard monomials in
    /// the variables of `S` once the others are inverted.
    pub fn length_at(&self, s: &[usize]) -> usize {
        let restricted: Vec<Mono> = self
            .generators
            .iter()
            .map(|g| {
                (0..g.len())
                    .map(|i| if s.contains(&i) { g[i] } else { 0 })
                    .collect()
            })
            .collect();
        let bound = restricted.iter().flatten().copied().max().unwrap_or(0);
        let mut count = 0;
        let mut stack: Vec<Mono> = vec![vec![0; 2 * self.nvars]];
        let mut seen = BTreeSet::new();
        while let Some(m) = stack.pop() {
            if !seen.insert(m.clone()) || restricted.iter().any(|g| divides(g, &m)) {
                continue;
            }
            count += 1;
            for &i in s {
                if m[i] < bound {
                    let mut w = m.clone();
                    w[i] += 1;
                    stack.push(w);
                }
            }
        }
        count
    }

    /// Number of standard monomials of total degree ≤ `alpha`.
    pub fn hilbert_count(&self, alpha: u32) -> usize {
        exps(2 * self.nvars, alpha)
            .into_iter()
            .filter(|m| !self.in_ideal(m))
            .count()
    }
}

/// Cycle of `gr M` with components read off the minimal primes.
pub fn monomial_char_cycle(m: &MonomialLogModule) -> Result<LogCycle, CycleError> {
    let pres = graded_presentation(m)?;
    let n = m.nvars();
    let names = m.names().to_vec();
    let mut out = LogCycle::new(names.clone(), vec![true; n]);
    for s in pres.minimal_primes() {
        let mult = Rational::from_integer(pres.length_at(&s).into());
        let x_vanish: Vec<usize> = s.iter().copied().filter(|&i| i < n).collect();
        let xi_vanish: Vec<usize> = s.iter().filter(|&&i| i >= n).map(|i| i - n).collect();
        let dim = 2 * n - s.len();
        let comp = if x_vanish.is_empty() && xi_vanish.len() == n {
            Component::ZeroSection
        } else if x_vanish.len() == 1 && xi_vanish.len() == n - 1 && !xi_vanish.contains(&x_vanish[0]) {
            let j = x_vanish[0];
            let dir: Vec<LaurentPolynomial> = (0..n)
                .map(|l| {
                    let c = if l == j { Scalar::one() } else { Scalar::zero() };
                    LaurentPolynomial::constant(n, c)
                })
                .collect();
            let mut twist = vec![Rational::zero(); n];
            twist[j] = mult.clone();
            Component::DivisorLine {
                divisor: j,
                direction: canonical_direction(&dir)?,
                twist,
                cover_degree: 1,
            }
        } else if dim < n {
            let mut parts: Vec<String> = x_vanish.iter().map(|&i| format!("{}=0", names[i])).collect();
            parts.extend(xi_vanish.iter().map(|&i| format!("xi_{}=0", names[i])));
            Component::LowerDim {
                support: parts.join(","),
                dim,
            }
        } else {
            Component::CoordinateSubspace { x_vanish, xi_vanish }
        };
        out.add(comp, mult);
    }
    Ok(out)
}

/// Degree of the eventual polynomial `α ↦ #{standard monomials of degree ≤ α}`,
/// i.e. the dimension of the characteristic variety.
pub fn hilbert_dim(m: &MonomialLogModule) -> Result<usize, CycleError> {
    let pres = graded_presentation(m)?;
    let top = 4 * m.nvars() as u32 + 8;
    let mut vals: Vec<i64> = (0..=top).map(|a| pres.hilbert_count(a) as i64).collect();
    // the ideal is generated in low degree, so the tail is polynomial
    let tail = 2 * m.nvars() + 3;
    for deg in 0..=(2 * m.nvars()) {
        let t = &vals[vals.len() - tail.min(vals.len())..];
        if t.windows(2).all(|w| w[0] == w[1]) {
            return Ok(deg);
        }
        vals = vals.windows(2).map(|w| w[1] - w[0]).collect();
    }
    Err(CycleError::Unsupported("Hilbert function did not stabilize".into()))
}
