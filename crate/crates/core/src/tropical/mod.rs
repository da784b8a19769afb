//! Max-plus functions on the nonnegative octant and exact linearity tests.

pub mod fm;

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{LaurentPolynomial, Mode, Rational};
use fm::{feasible_point, Constraint};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TropicalError {
    #[error("tropical function of the zero series")]
    ZeroInput,
    #[error("profile entries have different modes or dimensions")]
    MixedModes,
    #[error("empty profile")]
    EmptyProfile,
    #[error("point has {found} coordinates, expected {expected}")]
    Dimension { expected: usize, found: usize },
}

/// `r ↦ max_b ⟨b, r⟩` over a finite set of forms containing `0`, on the
/// octant whose free coordinates are marked in `free`; pinned coordinates
/// are zero and stored forms have zero entries there.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TropicalFn {
    forms: BTreeSet<Vec<Rational>>,
    free: Vec<bool>,
    mode: Mode,
}

impl TropicalFn {
    pub fn new(
        forms: impl IntoIterator<Item = Vec<Rational>>,
        mode: Mode,
        free: Vec<bool>,
    ) -> Self {
        let n = free.len();
        let mut set = BTreeSet::new();
        set.insert(vec![Rational::zero(); n]);
        for f in forms {
            assert_eq!(f.len(), n, "form arity");
            set.insert(project(f, &free));
        }
        TropicalFn {
            forms: set,
            free,
            mode,
        }
    }

    /// The free-coordinate mask for a mode: all coordinates (full) or the
    /// logarithmic ones (sharp).
    pub fn mask(mode: Mode, log_vars: &[bool]) -> Vec<bool> {
        match mode {
            Mode::Full => vec![true; log_vars.len()],
            Mode::Sharp => log_vars.to_vec(),
        }
    }

    pub fn zero(mode: Mode, free: Vec<bool>) -> Self {
        Self::new([], mode, free)
    }

    pub fn forms(&self) -> impl Iterator<Item = &Vec<Rational>> {
        self.forms.iter()
    }

    pub fn free(&self) -> &[bool] {
        &self.free
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn dim(&self) -> usize {
        self.free.len()
    }

    pub fn evaluate(&self, r: &[Rational]) -> Result<Rational, TropicalError> {
        if r.len() != self.dim() {
            return Err(TropicalError::Dimension {
                expected: self.dim(),
                found: r.len(),
            });
        }
        let r = project(r.to_vec(), &self.free);
        Ok(self.forms.iter().map(|b| dot(b, &r)).max().unwrap())
    }

    /// Forms not coordinatewise dominated by another one on the free
    /// coordinates; the function is unchanged on the octant.
    pub fn pruned(&self) -> Self {
        TropicalFn {
            forms: prune(self.forms.iter().cloned().collect(), &self.free)
                .into_iter()
                .collect(),
            free: self.free.clone(),
            mode: self.mode,
        }
    }
}

fn project(mut f: Vec<Rational>, free: &[bool]) -> Vec<Rational> {
    for (x, &keep) in f.iter_mut().zip(free) {
        if !keep {
            *x = Rational::zero();
        }
    }
    f
}

pub(crate) fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

fn dominates(a: &[Rational], b: &[Rational], free: &[bool]) -> bool {
    a.iter()
        .zip(b)
        .zip(free)
        .all(|((x, y), &f)| !f || x >= y)
}

fn prune(forms: Vec<Vec<Rational>>, free: &[bool]) -> Vec<Vec<Rational>> {
    let mut forms = forms;
    forms.sort();
    forms.dedup();
    let mut keep: Vec<Vec<Rational>> = Vec::new();
    for (i, f) in forms.iter().enumerate() {
        let dominated = forms
            .iter()
            .enumerate()
            .any(|(j, g)| j != i && g != f && dominates(g, f, free));
        if !dominated {
            keep.push(f.clone());
        }
    }
    keep
}

/// `g₁(E(φ), r) = max(0, −v_r(φ))`, one form `−a` per monomial `x^a` of φ.
pub fn g_of_phi(
    phi: &LaurentPolynomial,
    mode: Mode,
    log_vars: &[bool],
) -> Result<TropicalFn, TropicalError> {
    if phi.is_zero() {
        return Err(TropicalError::ZeroInput);
    }
    if log_vars.len() != phi.nvars() {
        return Err(TropicalError::Dimension {
            expected: phi.nvars(),
            found: log_vars.len(),
        });
    }
    let forms = phi
        .support()
        .map(|a| a.iter().map(|&x| Rational::from_integer((-x).into())).collect());
    Ok(TropicalFn::new(forms, mode, TropicalFn::mask(mode, log_vars)))
}

/// Outcome of a linearity test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Linearity {
    /// The function equals this form on the whole octant.
    Linear(Vec<Rational>),
    /// Two forms are each the unique maximum at the given points.
    Kink {
        first: (Vec<Rational>, Vec<Rational>),
        second: (Vec<Rational>, Vec<Rational>),
    },
}

impl Linearity {
    pub fn is_linear(&self) -> bool {
        matches!(self, Linearity::Linear(_))
    }
}

/// Point of the unit box `0 ≤ r ≤ 1` (free coordinates, open interior in
/// the free directions) where `form` strictly beats every form of `others`.
fn strict_region_point(
    form: &[Rational],
    others: &[&Vec<Rational>],
    free: &[bool],
) -> Option<Vec<Rational>> {
    let idx: Vec<usize> = (0..free.len()).filter(|&j| free[j]).collect();
    let k = idx.len();
    let mut cons = Vec::new();
    for i in 0..k {
        let mut e = vec![Rational::zero(); k];
        e[i] = Rational::one();
        cons.push(Constraint::new(e.clone(), Rational::zero(), false));
        let neg: Vec<Rational> = e.iter().map(|x| -x.clone()).collect();
        cons.push(Constraint::new(neg, Rational::one(), false));
    }
    for o in others {
        let diff: Vec<Rational> = idx.iter().map(|&j| &form[j] - &o[j]).collect();
        cons.push(Constraint::new(diff, Rational::zero(), true));
    }
    let p = feasible_point(&cons, k)?;
    let mut full = vec![Rational::zero(); free.len()];
    for (i, &j) in idx.iter().enumerate() {
        full[j] = p[i].clone();
    }
    Some(full)
}

/// Exact linearity of `f` on its octant.
pub fn is_linear_on_octant(f: &TropicalFn) -> Linearity {
    let pruned = f.pruned();
    let forms: Vec<&Vec<Rational>> = pruned.forms.iter().collect();
    if forms.len() == 1 {
        return Linearity::Linear(forms[0].clone());
    }
    // at least two undominated forms: each has a nonempty strict region
    let mut found: Vec<(Vec<Rational>, Vec<Rational>)> = Vec::new();
    for (i, b) in forms.iter().enumerate() {
        let others: Vec<&Vec<Rational>> =
            forms.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| *g).collect();
        if let Some(p) = strict_region_point(b, &others, &f.free) {
            found.push(((*b).clone(), p));
            if found.len() == 2 {
                let second = found.pop().unwrap();
                let first = found.pop().unwrap();
                return Linearity::Kink { first, second };
            }
        }
    }
    unreachable!("undominated forms without strict regions")
}

/// Multiset of radius functions with multiplicities (rank = total).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadiusProfile {
    entries: Vec<(TropicalFn, usize)>,
}

impl RadiusProfile {
    pub fn new(entries: Vec<(TropicalFn, usize)>) -> Result<Self, TropicalError> {
        let entries: Vec<_> = entries.into_iter().filter(|(_, m)| *m > 0).collect();
        let first = entries.first().ok_or(TropicalError::EmptyProfile)?;
        let (mode, free) = (first.0.mode, first.0.free.clone());
        if entries.iter().any(|(f, _)| f.mode != mode || f.free != free) {
            return Err(TropicalError::MixedModes);
        }
        Ok(RadiusProfile { entries })
    }

    pub fn entries(&self) -> &[(TropicalFn, usize)] {
        &self.entries
    }

    pub fn rank(&self) -> usize {
        self.entries.iter().map(|(_, m)| m).sum()
    }

    fn free(&self) -> &[bool] {
        &self.entries[0].0.free
    }

    fn rows(&self) -> Vec<&TropicalFn> {
        self.entries
            .iter()
            .flat_map(|(f, m)| std::iter::repeat_n(f, *m))
            .collect()
    }

    /// `G_i` (sum of the `i` largest functions) for `i = 0..=d`.
    pub fn partial_sums(&self) -> Vec<TropicalFn> {
        let free = self.free().to_vec();
        let mode = self.entries[0].0.mode;
        let n = free.len();
        let rows = self.rows();
        let d = rows.len();
        let zero = vec![Rational::zero(); n];
        // h[j] = forms of the max over j-subsets of the rows seen so far
        let mut h: Vec<Option<Vec<Vec<Rational>>>> = vec![None; d + 1];
        h[0] = Some(vec![zero]);
        for row in rows {
            for j in (1..=d).rev() {
                let Some(prev) = &h[j - 1] else { continue };
                let mut add: Vec<Vec<Rational>> = Vec::new();
                for a in prev {
                    for b in &row.forms {
                        add.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
                    }
                }
                let merged = match h[j].take() {
                    Some(mut cur) => {
                        cur.extend(add);
                        cur
                    }
                    None => add,
                };
                h[j] = Some(prune(merged, &free));
            }
        }
        h.into_iter()
            .map(|fs| {
                let forms = fs.expect("every size reached");
                TropicalFn {
                    forms: forms.into_iter().collect(),
                    free: free.clone(),
                    mode,
                }
            })
            .collect()
    }

    /// `g_i(e_j)` for every coordinate: the candidate linear form of `g_i`.
    fn sorted_value(&self, i: usize, r: &[Rational]) -> Rational {
        let mut vals: Vec<Rational> = self
            .rows()
            .iter()
            .map(|f| f.evaluate(r).unwrap())
            .collect();
        vals.sort_by(|a, b| b.cmp(a));
        vals[i].clone()
    }

    /// Value of the `i`-th largest function at `r` (0-based).
    pub fn sorted_at(&self, i: usize, r: &[Rational]) -> Rational {
        self.sorted_value(i, r)
    }
}

/// `A ≤ B` on the octant: no form of A beats all forms of B somewhere.
fn le_on_octant(a: &TropicalFn, b: &TropicalFn) -> Option<Vec<Rational>> {
    let bforms: Vec<&Vec<Rational>> = b.forms.iter().collect();
    a.forms
        .iter()
        .find_map(|f| strict_region_point(f, &bforms, &a.free))
}

/// Verdict on the sorted functions `g_1 ≥ … ≥ g_d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileVerdict {
    pub linear: bool,
    /// Per index `i`, the linear form of `g_i` or `None`.
    pub per_index: Vec<Option<Vec<Rational>>>,
    /// A point where the first non-linear `g_i` disagrees with its
    /// coordinate interpolation.
    pub witness: Option<(usize, Vec<Rational>)>,
}

/// Exact linearity of every sorted subsidiary function of the profile.
pub fn sorted_profile_linear(p: &RadiusProfile) -> ProfileVerdict {
    let free = p.free().to_vec();
    let n = free.len();
    let d = p.rank();
    let g = p.partial_sums();
    let mut per_index = Vec::with_capacity(d);
    let mut witness = None;
    for i in 0..d {
        // candidate l_j = g_i(e_j); g_i linear iff G_{i+1} = l + G_i
        let l: Vec<Rational> = (0..n)
            .map(|j| {
                if !free[j] {
                    return Rational::zero();
                }
                let mut e = vec![Rational::zero(); n];
                e[j] = Rational::one();
                p.sorted_value(i, &e)
            })
            .collect();
        let shifted = TropicalFn {
            forms: g[i]
                .forms
                .iter()
                .map(|f| f.iter().zip(&l).map(|(x, y)| x + y).collect())
                .collect(),
            free: free.clone(),
            mode: g[i].mode,
        };
        let bad = le_on_octant(&g[i + 1], &shifted).or_else(|| le_on_octant(&shifted, &g[i + 1]));
        match bad {
            None => per_index.push(Some(l)),
            Some(pt) => {
                if witness.is_none() {
                    witness = Some((i, pt));
                }
                per_index.push(None);
            }
        }
    }
    ProfileVerdict {
        linear: per_index.iter().all(|x| x.is_some()),
        per_index,
        witness,
    }
}

/// Fast sufficient test: every function linear and their forms pairwise
/// comparable on the free coordinates.
pub fn comparable_linear(p: &RadiusProfile) -> bool {
    let free = p.free();
    let forms: Option<Vec<Vec<Rational>>> = p
        .entries
        .iter()
        .map(|(f, _)| match is_linear_on_octant(f) {
            Linearity::Linear(b) => Some(b),
            _ => None,
        })
        .collect();
    let Some(forms) = forms else { return false };
    forms.iter().all(|a| {
        forms
            .iter()
            .all(|b| dominates(a, b, free) || dominates(b, a, free))
    })
}

/// Linearity of the profile of `End(M) = ⊕ E(φ_α − φ_β)` for a model
/// `M = ⊕ E(φ_α)^{d_α}`.
pub fn end_profile_linear(
    summands: &[(LaurentPolynomial, usize)],
    mode: Mode,
    log_vars: &[bool],
) -> Result<ProfileVerdict, TropicalError> {
    let free = TropicalFn::mask(mode, log_vars);
    let mut entries = Vec::new();
    for (a, da) in summands {
        for (b, db) in summands {
            let diff = a.clone() - b.clone();
            let f = if diff.is_zero() {
                TropicalFn::zero(mode, free.clone())
            } else {
                g_of_phi(&diff, mode, log_vars)?
            };
            entries.push((f, da * db));
        }
    }
    Ok(sorted_profile_linear(&RadiusProfile::new(entries)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::qi;

    fn lp(n: usize, t: &[(i64, &[i64])]) -> LaurentPolynomial {
        LaurentPolynomial::from_int_terms(n, t)
    }

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| qi(x)).collect()
    }

    #[test]
    fn x_over_y_squared_full_is_kinked() {
        let f = g_of_phi(&lp(2, &[(1, &[1, -2])]), Mode::Full, &[false, true]).unwrap();
        assert_eq!(f.evaluate(&v(&[0, 1])).unwrap(), qi(2));
        assert_eq!(f.evaluate(&v(&[1, 0])).unwrap(), qi(0));
        match is_linear_on_octant(&f) {
            Linearity::Kink { first, second } => {
                assert_ne!(first.0, second.0);
                // each witness form is the unique maximum at its point
                for (form, pt) in [first, second] {
                    let val = dot(&form, &pt);
                    assert_eq!(f.evaluate(&pt).unwrap(), val);
                    assert_eq!(f.forms().filter(|g| dot(g, &pt) == val).count(), 1);
                }
            }
            other => panic!("expected kink, got {other:?}"),
        }
    }

    #[test]
    fn x_over_y_squared_sharp_is_linear() {
        let f = g_of_phi(&lp(2, &[(1, &[1, -2])]), Mode::Sharp, &[false, true]).unwrap();
        assert_eq!(is_linear_on_octant(&f), Linearity::Linear(v(&[0, 2])));
    }

    #[test]
    fn simple_examples() {
        let f = g_of_phi(&lp(2, &[(1, &[-2, -3])]), Mode::Full, &[true, true]).unwrap();
        assert_eq!(is_linear_on_octant(&f), Linearity::Linear(v(&[2, 3])));
        let f = g_of_phi(&lp(1, &[(1, &[0]), (1, &[1])]), Mode::Full, &[true]).unwrap();
        assert_eq!(is_linear_on_octant(&f), Linearity::Linear(v(&[0])));
        let f = TropicalFn::new([v(&[1, 0]), v(&[0, 1])], Mode::Full, vec![true, true]);
        assert!(!is_linear_on_octant(&f).is_linear());
    }

    #[test]
    fn profiles() {
        let free = vec![true, true];
        let ex = g_of_phi(&lp(2, &[(1, &[-1, 0])]), Mode::Full, &free).unwrap();
        let ey = g_of_phi(&lp(2, &[(1, &[0, -1])]), Mode::Full, &free).unwrap();
        let p = RadiusProfile::new(vec![(ex.clone(), 1), (ey, 1)]).unwrap();
        let verdict = sorted_profile_linear(&p);
        assert!(!verdict.linear);
        assert!(!comparable_linear(&p));
        assert_eq!(verdict.per_index[0], None);

        let ex2 = g_of_phi(&lp(2, &[(1, &[-2, 0])]), Mode::Full, &free).unwrap();
        let p = RadiusProfile::new(vec![(ex2, 1), (ex, 1)]).unwrap();
        let verdict = sorted_profile_linear(&p);
        assert!(verdict.linear);
        assert!(comparable_linear(&p));
        assert_eq!(verdict.per_index, vec![Some(v(&[2, 0])), Some(v(&[1, 0]))]);
    }

    #[test]
    fn repeated_kinked_function() {
        // g1 = g2 = max(r1, r2)
        let f = TropicalFn::new([v(&[1, 0]), v(&[0, 1])], Mode::Full, vec![true, true]);
        let p = RadiusProfile::new(vec![(f, 2)]).unwrap();
        let verdict = sorted_profile_linear(&p);
        assert_eq!(verdict.per_index, vec![None, None]);
    }

    #[test]
    fn end_profile_of_two_poles() {
        let log = [true, true];
        let a = lp(2, &[(1, &[-1, 0])]);
        let b = lp(2, &[(1, &[-1, 0]), (1, &[0, -1])]);
        // differences ±y^{-1} and 0: all linear
        assert!(end_profile_linear(&[(a.clone(), 1), (b, 1)], Mode::Full, &log).unwrap().linear);
        let c = lp(2, &[(1, &[0, -1])]);
        // difference x^{-1} - y^{-1}: max(r1, r2)
        assert!(!end_profile_linear(&[(a, 1), (c, 1)], Mode::Full, &log).unwrap().linear);
    }
}
