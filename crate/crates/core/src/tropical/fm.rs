//! Exact Fourier–Motzkin feasibility for small systems of strict and
//! non-strict linear inequalities over ℚ.

use num_traits::{Signed, Zero};

use crate::algebra::Rational;

/// `coeffs·r + constant > 0` (strict) or `≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub constant: Rational,
    pub strict: bool,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rational>, constant: Rational, strict: bool) -> Self {
        Constraint {
            coeffs,
            constant,
            strict,
        }
    }

    fn holds_at(&self, r: &[Rational]) -> bool {
        let v = self
            .coeffs
            .iter()
            .zip(r)
            .fold(self.constant.clone(), |acc, (a, x)| acc + a * x);
        if self.strict {
            v.is_positive()
        } else {
            !v.is_negative()
        }
    }

    // scale so the first nonzero coefficient has absolute value 1
    fn normalized(mut self) -> Self {
        let s = self
            .coeffs
            .iter()
            .find(|c| !c.is_zero())
            .map(|c| c.abs())
            .or_else(|| (!self.constant.is_zero()).then(|| self.constant.abs()));
        if let Some(s) = s {
            for c in self.coeffs.iter_mut() {
                *c = &*c / &s;
            }
            self.constant = &self.constant / &s;
        }
        self
    }
}

/// A point satisfying every constraint, or `None` if the system is empty.
pub fn feasible_point(constraints: &[Constraint], nvars: usize) -> Option<Vec<Rational>> {
    // levels[k] holds the system in variables 0..k
    let mut levels: Vec<Vec<Constraint>> = vec![Vec::new(); nvars + 1];
    levels[nvars] = dedup(constraints.iter().cloned().map(Constraint::normalized).collect());
    for k in (0..nvars).rev() {
        let sys = &levels[k + 1];
        let mut next = Vec::new();
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        for c in sys {
            match c.coeffs[k].partial_cmp(&Rational::zero()).unwrap() {
                std::cmp::Ordering::Greater => pos.push(c),
                std::cmp::Ordering::Less => neg.push(c),
                std::cmp::Ordering::Equal => next.push(c.clone()),
            }
        }
        for p in &pos {
            for n in &neg {
                let ap = p.coeffs[k].clone();
                let an = -n.coeffs[k].clone();
                let coeffs: Vec<Rational> = p
                    .coeffs
                    .iter()
                    .zip(&n.coeffs)
                    .map(|(x, y)| x * &an + y * &ap)
                    .collect();
                let constant = &p.constant * &an + &n.constant * &ap;
                next.push(Constraint::new(coeffs, constant, p.strict || n.strict).normalized());
            }
        }
        levels[k] = dedup(next);
    }
    if !levels[0].iter().all(|c| c.holds_at(&[])) {
        return None;
    }
    let mut point: Vec<Rational> = vec![Rational::zero(); nvars];
    for k in 0..nvars {
        let mut lower: Option<(Rational, bool)> = None;
        let mut upper: Option<(Rational, bool)> = None;
        for c in &levels[k + 1] {
            let a = &c.coeffs[k];
            if a.is_zero() {
                continue;
            }
            let rest = (0..k).fold(c.constant.clone(), |acc, j| acc + &c.coeffs[j] * &point[j]);
            let bound = -rest / a;
            if a.is_positive() {
                let tighter = match &lower {
                    None => true,
                    Some((b, s)) => bound > *b || (bound == *b && c.strict && !s),
                };
                if tighter {
                    lower = Some((bound, c.strict));
                }
            } else {
                let tighter = match &upper {
                    None => true,
                    Some((b, s)) => bound < *b || (bound == *b && c.strict && !s),
                };
                if tighter {
                    upper = Some((bound, c.strict));
                }
            }
        }
        point[k] = match (lower, upper) {
            (None, None) => Rational::zero(),
            (Some((l, _)), None) => l + Rational::from_integer(1.into()),
            (None, Some((u, _))) => u - Rational::from_integer(1.into()),
            (Some((l, ls)), Some((u, us))) => {
                if l == u {
                    debug_assert!(!ls && !us);
                    l
                } else {
                    (l + u) / Rational::from_integer(2.into())
                }
            }
        };
    }
    debug_assert!(constraints.iter().all(|c| c.holds_at(&point)));
    Some(point)
}

fn dedup(mut v: Vec<Constraint>) -> Vec<Constraint> {
    v.sort();
    v.dedup();
    // drop trivially true constant constraints
    v.retain(|c| !(c.coeffs.iter().all(|x| x.is_zero()) && c.holds_at(&[])));
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, qi};

    fn c(coeffs: &[i64], k: i64, strict: bool) -> Constraint {
        Constraint::new(coeffs.iter().map(|&x| qi(x)).collect(), qi(k), strict)
    }

    #[test]
    fn open_triangle() {
        // x > 0, y > 0, x + y < 1
        let sys = [c(&[1, 0], 0, true), c(&[0, 1], 0, true), c(&[-1, -1], 1, true)];
        let p = feasible_point(&sys, 2).unwrap();
        assert!(sys.iter().all(|k| k.holds_at(&p)));
    }

    #[test]
    fn strict_empty_but_closed_nonempty() {
        // x > 0 and x < 0 vs x >= 0 and x <= 0
        assert!(feasible_point(&[c(&[1], 0, true), c(&[-1], 0, true)], 1).is_none());
        let p = feasible_point(&[c(&[1], 0, false), c(&[-1], 0, false)], 1).unwrap();
        assert_eq!(p, vec![qi(0)]);
    }

    #[test]
    fn unbounded_direction() {
        // 2x - y > 3/2
        let sys = [Constraint::new(vec![qi(2), qi(-1)], q(-3, 2), true)];
        let p = feasible_point(&sys, 2).unwrap();
        assert!(sys[0].holds_at(&p));
    }
}
