//! Exact feasibility of mixed equality / strict-inequality systems over `Q`.
//!
//! A system `a_i·x = b_i`, `c_j·x > d_j` is decided by the linear program
//!
//! ```text
//! maximize t  subject to  a_i·x = b_i,  c_j·x - t >= d_j,  0 <= t <= 1
//! ```
//!
//! with `x` free. The strict system is feasible iff the optimum is positive, and the optimal
//! `x` is then a witness. The LP is solved by a dense two-phase simplex on exact rationals
//! with Bland's rule, so it terminates and has no rounding.

use num_traits::{One, Signed, Zero};

use crate::linalg::Scalar;

/// One affine constraint `normal · x (= or >) rhs`.
#[derive(Clone, Debug)]
pub struct Constraint {
    pub normal: Vec<Scalar>,
    pub rhs: Scalar,
}

struct Tableau {
    /// `rows x (vars + 1)`; the last column is the right-hand side.
    t: Vec<Vec<Scalar>>,
    basis: Vec<usize>,
    vars: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Scalar {
        &self.t[i][self.vars]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.t[row][col].recip();
        for x in self.t[row].iter_mut() {
            *x = &*x * &inv;
        }
        let prow = self.t[row].clone();
        for (i, r) in self.t.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let f = r[col].clone();
            for (x, p) in r.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        self.basis[row] = col;
    }

    /// Maximizes `obj · x` over columns `< allowed`; returns false if unbounded.
    fn maximize(&mut self, obj: &[Scalar], allowed: usize) -> bool {
        loop {
            let entering = (0..allowed).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let mut r = obj[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !obj[b].is_zero() && !self.t[i][j].is_zero() {
                        r -= &obj[b] * &self.t[i][j];
                    }
                }
                r.is_positive()
            });
            let Some(col) = entering else { return true };
            let mut best: Option<(usize, Scalar)> = None;
            for i in 0..self.t.len() {
                let a = &self.t[i][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((row, _)) = best else { return false };
            self.pivot(row, col);
        }
    }

    fn value(&self, var: usize) -> Scalar {
        self.basis
            .iter()
            .position(|&b| b == var)
            .map(|i| self.rhs(i).clone())
            .unwrap_or_else(Scalar::zero)
    }
}

/// Finds a rational `x` with `eq.normal·x = eq.rhs` for all equalities and
/// `s.normal·x > s.rhs` for all strict constraints, or `None` if none exists.
pub fn find_point(dim: usize, equalities: &[Constraint], strict: &[Constraint]) -> Option<Vec<Scalar>> {
    // Columns: u (dim), v (dim), t, one slack per strict row, slack for t <= 1.
    let n_u = dim;
    let t_col = 2 * dim;
    let first_slack = t_col + 1;
    let bound_slack = first_slack + strict.len();
    let vars = bound_slack + 1;

    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let mut push_row = |normal: &[Scalar], rhs: &Scalar, extra: &[(usize, Scalar)]| {
        let mut r = vec![Scalar::zero(); vars + 1];
        for (k, a) in normal.iter().enumerate() {
            r[k] = a.clone();
            r[n_u + k] = -a;
        }
        for (c, v) in extra {
            r[*c] = v.clone();
        }
        r[vars] = rhs.clone();
        rows.push(r);
    };
    for e in equalities {
        debug_assert_eq!(e.normal.len(), dim);
        push_row(&e.normal, &e.rhs, &[]);
    }
    for (j, s) in strict.iter().enumerate() {
        push_row(&s.normal, &s.rhs, &[(t_col, -Scalar::one()), (first_slack + j, -Scalar::one())]);
    }
    push_row(&vec![Scalar::zero(); dim], &Scalar::one(), &[(t_col, Scalar::one()), (bound_slack, Scalar::one())]);

    // Phase I: artificial variable per row, after making right-hand sides nonnegative.
    let m = rows.len();
    let total = vars + m;
    let mut t = Vec::with_capacity(m);
    for (i, mut r) in rows.into_iter().enumerate() {
        if r[vars].is_negative() {
            for x in r.iter_mut() {
                *x = -&*x;
            }
        }
        let rhs = r.pop().expect("rhs column");
        r.resize(total, Scalar::zero());
        r[vars + i] = Scalar::one();
        r.push(rhs);
        t.push(r);
    }
    let mut tab = Tableau { t, basis: (vars..total).collect(), vars: total };
    let mut phase1 = vec![Scalar::zero(); total];
    for x in phase1.iter_mut().skip(vars) {
        *x = -Scalar::one();
    }
    tab.maximize(&phase1, total);
    let infeasibility: Scalar = tab.basis.iter().enumerate().filter(|(_, &b)| b >= vars).map(|(i, _)| tab.rhs(i).clone()).sum();
    if infeasibility.is_positive() {
        return None;
    }
    // Drive remaining (zero-valued) artificials out of the basis; drop redundant rows.
    let mut i = 0;
    while i < tab.t.len() {
        if tab.basis[i] >= vars {
            if let Some(col) = (0..vars).find(|&j| !tab.t[i][j].is_zero() && !tab.basis.contains(&j)) {
                tab.pivot(i, col);
            } else {
                tab.t.remove(i);
                tab.basis.remove(i);
                continue;
            }
        }
        i += 1;
    }
    for r in tab.t.iter_mut() {
        let rhs = r.pop().expect("rhs column");
        r.truncate(vars);
        r.push(rhs);
    }
    tab.vars = vars;

    let mut obj = vec![Scalar::zero(); vars];
    obj[t_col] = Scalar::one();
    let bounded = tab.maximize(&obj, vars);
    debug_assert!(bounded, "t is bounded by 1");
    if !strict.is_empty() && !tab.value(t_col).is_positive() {
        return None;
    }
    Some((0..dim).map(|k| tab.value(k) - tab.value(n_u + k)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(v: i64) -> Scalar {
        Scalar::from_integer(BigInt::from(v))
    }

    fn c(normal: &[i64], rhs: i64) -> Constraint {
        Constraint { normal: normal.iter().map(|&v| q(v)).collect(), rhs: q(rhs) }
    }

    fn dot(a: &[Scalar], x: &[Scalar]) -> Scalar {
        a.iter().zip(x).map(|(p, r)| p * r).sum()
    }

    #[test]
    fn open_quadrant() {
        let stricts = [c(&[1, 0], 0), c(&[0, -1], 0)];
        let x = find_point(2, &[], &stricts).unwrap();
        for s in &stricts {
            assert!(dot(&s.normal, &x) > s.rhs);
        }
    }

    #[test]
    fn strict_contradiction() {
        assert!(find_point(1, &[], &[c(&[1], 0), c(&[-1], 0)]).is_none());
        // x = 0 and x > 0
        assert!(find_point(1, &[c(&[1], 0)], &[c(&[1], 0)]).is_none());
    }

    #[test]
    fn open_interval_between_affine_points() {
        // 0 < x < 1
        let x = find_point(1, &[], &[c(&[1], 0), c(&[-1], -1)]).unwrap();
        assert!(x[0] > q(0) && x[0] < q(1));
    }

    #[test]
    fn equalities_only() {
        let x = find_point(2, &[c(&[1, 1], 3), c(&[1, -1], 1)], &[]).unwrap();
        assert_eq!(x, vec![q(2), q(1)]);
        assert!(find_point(1, &[c(&[1], 0), c(&[1], 1)], &[]).is_none());
    }

    #[test]
    fn ray_on_a_line() {
        // x = y, x > 0, and the line x + y = 0 excluded by strictness of y > -x
        let x = find_point(2, &[c(&[1, -1], 0)], &[c(&[1, 0], 0), c(&[1, 1], 0)]).unwrap();
        assert_eq!(x[0], x[1]);
        assert!(x[0] > q(0));
    }
}
