//! Exact two-phase simplex with Bland's rule.
//!
//! Standard form only: minimize `c·x` subject to `A x = b`, `x >= 0`. There is
//! no tolerance anywhere; every pivot is a rational operation.

use num_traits::{One, Signed, Zero};

use crate::rational::Rat;

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rat>, value: Rat },
    Infeasible,
    Unbounded,
}

struct Tableau {
    /// `rows x (cols + 1)`; last column is the right-hand side.
    t: Vec<Vec<Rat>>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.t[r][c].recip();
        for x in self.t[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Runs simplex on cost `cost` restricted to columns `allowed`.
    /// Returns `false` if unbounded.
    fn optimize(&mut self, cost: &[Rat], allowed: &dyn Fn(usize) -> bool) -> bool {
        loop {
            // Reduced costs: c_j - c_B B^{-1} A_j.
            let entering = (0..self.cols).filter(|&j| allowed(j)).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let mut rc = cost[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !cost[b].is_zero() && !self.t[i][j].is_zero() {
                        rc -= &cost[b] * &self.t[i][j];
                    }
                }
                rc.is_negative()
            });
            let Some(e) = entering else { return true };
            let rhs = self.cols;
            let mut leave: Option<(usize, Rat)> = None;
            for i in 0..self.t.len() {
                if self.t[i][e].is_positive() {
                    let ratio = &self.t[i][rhs] / &self.t[i][e];
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => {
                            ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            match leave {
                None => return false,
                Some((r, _)) => self.pivot(r, e),
            }
        }
    }
}

/// Minimize `c·x` subject to `a x = b`, `x >= 0`.
pub fn minimize(c: &[Rat], a: &[Vec<Rat>], b: &[Rat]) -> LpOutcome {
    let n = c.len();
    let m = a.len();
    // Phase 1 with one artificial per row.
    let cols = n + m;
    let mut t = Vec::with_capacity(m);
    for (i, (row, bi)) in a.iter().zip(b).enumerate() {
        let flip = bi.is_negative();
        let mut r: Vec<Rat> = row
            .iter()
            .map(|x| if flip { -x } else { x.clone() })
            .collect();
        r.resize(cols, Rat::zero());
        r[n + i] = Rat::one();
        r.push(if flip { -bi } else { bi.clone() });
        t.push(r);
    }
    let mut tab = Tableau {
        t,
        basis: (n..n + m).collect(),
        cols,
    };
    let mut phase1 = vec![Rat::zero(); cols];
    for x in phase1.iter_mut().skip(n) {
        *x = Rat::one();
    }
    tab.optimize(&phase1, &|_| true);
    let infeas: Rat = tab
        .basis
        .iter()
        .enumerate()
        .filter(|(_, &bj)| bj >= n)
        .fold(Rat::zero(), |acc, (i, _)| acc + &tab.t[i][cols]);
    if !infeas.is_zero() {
        return LpOutcome::Infeasible;
    }
    // Drive remaining artificials out of the basis; drop redundant rows.
    let mut i = 0;
    while i < tab.t.len() {
        if tab.basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| !tab.t[i][j].is_zero()) {
                tab.pivot(i, j);
                i += 1;
            } else {
                tab.t.remove(i);
                tab.basis.remove(i);
            }
        } else {
            i += 1;
        }
    }
    let mut cost = c.to_vec();
    cost.resize(cols, Rat::zero());
    if !tab.optimize(&cost, &|j| j < n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![Rat::zero(); n];
    for (i, &bj) in tab.basis.iter().enumerate() {
        if bj < n {
            x[bj] = tab.t[i][cols].clone();
        }
    }
    let value = x
        .iter()
        .zip(c)
        .fold(Rat::zero(), |acc, (xi, ci)| acc + xi * ci);
    LpOutcome::Optimal { x, value }
}

/// A nonnegative solution of `a x = b`, if any.
pub fn feasible_point(a: &[Vec<Rat>], b: &[Rat], n: usize) -> Option<Vec<Rat>> {
    match minimize(&vec![Rat::zero(); n], a, b) {
        LpOutcome::Optimal { x, .. } => Some(x),
        _ => None,
    }
}

/// Solves `a y >= 0`-style systems with free variables: find `y` (free) with
/// `eq * y = eq_rhs` and `ineq * y >= ineq_rhs`. Free variables are split as
/// `y = p - q`; inequalities get surplus columns.
pub fn feasible_free(
    eq: &[Vec<Rat>],
    eq_rhs: &[Rat],
    ineq: &[Vec<Rat>],
    ineq_rhs: &[Rat],
    n: usize,
) -> Option<Vec<Rat>> {
    let s = ineq.len();
    let cols = 2 * n + s;
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (row, r) in eq.iter().zip(eq_rhs) {
        let mut v = Vec::with_capacity(cols);
        v.extend(row.iter().cloned());
        v.extend(row.iter().map(|x| -x));
        v.resize(cols, Rat::zero());
        a.push(v);
        b.push(r.clone());
    }
    for (k, (row, r)) in ineq.iter().zip(ineq_rhs).enumerate() {
        let mut v = Vec::with_capacity(cols);
        v.extend(row.iter().cloned());
        v.extend(row.iter().map(|x| -x));
        v.resize(cols, Rat::zero());
        v[2 * n + k] = -Rat::one();
        a.push(v);
        b.push(r.clone());
    }
    let x = feasible_point(&a, &b, cols)?;
    Some((0..n).map(|i| &x[i] - &x[n + i]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn small_optimum() {
        // min -x - y s.t. x + 2y + s1 = 4, 3x + y + s2 = 6
        let a = vec![
            vec![int(1), int(2), int(1), int(0)],
            vec![int(3), int(1), int(0), int(1)],
        ];
        let b = vec![int(4), int(6)];
        let c = vec![int(-1), int(-1), int(0), int(0)];
        match minimize(&c, &a, &b) {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(value, frac(-14, 5));
                assert_eq!(x[0], frac(8, 5));
                assert_eq!(x[1], frac(6, 5));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let a = vec![vec![int(1), int(1)]];
        assert_eq!(
            minimize(&[int(0), int(0)], &a, &[int(-1)]),
            LpOutcome::Infeasible
        );
        let a = vec![vec![int(1), int(-1)]];
        assert_eq!(
            minimize(&[int(-1), int(0)], &a, &[int(0)]),
            LpOutcome::Unbounded
        );
    }

    #[test]
    fn redundant_rows_are_dropped() {
        let a = vec![vec![int(1), int(1)], vec![int(2), int(2)]];
        let x = feasible_point(&a, &[int(1), int(2)], 2).unwrap();
        assert_eq!(&x[0] + &x[1], int(1));
    }
}
