//! Chebyshev constant of a real interval from discrete minimax problems.
//!
//! This is the only floating-point computation in the crate. For each
//! degree the smallest sup-norm of a monic polynomial on a uniform grid is
//! found by the Remez exchange in the Chebyshev basis of the rescaled
//! interval; Fekete's lemma then turns the logarithms into a limit.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::GvfError;

pub const REMEZ_TOLERANCE: f64 = 1e-12;
pub const REMEZ_MAX_ITERATIONS: usize = 200;
pub const SUPERADDITIVITY_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChebyshevReport {
    pub interval: (f64, f64),
    pub grid: usize,
    pub n_max: usize,
    pub remez_tolerance: f64,
    pub superadditivity_slack: f64,
    /// `a_n = -log(min over monic degree n of max over the grid of |f|)`.
    pub a: Vec<f64>,
    pub remez_iterations: Vec<usize>,
    pub best_n: usize,
    /// `max_n a_n / n`.
    pub best_rate: f64,
    /// `exp(-best_rate)`.
    pub estimate: f64,
}

/// `T_0(u), ..., T_n(u)`.
fn cheb_values(u: f64, n: usize) -> Vec<f64> {
    let mut t = Vec::with_capacity(n + 1);
    t.push(1.0);
    if n >= 1 {
        t.push(u);
    }
    for k in 2..=n {
        let v = 2.0 * u * t[k - 1] - t[k - 2];
        t.push(v);
    }
    t
}

/// Smallest `max_j |T_n(u_j) - Σ_{k<n} d_k T_k(u_j)|` over a sorted grid.
fn discrete_minimax(grid: &[f64], basis: &[Vec<f64>], n: usize, tol: f64) -> (f64, usize) {
    let len = grid.len();
    let mut reference: Vec<usize> = (0..=n)
        .map(|k| {
            let target = -(std::f64::consts::PI * k as f64 / n as f64).cos();
            let pos = ((target + 1.0) / 2.0 * (len - 1) as f64).round() as usize;
            pos.min(len - 1)
        })
        .collect();
    for i in 1..reference.len() {
        if reference[i] <= reference[i - 1] {
            reference[i] = reference[i - 1] + 1;
        }
    }
    let mut best = f64::INFINITY;
    for iter in 1..=REMEZ_MAX_ITERATIONS {
        let m = DMatrix::from_fn(n + 1, n + 1, |i, j| {
            if j < n {
                basis[reference[i]][j]
            } else if i % 2 == 0 {
                1.0
            } else {
                -1.0
            }
        });
        let rhs = DVector::from_fn(n + 1, |i, _| basis[reference[i]][n]);
        let sol = match m.lu().solve(&rhs) {
            Some(s) => s,
            None => return (best, iter),
        };
        let level = sol[n].abs();
        let resid: Vec<f64> = basis
            .iter()
            .map(|b| b[n] - (0..n).map(|k| sol[k] * b[k]).sum::<f64>())
            .collect();
        let (gmax, maxerr) = resid
            .iter()
            .enumerate()
            .fold((0, 0.0f64), |(bi, bv), (i, r)| {
                if r.abs() > bv {
                    (i, r.abs())
                } else {
                    (bi, bv)
                }
            });
        best = best.min(maxerr);
        if maxerr - level <= tol * maxerr {
            return (best, iter);
        }
        // Extremum of each run of constant sign.
        let mut ext: Vec<usize> = Vec::new();
        for (i, r) in resid.iter().enumerate() {
            if *r == 0.0 {
                continue;
            }
            match ext.last() {
                Some(&j) if resid[j].signum() == r.signum() => {
                    if r.abs() > resid[j].abs() {
                        *ext.last_mut().unwrap() = i;
                    }
                }
                _ => ext.push(i),
            }
        }
        if ext.len() < n + 1 {
            return (best, iter);
        }
        let g = ext.iter().position(|&i| i == gmax).unwrap_or(0);
        let lo = g.saturating_sub(n);
        let hi = g.min(ext.len() - n - 1);
        let start = (lo..=hi)
            .max_by(|&a, &b| {
                let ma = ext[a..=a + n]
                    .iter()
                    .map(|&i| resid[i].abs())
                    .fold(f64::INFINITY, f64::min);
                let mb = ext[b..=b + n]
                    .iter()
                    .map(|&i| resid[i].abs())
                    .fold(f64::INFINITY, f64::min);
                ma.partial_cmp(&mb).unwrap().then(b.cmp(&a))
            })
            .unwrap();
        let next: Vec<usize> = ext[start..=start + n].to_vec();
        if next == reference {
            return (best, iter);
        }
        reference = next;
    }
    (best, REMEZ_MAX_ITERATIONS)
}

/// Estimates the Chebyshev constant (logarithmic capacity) of `[a, b]`.
pub fn chebyshev_constant(
    a: f64,
    b: f64,
    grid: usize,
    n_max: usize,
) -> Result<ChebyshevReport, GvfError> {
    chebyshev_constant_with_tolerance(a, b, grid, n_max, REMEZ_TOLERANCE)
}

/// [`chebyshev_constant`] with a chosen relative Remez stopping tolerance.
pub fn chebyshev_constant_with_tolerance(
    a: f64,
    b: f64,
    grid: usize,
    n_max: usize,
    tolerance: f64,
) -> Result<ChebyshevReport, GvfError> {
    if !(tolerance.is_finite() && tolerance > 0.0 && tolerance < 1.0) {
        return Err(GvfError::Degenerate(format!("Remez tolerance {tolerance}")));
    }
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(GvfError::Degenerate(format!("interval [{a}, {b}]")));
    }
    if grid < 64 {
        return Err(GvfError::Degenerate(format!(
            "grid of {grid} points (need at least 64)"
        )));
    }
    if n_max == 0 || n_max + 1 > grid {
        return Err(GvfError::Degenerate(format!(
            "n_max = {n_max} for a grid of {grid} points"
        )));
    }
    let us: Vec<f64> = (0..grid)
        .map(|j| -1.0 + 2.0 * j as f64 / (grid - 1) as f64)
        .collect();
    let half = (b - a) / 2.0;
    let mut av = Vec::with_capacity(n_max);
    let mut iters = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let basis: Vec<Vec<f64>> = us.iter().map(|&u| cheb_values(u, n)).collect();
        let (m, it) = discrete_minimax(&us, &basis, n, tolerance);
        // Monic in t: half^n · 2^{1-n} · (minimax of T_n minus lower terms).
        let log_minimax = n as f64 * half.ln() + (1.0 - n as f64) * std::f64::consts::LN_2 + m.ln();
        av.push(-log_minimax);
        iters.push(it);
    }
    for n in 1..=n_max {
        for m in 1..=n_max - n {
            let lhs = av[n + m - 1];
            let rhs = av[n - 1] + av[m - 1];
            if lhs < rhs - SUPERADDITIVITY_SLACK * (1.0 + rhs.abs()) {
                return Err(GvfError::NotSuperadditive {
                    n: n as u64,
                    m: m as u64,
                    detail: format!("{lhs} < {rhs}"),
                });
            }
        }
    }
    let (best_n, best_rate) = av
        .iter()
        .enumerate()
        .map(|(i, x)| (i + 1, x / (i + 1) as f64))
        .fold(
            (0, f64::NEG_INFINITY),
            |acc, (n, r)| if r > acc.1 { (n, r) } else { acc },
        );
    Ok(ChebyshevReport {
        interval: (a, b),
        grid,
        n_max,
        remez_tolerance: tolerance,
        superadditivity_slack: SUPERADDITIVITY_SLACK,
        a: av,
        remez_iterations: iters,
        best_n,
        best_rate,
        estimate: (-best_rate).exp(),
    })
}
