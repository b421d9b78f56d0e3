//! Exact sign of `Σ c_i · r_i^{1/n}` for rational `c_i` and nonnegative
//! rational `r_i`, without floating point.
//!
//! Radicands are grouped into classes modulo rational `n`-th powers. Real
//! `n`-th roots from distinct classes are linearly independent over `Q`, so
//! the sum vanishes exactly when every class coefficient does; otherwise
//! dyadic enclosures are refined until the sign is determined.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::rational::Rat;

/// Whether `x >= 0` is the `n`-th power of a rational; returns the root.
pub fn rational_root(x: &Rat, n: u32) -> Option<Rat> {
    if x.is_negative() {
        return None;
    }
    let p = x.numer().nth_root(n);
    let q = x.denom().nth_root(n);
    (p.pow(n) == *x.numer() && q.pow(n) == *x.denom()).then(|| Rat::new(p, q))
}

/// `(lo, hi)` with `lo <= r^{1/n} <= hi` and `hi - lo <= 1/(q·2^k)`.
fn enclose(r: &Rat, n: u32, k: u32) -> (Rat, Rat) {
    let p = r.numer();
    let q = r.denom();
    let scale = BigInt::one() << (n as usize * k as usize);
    let big = p * q.pow(n - 1) * scale;
    let f = big.nth_root(n);
    let den = q * (BigInt::one() << k as usize);
    let lo = Rat::new(f.clone(), den.clone());
    let hi = if f.pow(n) == big {
        lo.clone()
    } else {
        Rat::new(f + 1, den)
    };
    (lo, hi)
}

/// Sign (-1, 0, 1) of `Σ c_i r_i^{1/n}`.
pub fn radical_sum_sign(terms: &[(Rat, Rat)], n: u32) -> i32 {
    assert!(n >= 1);
    assert!(
        terms.iter().all(|(_, r)| !r.is_negative()),
        "radicands must be nonnegative"
    );
    // Classes: (representative radicand, accumulated coefficient).
    let mut classes: Vec<(Rat, Rat)> = Vec::new();
    for (c, r) in terms {
        if r.is_zero() || c.is_zero() {
            continue;
        }
        let mut placed = false;
        for (rep, acc) in classes.iter_mut() {
            if let Some(root) = rational_root(&(r / &*rep), n) {
                *acc += c * root;
                placed = true;
                break;
            }
        }
        if !placed {
            classes.push((r.clone(), c.clone()));
        }
    }
    classes.retain(|(_, c)| !c.is_zero());
    if classes.is_empty() {
        return 0;
    }
    let mut k = 8;
    loop {
        let mut lo = Rat::zero();
        let mut hi = Rat::zero();
        for (r, c) in &classes {
            let (a, b) = enclose(r, n, k);
            if c.is_positive() {
                lo += c * &a;
                hi += c * &b;
            } else {
                lo += c * &b;
                hi += c * &a;
            }
        }
        if lo.is_positive() {
            return 1;
        }
        if hi.is_negative() {
            return -1;
        }
        k *= 2;
    }
}

/// Compares `x^{1/n}` with `Σ y_i^{1/n}` exactly.
pub fn compare_root_sum(x: &Rat, ys: &[Rat], n: u32) -> Ordering {
    let mut terms = vec![(Rat::one(), x.clone())];
    terms.extend(ys.iter().map(|y| (-Rat::one(), y.clone())));
    radical_sum_sign(&terms, n).cmp(&0)
}
