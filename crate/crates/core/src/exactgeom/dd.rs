//! Double description: from inequalities `a·y >= 0` to lineality + extreme
//! rays, all over primitive integer vectors.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::rational::primitive_int;

#[derive(Clone, Debug)]
struct Ray {
    v: Vec<BigInt>,
    /// `zero[k]` is true when processed constraint `k` is tight on `v`.
    zero: Vec<bool>,
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn combine(s: &BigInt, u: &[BigInt], t: &BigInt, w: &[BigInt]) -> Vec<BigInt> {
    primitive_int(u.iter().zip(w).map(|(x, y)| s * x - t * y).collect())
}

/// The cone `{y : a·y >= 0 for all a in constraints}` as
/// `(lineality basis, extreme rays modulo lineality)`.
pub fn cone_from_constraints(
    dim: usize,
    constraints: &[Vec<BigInt>],
) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let mut lin: Vec<Vec<BigInt>> = (0..dim)
        .map(|i| (0..dim).map(|j| BigInt::from((i == j) as i32)).collect())
        .collect();
    let mut rays: Vec<Ray> = Vec::new();
    let mut processed = 0usize;

    let mut cons: Vec<Vec<BigInt>> = constraints
        .iter()
        .filter(|a| a.iter().any(|x| !x.is_zero()))
        .map(|a| primitive_int(a.clone()))
        .collect();
    cons.sort();
    cons.dedup();

    for a in &cons {
        let lin_pos = lin.iter().position(|l| !dot(a, l).is_zero());
        if let Some(idx) = lin_pos {
            let mut l0 = lin.remove(idx);
            let mut s0 = dot(a, &l0);
            if s0.is_negative() {
                l0 = l0.iter().map(|x| -x).collect();
                s0 = -s0;
            }
            for l in lin.iter_mut() {
                let al = dot(a, l);
                if !al.is_zero() {
                    *l = combine(&s0, l, &al, &l0);
                }
            }
            for r in rays.iter_mut() {
                let ar = dot(a, &r.v);
                if !ar.is_zero() {
                    r.v = combine(&s0, &r.v, &ar, &l0);
                }
                r.zero.push(true);
            }
            let mut zero = vec![true; processed];
            zero.push(false);
            rays.push(Ray { v: l0, zero });
        } else {
            let pointed_dim = dim - lin.len();
            let signs: Vec<BigInt> = rays.iter().map(|r| dot(a, &r.v)).collect();
            let mut next: Vec<Ray> = Vec::new();
            for (r, s) in rays.iter().zip(&signs) {
                if !s.is_negative() {
                    let mut zero = r.zero.clone();
                    zero.push(s.is_zero());
                    next.push(Ray {
                        v: r.v.clone(),
                        zero,
                    });
                }
            }
            for (i, p) in rays.iter().enumerate() {
                if !signs[i].is_positive() {
                    continue;
                }
                for (j, n) in rays.iter().enumerate() {
                    if !signs[j].is_negative() {
                        continue;
                    }
                    let common: Vec<bool> =
                        p.zero.iter().zip(&n.zero).map(|(x, y)| *x && *y).collect();
                    let count = common.iter().filter(|&&b| b).count();
                    if count + 2 < pointed_dim {
                        continue;
                    }
                    let adjacent = rays.iter().enumerate().all(|(k, r)| {
                        k == i || k == j || !common.iter().zip(&r.zero).all(|(c, z)| !*c || *z)
                    });
                    if !adjacent {
                        continue;
                    }
                    let v = combine(&signs[i], &n.v, &signs[j], &p.v);
                    let mut zero = common;
                    zero.push(true);
                    next.push(Ray { v, zero });
                }
            }
            rays = next;
        }
        processed += 1;
    }
    (lin, rays.into_iter().map(|r| r.v).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn quadrant() {
        let (lin, rays) = cone_from_constraints(2, &[v(&[1, 0]), v(&[0, 1])]);
        assert!(lin.is_empty());
        let mut rays = rays;
        rays.sort();
        assert_eq!(rays, vec![v(&[0, 1]), v(&[1, 0])]);
    }

    #[test]
    fn square_cone_has_four_rays() {
        // Homogenized unit square: (1, x, y) with 0 <= x, y <= 1.
        let cons = [v(&[0, 1, 0]), v(&[0, 0, 1]), v(&[1, -1, 0]), v(&[1, 0, -1])];
        let (lin, rays) = cone_from_constraints(3, &cons);
        assert!(lin.is_empty());
        assert_eq!(rays.len(), 4);
    }

    #[test]
    fn half_plane_keeps_a_line() {
        let (lin, rays) = cone_from_constraints(2, &[v(&[1, 2])]);
        assert_eq!(lin.len(), 1);
        assert_eq!(rays.len(), 1);
    }
}
