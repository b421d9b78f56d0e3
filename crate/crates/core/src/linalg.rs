//! Dense exact linear algebra over `Rat` and `BigInt`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::{big, Rat, RatVector};

pub type Matrix = Vec<Vec<Rat>>;

/// Reduced row echelon form; returns the matrix and its pivot columns.
pub fn rref(m: &[Vec<Rat>]) -> (Matrix, Vec<usize>) {
    let mut a: Matrix = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..cols {
                    let d = &f * &a[r][j];
                    a[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

pub fn rank(m: &[Vec<Rat>]) -> usize {
    rref(m).1.len()
}

/// Basis of the right null space `{x : m x = 0}` for a matrix with `cols`
/// columns (needed when `m` has no rows).
pub fn kernel(m: &[Vec<Rat>], cols: usize) -> Vec<Vec<Rat>> {
    let (r, pivots) = rref(m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); cols];
            v[f] = Rat::one();
            for (row, &p) in r.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Some solution of `m x = b`, or `None` when inconsistent.
pub fn solve(m: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let cols = m.first().map_or(0, Vec::len);
    let aug: Matrix = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(&aug);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![Rat::zero(); cols];
    for (row, &p) in r.iter().zip(&pivots) {
        x[p] = row[cols].clone();
    }
    Some(x)
}

/// Coordinates of `v` in the basis `basis` (vectors as columns), if `v` lies
/// in their span.
pub fn coordinates(basis: &[RatVector], v: &RatVector) -> Option<Vec<Rat>> {
    let n = v.dim();
    let m: Matrix = (0..n)
        .map(|i| basis.iter().map(|b| b[i].clone()).collect())
        .collect();
    if basis.is_empty() {
        return v.is_zero().then(Vec::new);
    }
    solve(&m, v.coords())
}

pub fn det(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    let mut a = m.to_vec();
    let mut d = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= &a[c][c];
        let inv = a[c][c].recip();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            for j in c..n {
                let t = &f * &a[c][j];
                a[i][j] -= t;
            }
        }
    }
    d
}

pub fn mat_vec(m: &[Vec<Rat>], v: &[Rat]) -> Vec<Rat> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(Rat::zero(), |acc, (a, b)| acc + a * b)
        })
        .collect()
}

pub fn transpose(m: &[Vec<Rat>]) -> Matrix {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| m.iter().map(|r| r[j].clone()).collect())
        .collect()
}

/// Canonical basis of the row space: nonzero RREF rows scaled to primitive
/// integer vectors.
pub fn canonical_row_space(vectors: &[Vec<Rat>]) -> Vec<Vec<BigInt>> {
    let (r, _) = rref(vectors);
    r.iter()
        .map(|row| crate::rational::primitive(row))
        .collect()
}

/// Hermite normal form of an integer matrix (row style) together with a
/// unimodular transform `u` such that `u * m = h`.
#[derive(Clone, Debug)]
pub struct Hnf {
    pub h: Vec<Vec<BigInt>>,
    pub u: Vec<Vec<BigInt>>,
    /// Number of nonzero rows of `h` (they come first).
    pub rank: usize,
}

pub fn hermite(m: &[Vec<BigInt>]) -> Hnf {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut h: Vec<Vec<BigInt>> = m.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| {
            (0..rows)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // Euclid on column c below row r.
        loop {
            let nz: Vec<usize> = (r..rows).filter(|&i| !h[i][c].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| h[i][c].abs()).unwrap();
            h.swap(r, p);
            u.swap(r, p);
            let mut done = true;
            for i in r + 1..rows {
                if h[i][c].is_zero() {
                    continue;
                }
                let q = h[i][c].div_floor(&h[r][c]);
                for j in 0..cols {
                    let t = &q * &h[r][j];
                    h[i][j] -= t;
                }
                for j in 0..rows {
                    let t = &q * &u[r][j];
                    u[i][j] -= t;
                }
                if !h[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[r][c].is_zero() {
            continue;
        }
        if h[r][c].is_negative() {
            for x in h[r].iter_mut() {
                *x = -&*x;
            }
            for x in u[r].iter_mut() {
                *x = -&*x;
            }
        }
        for i in 0..r {
            let q = h[i][c].div_floor(&h[r][c]);
            if q.is_zero() {
                continue;
            }
            for j in 0..cols {
                let t = &q * &h[r][j];
                h[i][j] -= t;
            }
            for j in 0..rows {
                let t = &q * &u[r][j];
                u[i][j] -= t;
            }
        }
        r += 1;
    }
    Hnf { h, u, rank: r }
}

/// Basis of `{x in Z^n : m x = 0}` for an integer matrix `m` with `n` columns.
pub fn integer_kernel(m: &[Vec<BigInt>], n: usize) -> Vec<Vec<BigInt>> {
    if m.is_empty() {
        return (0..n)
            .map(|i| (0..n).map(|j| BigInt::from((i == j) as i32)).collect())
            .collect();
    }
    // Row HNF of m^T: u * m^T = h; rows of u beyond the rank span the left
    // kernel of m^T, which is the right kernel of m.
    let mt: Vec<Vec<BigInt>> = (0..n)
        .map(|j| m.iter().map(|r| r[j].clone()).collect())
        .collect();
    let hnf = hermite(&mt);
    hnf.u[hnf.rank..].to_vec()
}

/// Basis of the saturated lattice `Z^n ∩ span(vectors)`.
pub fn saturated_basis(vectors: &[RatVector], n: usize) -> Vec<RatVector> {
    let rows: Matrix = vectors.iter().map(|v| v.coords().to_vec()).collect();
    // Integer equations cutting out the span.
    let eqs: Vec<Vec<BigInt>> = kernel(&rows, n)
        .iter()
        .map(|v| crate::rational::primitive(v))
        .collect();
    integer_kernel(&eqs, n)
        .iter()
        .map(|v| RatVector::from_bigints(v))
        .collect()
}

pub fn to_rat_rows(m: &[Vec<BigInt>]) -> Matrix {
    m.iter().map(|r| r.iter().map(big).collect()).collect()
}
