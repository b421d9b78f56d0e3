//! Complete fans, toric divisors as piecewise-linear functions, section
//! polytopes and counts, Hilbert degrees of monomial ideals, and stable
//! meet/join by fan refinement.
//!
//! Convention: a divisor `Σ a_ρ D_ρ` has support function `φ` linear on each
//! maximal cone with `φ(v_ρ) = -a_ρ`. Its coefficient function is `-φ`.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exactgeom::{dd, hull, ConeGen, GeomError, Polytope};
use crate::linalg;
use crate::rational::{int, primitive, Rat, RatVector};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ToricError {
    #[error("fan has no rays")]
    EmptyFan,
    #[error("ray {0} is not a primitive integer vector")]
    NotPrimitive(RatVector),
    #[error("cone {0:?} references a missing ray")]
    BadIndex(Vec<usize>),
    #[error("cone {0:?} is not full-dimensional")]
    NotFullDimensional(Vec<usize>),
    #[error("cone {0:?} is not salient")]
    NotSalient(Vec<usize>),
    #[error("fan is not complete: {0}")]
    Incomplete(String),
    #[error("fans of dimension {0} are not supported here")]
    Unsupported(usize),
    #[error("coefficients are not linear on cone {0:?}")]
    NotCartier(Vec<usize>),
    #[error("expected {expected} coefficients, found {found}")]
    CoefficientCount { expected: usize, found: usize },
    #[error("divisors live on different fans")]
    DifferentFans,
    #[error("cone {0:?} is not a smooth two-dimensional cone of the fan")]
    NonSmooth(Vec<usize>),
    #[error("target fan does not refine the divisor's fan")]
    NotRefinement,
    #[error("section polytope is unbounded")]
    Unbounded,
    #[error("section polytope is empty")]
    NoSections,
    #[error("monomial ideal is the whole ring")]
    WholeRing,
    #[error("value out of range for fast counting")]
    Overflow,
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// A complete rational fan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fan {
    rays: Vec<RatVector>,
    cones: Vec<Vec<usize>>,
    #[serde(skip)]
    normals: Vec<Vec<RatVector>>,
}

fn cone_of(rays: &[RatVector], idx: &[usize]) -> ConeGen {
    let dim = rays[0].dim();
    ConeGen {
        dim,
        generators: idx.iter().map(|&i| rays[i].clone()).collect(),
    }
}

impl Fan {
    /// Builds and validates a fan: primitive rays, full-dimensional salient
    /// cones, every wall shared by exactly two cones on opposite sides, and
    /// a generic point covered exactly once.
    pub fn new(rays: Vec<RatVector>, cones: Vec<Vec<usize>>) -> Result<Self, ToricError> {
        let n = rays.first().ok_or(ToricError::EmptyFan)?.dim();
        if n > 3 {
            return Err(ToricError::Unsupported(n));
        }
        for r in &rays {
            if r.dim() != n {
                return Err(GeomError::DimensionMismatch {
                    expected: n,
                    found: r.dim(),
                }
                .into());
            }
            if r.is_zero() || !r.is_integral() || r.primitive() != *r {
                return Err(ToricError::NotPrimitive(r.clone()));
            }
        }
        let mut cones: Vec<Vec<usize>> = cones
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c.dedup();
                c
            })
            .collect();
        cones.sort();
        let mut normals = Vec::with_capacity(cones.len());
        for c in &cones {
            if c.iter().any(|&i| i >= rays.len()) {
                return Err(ToricError::BadIndex(c.clone()));
            }
            let cg = cone_of(&rays, c);
            if !cg.is_full_dimensional() {
                return Err(ToricError::NotFullDimensional(c.clone()));
            }
            let dual = cg.dual();
            if !dual.is_full_dimensional() {
                return Err(ToricError::NotSalient(c.clone()));
            }
            normals.push(dual.generators);
        }
        let fan = Fan {
            rays,
            cones,
            normals,
        };
        fan.check_complete()?;
        Ok(fan)
    }

    pub fn from_ints(rays: &[&[i64]], cones: &[&[usize]]) -> Result<Self, ToricError> {
        Self::new(
            rays.iter().map(|r| RatVector::from_ints(r)).collect(),
            cones.iter().map(|c| c.to_vec()).collect(),
        )
    }

    /// Complete two-dimensional fan whose cones join angularly consecutive
    /// rays; ray indices follow the input order.
    pub fn from_rays_2d(rays: &[&[i64]]) -> Result<Self, ToricError> {
        let mut order: Vec<usize> = (0..rays.len()).collect();
        let half = |v: &[i64]| {
            if v[1] > 0 || (v[1] == 0 && v[0] > 0) {
                0
            } else {
                1
            }
        };
        order.sort_by(|&i, &j| {
            let (a, b) = (rays[i], rays[j]);
            half(a)
                .cmp(&half(b))
                .then_with(|| (0).cmp(&(a[0] * b[1] - a[1] * b[0])))
        });
        let k = order.len();
        let cones: Vec<Vec<usize>> = (0..k).map(|i| vec![order[i], order[(i + 1) % k]]).collect();
        Self::new(
            rays.iter().map(|r| RatVector::from_ints(r)).collect(),
            cones,
        )
    }

    pub fn dim(&self) -> usize {
        self.rays[0].dim()
    }

    pub fn rays(&self) -> &[RatVector] {
        &self.rays
    }

    pub fn cones(&self) -> &[Vec<usize>] {
        &self.cones
    }

    pub fn ray_index(&self, v: &RatVector) -> Option<usize> {
        self.rays.iter().position(|r| r == v)
    }

    fn walls(&self) -> Vec<(usize, RatVector, Vec<usize>)> {
        let mut out = Vec::new();
        for (ci, c) in self.cones.iter().enumerate() {
            for y in &self.normals[ci] {
                let on: Vec<usize> = c
                    .iter()
                    .copied()
                    .filter(|&i| self.rays[i].dot(y).is_zero())
                    .collect();
                out.push((ci, y.clone(), on));
            }
        }
        out
    }

    fn check_complete(&self) -> Result<(), ToricError> {
        let walls = self.walls();
        for (ci, y, on) in &walls {
            let partners: Vec<&(usize, RatVector, Vec<usize>)> = walls
                .iter()
                .filter(|(cj, _, o)| cj != ci && o == on)
                .collect();
            if partners.len() != 1 {
                return Err(ToricError::Incomplete(format!(
                    "wall {on:?} of cone {:?} has {} neighbours",
                    self.cones[*ci],
                    partners.len()
                )));
            }
            if partners[0].1 != -y {
                return Err(ToricError::Incomplete(format!(
                    "cones meeting along {on:?} overlap"
                )));
            }
        }
        // A point off every wall hyperplane lies in exactly one cone.
        let n = self.dim();
        let hyperplanes: Vec<&RatVector> = walls.iter().map(|w| &w.1).collect();
        let mut t = 2i64;
        let p = loop {
            let p = RatVector::new(
                (0..n as u32)
                    .map(|i| int(t.pow(i) * if i % 2 == 0 { 1 } else { -1 }))
                    .collect(),
            );
            if hyperplanes.iter().all(|h| !h.dot(&p).is_zero()) {
                break p;
            }
            t += 1;
        };
        let count = self
            .normals
            .iter()
            .filter(|ns| ns.iter().all(|y| y.dot(&p).is_positive()))
            .count();
        if count != 1 {
            return Err(ToricError::Incomplete(format!(
                "point {p} lies in {count} cones"
            )));
        }
        Ok(())
    }

    /// Index of a maximal cone containing `u`.
    pub fn locate(&self, u: &RatVector) -> usize {
        self.normals
            .iter()
            .position(|ns| ns.iter().all(|y| !y.dot(u).is_negative()))
            .expect("complete fan covers every point")
    }

    /// Whether every cone of `self` lies inside some cone of `coarse`.
    pub fn refines(&self, coarse: &Fan) -> bool {
        self.dim() == coarse.dim()
            && self.cones.iter().all(|c| {
                coarse.normals.iter().any(|ns| {
                    c.iter()
                        .all(|&i| ns.iter().all(|y| !y.dot(&self.rays[i]).is_negative()))
                })
            })
    }
}

/// Standard fans.
pub mod fans {
    use super::*;

    pub fn p1() -> Fan {
        Fan::from_ints(&[&[1], &[-1]], &[&[0], &[1]]).unwrap()
    }

    /// Rays `(1,0), (0,1), (-1,-1)`.
    pub fn p2() -> Fan {
        Fan::from_rays_2d(&[&[1, 0], &[0, 1], &[-1, -1]]).unwrap()
    }

    /// Rays `(1,0), (0,1), (-1,0), (0,-1)`.
    pub fn p1xp1() -> Fan {
        Fan::from_rays_2d(&[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]]).unwrap()
    }

    /// Rays `(1,0), (0,1), (-1,n), (0,-1)`.
    pub fn hirzebruch(n: i64) -> Fan {
        Fan::from_rays_2d(&[&[1, 0], &[0, 1], &[-1, n], &[0, -1]]).unwrap()
    }

    /// The plane blown up at `k <= 3` torus-fixed points: the rays of
    /// [`p2`] followed by `(1,1)`, `(-1,0)`, `(0,-1)` as needed.
    pub fn bl_p2(k: usize) -> Fan {
        let mut f = p2();
        let extra: [[i64; 2]; 3] = [[1, 1], [-1, 0], [0, -1]];
        let pairs: [[i64; 4]; 3] = [[1, 0, 0, 1], [0, 1, -1, -1], [-1, -1, 1, 0]];
        for p in pairs.iter().take(k) {
            let a = f.ray_index(&RatVector::from_ints(&p[..2])).unwrap();
            let b = f.ray_index(&RatVector::from_ints(&p[2..])).unwrap();
            f = blowup_fan(&f, &[a, b]).unwrap();
        }
        debug_assert!(f
            .rays()
            .iter()
            .skip(3)
            .zip(extra.iter())
            .all(|(r, e)| *r == RatVector::from_ints(e)));
        f
    }

    /// `P^3` with rays `e1, e2, e3, -(e1+e2+e3)`.
    pub fn p3() -> Fan {
        Fan::from_ints(
            &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[-1, -1, -1]],
            &[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]],
        )
        .unwrap()
    }
}

/// `Σ a_ρ D_ρ` on a complete fan, with its local linear pieces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ToricDivisor {
    fan: Fan,
    #[serde(with = "crate::rational::serde_rat_vec")]
    coeffs: Vec<Rat>,
    /// `m_σ` per maximal cone with `⟨m_σ, v_ρ⟩ = -a_ρ` for `ρ ∈ σ`.
    #[serde(skip)]
    pieces: Vec<RatVector>,
}

impl ToricDivisor {
    pub fn new(fan: Fan, coeffs: Vec<Rat>) -> Result<Self, ToricError> {
        if coeffs.len() != fan.rays.len() {
            return Err(ToricError::CoefficientCount {
                expected: fan.rays.len(),
                found: coeffs.len(),
            });
        }
        let mut pieces = Vec::with_capacity(fan.cones.len());
        for c in &fan.cones {
            let m: Vec<Vec<Rat>> = c.iter().map(|&i| fan.rays[i].coords().to_vec()).collect();
            let b: Vec<Rat> = c.iter().map(|&i| -coeffs[i].clone()).collect();
            let x = linalg::solve(&m, &b).ok_or_else(|| ToricError::NotCartier(c.clone()))?;
            pieces.push(RatVector::new(x));
        }
        Ok(ToricDivisor {
            fan,
            coeffs,
            pieces,
        })
    }

    pub fn from_ints(fan: Fan, coeffs: &[i64]) -> Result<Self, ToricError> {
        Self::new(fan, coeffs.iter().map(|&x| int(x)).collect())
    }

    /// `d · D_ρ` for the ray with index `rho`.
    pub fn prime(fan: Fan, rho: usize, d: Rat) -> Result<Self, ToricError> {
        let mut c = vec![Rat::zero(); fan.rays.len()];
        c[rho] = d;
        Self::new(fan, c)
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn piece(&self, cone: usize) -> &RatVector {
        &self.pieces[cone]
    }

    /// Support function value `φ_D(u)`.
    pub fn phi(&self, u: &RatVector) -> Rat {
        self.pieces[self.fan.locate(u)].dot(u)
    }

    /// Coefficient function `-φ_D`; equals `a_ρ` on rays.
    pub fn coefficient_at(&self, u: &RatVector) -> Rat {
        -self.phi(u)
    }

    pub fn scale(&self, s: &Rat) -> ToricDivisor {
        ToricDivisor {
            fan: self.fan.clone(),
            coeffs: self.coeffs.iter().map(|a| a * s).collect(),
            pieces: self.pieces.iter().map(|m| m.scale(s)).collect(),
        }
    }

    pub fn neg(&self) -> ToricDivisor {
        self.scale(&int(-1))
    }

    pub fn add(&self, other: &ToricDivisor) -> Result<ToricDivisor, ToricError> {
        if self.fan != other.fan {
            return Err(ToricError::DifferentFans);
        }
        Ok(ToricDivisor {
            fan: self.fan.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
            pieces: self
                .pieces
                .iter()
                .zip(&other.pieces)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// `⟨m_σ, v'⟩ - φ(v')` for each wall, `v'` a ray of the neighbouring cone
    /// off the wall.
    fn wall_gaps(&self) -> Vec<Rat> {
        let f = &self.fan;
        let mut gaps = Vec::new();
        for (ci, c) in f.cones.iter().enumerate() {
            for (cj, d) in f.cones.iter().enumerate() {
                if ci == cj {
                    continue;
                }
                let shared = c.iter().filter(|i| d.contains(i)).count();
                if shared + 1 < f.dim() {
                    continue;
                }
                // Adjacent across a wall only if some facet normal separates.
                let adjacent = f.normals[ci].iter().any(|y| {
                    let on: Vec<usize> = c
                        .iter()
                        .copied()
                        .filter(|&i| f.rays[i].dot(y).is_zero())
                        .collect();
                    on.iter().all(|i| d.contains(i)) && f.normals[cj].contains(&-y)
                });
                if !adjacent {
                    continue;
                }
                for &r in d.iter().filter(|r| !c.contains(r)) {
                    let v = &f.rays[r];
                    gaps.push(self.pieces[ci].dot(v) + &self.coeffs[r]);
                }
            }
        }
        gaps
    }

    /// `φ_D` is convex in the toric sense (`⟨m_σ, u⟩ >= φ_D(u)` everywhere).
    pub fn is_nef(&self) -> bool {
        self.wall_gaps().iter().all(|g| !g.is_negative())
    }

    /// Strictly convex across every wall.
    pub fn is_ample(&self) -> bool {
        self.wall_gaps().iter().all(|g| g.is_positive())
    }
}

/// `P_D = {u : ⟨u, v_ρ⟩ >= -a_ρ}`.
pub fn section_polytope(d: &ToricDivisor) -> Result<Polytope, ToricError> {
    let n = d.fan.dim();
    // Homogenized: (t, u) with t a_ρ + ⟨u, v_ρ⟩ >= 0 and t >= 0.
    let mut cons: Vec<Vec<BigInt>> = d
        .fan
        .rays
        .iter()
        .zip(&d.coeffs)
        .map(|(v, a)| primitive(v.prepend(a.clone()).coords()))
        .collect();
    let mut t = vec![BigInt::zero(); n + 1];
    t[0] = BigInt::one();
    cons.push(t);
    let (lin, rays) = dd::cone_from_constraints(n + 1, &cons);
    if !lin.is_empty() || rays.iter().any(|r| r[0].is_zero()) {
        if rays.iter().all(|r| r[0].is_zero()) && lin.is_empty() {
            return Err(ToricError::NoSections);
        }
        return Err(ToricError::Unbounded);
    }
    let verts: Vec<RatVector> = rays
        .iter()
        .map(|r| {
            let t = Rat::from_integer(r[0].clone());
            RatVector::new(
                r[1..]
                    .iter()
                    .map(|x| Rat::from_integer(x.clone()) / &t)
                    .collect(),
            )
        })
        .collect();
    if verts.is_empty() {
        return Err(ToricError::NoSections);
    }
    Ok(hull(&verts)?)
}

fn floor_div(a: i128, b: i128) -> i128 {
    let (q, r) = (a / b, a % b);
    if r != 0 && ((r < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn ceil_div_exact(a: i128, b: i128) -> i128 {
    -floor_div(-a, b)
}

/// Lattice points in `P_{mD}`: the number of sections of `mD`.
pub fn h0(d: &ToricDivisor, m: u32) -> Result<BigInt, ToricError> {
    if m == 0 {
        return Ok(BigInt::one());
    }
    let p = match section_polytope(d) {
        Ok(p) => p,
        Err(ToricError::NoSections) => return Ok(BigInt::zero()),
        Err(e) => return Err(e),
    };
    let mr = int(m as i64);
    let n = d.fan.dim();
    let conv = |x: &Rat| x.to_integer().to_i128().ok_or(ToricError::Overflow);
    let lo: Vec<i128> = (0..n)
        .map(|i| {
            p.vertices()
                .iter()
                .map(|v| (&v[i] * &mr).ceil())
                .min()
                .unwrap()
        })
        .map(|x| conv(&x))
        .collect::<Result<_, _>>()?;
    let hi: Vec<i128> = (0..n)
        .map(|i| {
            p.vertices()
                .iter()
                .map(|v| (&v[i] * &mr).floor())
                .max()
                .unwrap()
        })
        .map(|x| conv(&x))
        .collect::<Result<_, _>>()?;
    let rays: Vec<Vec<i128>> = d
        .fan
        .rays
        .iter()
        .map(|r| {
            r.to_bigints()
                .unwrap()
                .iter()
                .map(|x| x.to_i128().ok_or(ToricError::Overflow))
                .collect()
        })
        .collect::<Result<_, _>>()?;
    let bounds: Vec<i128> = d
        .coeffs
        .iter()
        .map(|a| conv(&(-(a * &mr)).ceil()))
        .collect::<Result<_, _>>()?;
    let last = n - 1;
    let count_rest = |prefix: &[i128]| -> i128 {
        fn rec(
            prefix: &mut Vec<i128>,
            lo: &[i128],
            hi: &[i128],
            rays: &[Vec<i128>],
            bounds: &[i128],
            last: usize,
        ) -> i128 {
            let k = prefix.len();
            if k == last {
                let mut l = lo[last];
                let mut h = hi[last];
                for (v, &b) in rays.iter().zip(bounds) {
                    let s: i128 = prefix.iter().zip(v).map(|(x, y)| x * y).sum();
                    let c = v[last];
                    let need = b - s;
                    if c > 0 {
                        l = l.max(ceil_div_exact(need, c));
                    } else if c < 0 {
                        h = h.min(floor_div(need, c));
                    } else if s < b {
                        return 0;
                    }
                }
                return (h - l + 1).max(0);
            }
            let mut total = 0;
            for x in lo[k]..=hi[k] {
                prefix.push(x);
                total += rec(prefix, lo, hi, rays, bounds, last);
                prefix.pop();
            }
            total
        }
        let mut p = prefix.to_vec();
        rec(&mut p, &lo, &hi, &rays, &bounds, last)
    };
    let total: i128 = if n == 1 {
        count_rest(&[])
    } else {
        (lo[0]..=hi[0])
            .into_par_iter()
            .map(|x| count_rest(&[x]))
            .sum()
    };
    Ok(BigInt::from(total))
}

/// `(d!·h0(m_max D)/m_max^d, d!·vol(P_D))`.
pub fn volume_sections(d: &ToricDivisor, m_max: u32) -> Result<(Rat, Rat), ToricError> {
    let n = d.fan.dim();
    let fact = (1..=n as i64).fold(Rat::one(), |acc, i| acc * int(i));
    let h = h0(d, m_max)?;
    let estimate =
        &fact * Rat::from_integer(h) / Rat::from_integer(BigInt::from(m_max).pow(n as u32));
    let exact = match section_polytope(d) {
        Ok(p) => &fact * p.ambient_volume(),
        Err(ToricError::NoSections) => Rat::zero(),
        Err(e) => return Err(e),
    };
    Ok((estimate, exact))
}

/// Monomial ideal in `nvars` variables, generators as exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonomialIdeal {
    nvars: usize,
    generators: Vec<Vec<u32>>,
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

impl MonomialIdeal {
    /// Keeps only minimal generators (an antichain under divisibility).
    pub fn new(nvars: usize, generators: Vec<Vec<u32>>) -> Result<Self, ToricError> {
        for g in &generators {
            if g.len() != nvars {
                return Err(GeomError::DimensionMismatch {
                    expected: nvars,
                    found: g.len(),
                }
                .into());
            }
        }
        let mut gens = generators;
        gens.sort();
        gens.dedup();
        let minimal: Vec<Vec<u32>> = gens
            .iter()
            .filter(|g| !gens.iter().any(|h| h != *g && divides(h, g)))
            .cloned()
            .collect();
        Ok(MonomialIdeal {
            nvars,
            generators: minimal,
        })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[Vec<u32>] {
        &self.generators
    }

    /// Number of degree-`n` monomials outside the ideal.
    pub fn hilbert_function(&self, n: i64) -> BigInt {
        let nv = self.nvars as i64;
        let mut total = binom(n + nv - 1, nv - 1);
        let k = self.generators.len();
        for mask in 1u64..(1u64 << k) {
            let mut l = vec![0u32; self.nvars];
            for (i, g) in self.generators.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    for (x, y) in l.iter_mut().zip(g) {
                        *x = (*x).max(*y);
                    }
                }
            }
            let deg: i64 = l.iter().map(|&x| x as i64).sum();
            let term = binom(n - deg + nv - 1, nv - 1);
            if mask.count_ones() % 2 == 1 {
                total -= term;
            } else {
                total += term;
            }
        }
        total
    }
}

/// `C(a, b)` as a count: zero when `a < b` or `a < 0`.
fn binom(a: i64, b: i64) -> BigInt {
    if b < 0 || a < b || a < 0 {
        return BigInt::zero();
    }
    let mut r = BigInt::one();
    for i in 0..b {
        r = r * BigInt::from(a - i) / BigInt::from(i + 1);
    }
    r
}

/// `(dimension, degree)` of `Proj(k[x]/I)`: degree and leading coefficient
/// times factorial of the Hilbert polynomial. The empty scheme reports
/// dimension `-1` and degree `0`.
pub fn hilbert_degree(ideal: &MonomialIdeal) -> Result<(i64, BigInt), ToricError> {
    if ideal.generators.iter().any(|g| g.iter().all(|&x| x == 0)) {
        return Err(ToricError::WholeRing);
    }
    let nv = ideal.nvars;
    // Past the degree of the lcm of all generators the function is polynomial.
    let n0: i64 = (0..nv)
        .map(|j| {
            ideal
                .generators
                .iter()
                .map(|g| g[j] as i64)
                .max()
                .unwrap_or(0)
        })
        .sum();
    let mut vals: Vec<BigInt> = (0..=nv as i64)
        .map(|i| ideal.hilbert_function(n0 + i))
        .collect();
    let mut diffs: Vec<BigInt> = vec![vals[0].clone()];
    for _ in 0..nv {
        vals = vals.windows(2).map(|w| &w[1] - &w[0]).collect();
        diffs.push(vals[0].clone());
    }
    match diffs.iter().rposition(|x| !x.is_zero()) {
        Some(k) => Ok((k as i64, diffs[k].clone())),
        None => Ok((-1, BigInt::zero())),
    }
}

/// Refines the fan of `d1` so that `φ1 - φ2` has constant sign on each cone.
fn refine_for(d1: &ToricDivisor, d2: &ToricDivisor) -> Result<Fan, ToricError> {
    let f = &d1.fan;
    let n = f.dim();
    let mut rays = f.rays.clone();
    let mut cones: Vec<Vec<usize>> = Vec::new();
    for (ci, c) in f.cones.iter().enumerate() {
        let g = &d1.pieces[ci] - &d2.pieces[ci];
        let vals: Vec<Rat> = c.iter().map(|&i| g.dot(&f.rays[i])).collect();
        let pos = vals.iter().any(|x| x.is_positive());
        let neg = vals.iter().any(|x| x.is_negative());
        if !(pos && neg) {
            cones.push(c.clone());
            continue;
        }
        let gi = primitive(g.coords());
        for side in [1i32, -1] {
            let mut cons: Vec<Vec<BigInt>> = f.normals[ci]
                .iter()
                .map(|y| primitive(y.coords()))
                .collect();
            cons.push(gi.iter().map(|x| x * side).collect());
            let (lin, prays) = dd::cone_from_constraints(n, &cons);
            debug_assert!(lin.is_empty());
            let mut idx = Vec::new();
            for r in prays {
                let v = RatVector::from_bigints(&r);
                let i = match rays.iter().position(|x| *x == v) {
                    Some(i) => i,
                    None => {
                        rays.push(v);
                        rays.len() - 1
                    }
                };
                idx.push(i);
            }
            cones.push(idx);
        }
    }
    Fan::new(rays, cones)
}

/// Divisor on `fan` with coefficients `-φ_D(v)`; `fan` must refine `D`'s fan.
pub fn pullback(d: &ToricDivisor, fan: &Fan) -> Result<ToricDivisor, ToricError> {
    if !fan.refines(&d.fan) {
        return Err(ToricError::NotRefinement);
    }
    ToricDivisor::new(
        fan.clone(),
        fan.rays.iter().map(|v| d.coefficient_at(v)).collect(),
    )
}

/// Greatest divisor below both, on the coarsest refinement where the
/// coefficient functions `-φ1`, `-φ2` have a piecewise-linear minimum.
pub fn stable_meet(
    d1: &ToricDivisor,
    d2: &ToricDivisor,
) -> Result<(Fan, ToricDivisor), ToricError> {
    if d1.fan != d2.fan {
        return Err(ToricError::DifferentFans);
    }
    let fan = refine_for(d1, d2)?;
    let coeffs: Vec<Rat> = fan
        .rays
        .iter()
        .map(|v| {
            let a = d1.coefficient_at(v);
            let b = d2.coefficient_at(v);
            if a < b {
                a
            } else {
                b
            }
        })
        .collect();
    let meet = ToricDivisor::new(fan.clone(), coeffs)?;
    Ok((fan, meet))
}

/// `D1 ∨ D2 = -((-D1) ∧ (-D2))`.
pub fn stable_join(
    d1: &ToricDivisor,
    d2: &ToricDivisor,
) -> Result<(Fan, ToricDivisor), ToricError> {
    let (fan, m) = stable_meet(&d1.neg(), &d2.neg())?;
    Ok((fan, m.neg()))
}

/// Stellar subdivision of a smooth two-dimensional cone `{i, j}`, inserting
/// the ray `v_i + v_j` at the end of the ray list.
pub fn blowup_fan(f: &Fan, cone: &[usize]) -> Result<Fan, ToricError> {
    if f.dim() != 2 {
        return Err(ToricError::Unsupported(f.dim()));
    }
    let mut c = cone.to_vec();
    c.sort_unstable();
    let Some(pos) = f.cones.iter().position(|x| *x == c) else {
        return Err(ToricError::NonSmooth(c));
    };
    let (a, b) = (&f.rays[c[0]], &f.rays[c[1]]);
    let det = &a[0] * &b[1] - &a[1] * &b[0];
    if det.abs() != Rat::one() {
        return Err(ToricError::NonSmooth(c));
    }
    let mut rays = f.rays.clone();
    rays.push(a + b);
    let new = rays.len() - 1;
    let mut cones = f.cones.clone();
    cones.remove(pos);
    cones.push(vec![c[0], new]);
    cones.push(vec![c[1], new]);
    Fan::new(rays, cones)
}
