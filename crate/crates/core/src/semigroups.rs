//! Finitely generated subsemigroups of `Z^d` and graded semigroups.
//!
//! Membership searches and window enumerations run over `i64`; generator sets
//! are desk-sized, so overflow is reported rather than silently wrapped.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashSet};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactgeom::{hull, ConeGen, GeomError, Polytope};
use crate::linalg;
use crate::lp;
use crate::rational::{int, primitive, Rat, RatVector};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SemigroupError {
    #[error("generator list is empty")]
    Empty,
    #[error("vector {0} is not integral")]
    NotIntegral(RatVector),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("integer overflow while enumerating")]
    Overflow,
    #[error("level 1 does not contain the origin")]
    MissingOrigin,
    #[error("levels are not closed under addition: S_{k} + S_{l} contains {point} outside S_{sum}", sum = k + l)]
    NotClosed { k: u32, l: u32, point: RatVector },
    #[error("K is not contained in the interior of the hull C_1 (vertex {0})")]
    NotInterior(RatVector),
    #[error("window verification failed at {0}")]
    VerificationFailed(RatVector),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

type IVec = Vec<i64>;

fn to_ivec(v: &RatVector) -> Result<IVec, SemigroupError> {
    let b = v
        .to_bigints()
        .ok_or_else(|| SemigroupError::NotIntegral(v.clone()))?;
    b.iter()
        .map(|x| x.to_i64().ok_or(SemigroupError::Overflow))
        .collect()
}

fn from_ivec(v: &[i64]) -> RatVector {
    RatVector::from_ints(v)
}

fn idot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn iadd(a: &[i64], b: &[i64]) -> IVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn isub(a: &[i64], b: &[i64]) -> IVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Generators of a subsemigroup of `Z^d`, sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GensDoc", into = "GensDoc")]
pub struct SemigroupGens {
    d: usize,
    gens: Vec<RatVector>,
    ints: Vec<IVec>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GensDoc {
    d: usize,
    gens: Vec<RatVector>,
}

impl TryFrom<GensDoc> for SemigroupGens {
    type Error = SemigroupError;
    fn try_from(doc: GensDoc) -> Result<Self, SemigroupError> {
        let s = SemigroupGens::new(doc.gens)?;
        if s.d != doc.d {
            return Err(SemigroupError::DimensionMismatch {
                expected: doc.d,
                found: s.d,
            });
        }
        Ok(s)
    }
}

impl From<SemigroupGens> for GensDoc {
    fn from(s: SemigroupGens) -> Self {
        GensDoc {
            d: s.d,
            gens: s.gens,
        }
    }
}

impl SemigroupGens {
    pub fn new(gens: Vec<RatVector>) -> Result<Self, SemigroupError> {
        let d = gens.first().ok_or(SemigroupError::Empty)?.dim();
        for g in &gens {
            if g.dim() != d {
                return Err(SemigroupError::DimensionMismatch {
                    expected: d,
                    found: g.dim(),
                });
            }
            to_ivec(g)?;
        }
        let mut gens = gens;
        gens.sort();
        gens.dedup();
        let ints = gens.iter().map(to_ivec).collect::<Result<_, _>>()?;
        Ok(SemigroupGens { d, gens, ints })
    }

    pub fn from_ints(gens: &[&[i64]]) -> Result<Self, SemigroupError> {
        Self::new(gens.iter().map(|g| RatVector::from_ints(g)).collect())
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn gens(&self) -> &[RatVector] {
        &self.gens
    }

    fn nonzero_ints(&self) -> Vec<IVec> {
        self.ints
            .iter()
            .filter(|g| g.iter().any(|&x| x != 0))
            .cloned()
            .collect()
    }

    /// An integer functional positive on every nonzero generator, if the
    /// cone is salient.
    pub fn grading(&self) -> Option<IVec> {
        let nz = self.nonzero_ints();
        if nz.is_empty() {
            return Some(vec![0; self.d]);
        }
        let rows: Vec<Vec<Rat>> = nz
            .iter()
            .map(|g| g.iter().map(|&x| int(x)).collect())
            .collect();
        let ones = vec![int(1); rows.len()];
        let w = lp::feasible_free(&[], &[], &rows, &ones, self.d)?;
        primitive(&w).iter().map(|x| x.to_i64()).collect()
    }
}

/// Hermite basis of the group generated by `F`.
pub fn group_closure(f: &SemigroupGens) -> Vec<RatVector> {
    let m: Vec<Vec<BigInt>> = f
        .ints
        .iter()
        .map(|g| g.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let h = linalg::hermite(&m);
    h.h[..h.rank]
        .iter()
        .map(|r| RatVector::from_bigints(r))
        .collect()
}

/// True iff the integer vector `a` lies in the group with Hermite basis `basis`.
pub fn in_group(basis: &[RatVector], a: &RatVector) -> bool {
    match linalg::coordinates(basis, a) {
        Some(c) => c.iter().all(|x| x.is_integer()),
        None => false,
    }
}

/// Integer membership test for a group given by echelon (Hermite) rows.
struct EchelonLattice {
    rows: Vec<(usize, IVec)>,
}

impl EchelonLattice {
    fn new(basis: &[RatVector]) -> Option<Self> {
        let rows = basis
            .iter()
            .map(|b| {
                let r = b.to_i64s()?;
                let pivot = r.iter().position(|&x| x != 0)?;
                Some((pivot, r))
            })
            .collect::<Option<Vec<_>>>()?;
        Some(EchelonLattice { rows })
    }

    fn contains(&self, a: &[i64]) -> bool {
        let mut x = a.to_vec();
        for (c, r) in &self.rows {
            if x[*c] % r[*c] != 0 {
                return false;
            }
            let q = x[*c] / r[*c];
            for (xi, ri) in x.iter_mut().zip(r) {
                *xi -= q * ri;
            }
        }
        x.iter().all(|&v| v == 0)
    }
}

/// The rational cone spanned by `F`, in canonical form.
pub fn cone_closure(f: &SemigroupGens) -> ConeGen {
    ConeGen {
        dim: f.d,
        generators: f.gens.clone(),
    }
    .normalize()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Membership {
    /// Coefficients, one per generator in canonical order.
    Member(Vec<u64>),
    NotMember,
    /// Not found with coefficients up to the bound, and the bound does not
    /// rule out larger representations.
    Unknown,
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member(_))
    }
}

struct Search<'a> {
    gens: &'a [IVec],
    bound: u64,
    grading: Option<&'a [i64]>,
    dead: HashSet<(usize, IVec)>,
}

impl Search<'_> {
    fn run(&mut self, i: usize, r: &IVec, coeffs: &mut Vec<u64>) -> bool {
        if r.iter().all(|&x| x == 0) {
            coeffs[i..].iter_mut().for_each(|c| *c = 0);
            return true;
        }
        if i == self.gens.len() || self.dead.contains(&(i, r.clone())) {
            return false;
        }
        let g = &self.gens[i];
        let mut cap = self.bound;
        if let Some(w) = self.grading {
            let wr = idot(w, r);
            if wr < 0 {
                return false;
            }
            cap = cap.min((wr / idot(w, g)) as u64);
        }
        let mut cur = r.clone();
        for c in 0..=cap {
            coeffs[i] = c;
            if self.run(i + 1, &cur, coeffs) {
                return true;
            }
            cur = isub(&cur, g);
        }
        self.dead.insert((i, r.clone()));
        false
    }
}

/// Bounded membership of `a` in the semigroup generated by `F`.
pub fn membership(
    f: &SemigroupGens,
    a: &RatVector,
    bound: u64,
) -> Result<Membership, SemigroupError> {
    if a.dim() != f.d {
        return Err(SemigroupError::DimensionMismatch {
            expected: f.d,
            found: a.dim(),
        });
    }
    let target = to_ivec(a)?;
    if !in_group(&group_closure(f), a) && !a.is_zero() {
        return Ok(Membership::NotMember);
    }
    if !(ConeGen {
        dim: f.d,
        generators: f.gens.clone(),
    })
    .contains(a)
    {
        return Ok(Membership::NotMember);
    }
    let gens = f.nonzero_ints();
    let grading = f.grading();
    let mut s = Search {
        gens: &gens,
        bound,
        grading: grading.as_deref(),
        dead: HashSet::new(),
    };
    let mut coeffs = vec![0u64; gens.len()];
    if s.run(0, &target, &mut coeffs) {
        let mut full = Vec::with_capacity(f.ints.len());
        let mut it = coeffs.into_iter();
        for g in &f.ints {
            full.push(if g.iter().all(|&x| x == 0) {
                0
            } else {
                it.next().unwrap()
            });
        }
        return Ok(Membership::Member(full));
    }
    let conclusive = match &grading {
        Some(w) => {
            let wa = idot(w, &target);
            let min_w = gens.iter().map(|g| idot(w, g)).min().unwrap_or(1);
            bound >= (wa / min_w).max(0) as u64
        }
        None => false,
    };
    Ok(if conclusive {
        Membership::NotMember
    } else {
        Membership::Unknown
    })
}

/// Exact membership when the cone is salient (the bound is chosen large
/// enough to be conclusive).
/// Integer points `y` of the group with `y = Σ r_i g_i`, `0 <= r_i < 1`.
fn parallelepiped_points(basis: &[RatVector], group: &[RatVector], d: usize) -> Vec<IVec> {
    let lo: IVec = (0..d)
        .map(|j| {
            basis
                .iter()
                .map(|g| g[j].to_integer().to_i64().unwrap().min(0))
                .sum()
        })
        .collect();
    let hi: IVec = (0..d)
        .map(|j| {
            basis
                .iter()
                .map(|g| g[j].to_integer().to_i64().unwrap().max(0))
                .sum()
        })
        .collect();
    let mut out = Vec::new();
    for_each_box_point(&lo, &hi, |p| {
        let v = from_ivec(p);
        if !in_group(group, &v) {
            return;
        }
        if let Some(r) = linalg::coordinates(basis, &v) {
            if r.iter().all(|x| !x.is_negative() && *x < int(1)) {
                out.push(p.to_vec());
            }
        }
    });
    out
}

fn for_each_box_point(lo: &[i64], hi: &[i64], mut f: impl FnMut(&[i64])) {
    let d = lo.len();
    if lo.iter().zip(hi).any(|(a, b)| a > b) {
        return;
    }
    let mut cur = lo.to_vec();
    loop {
        f(&cur);
        let mut i = d;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if cur[i] < hi[i] {
                cur[i] += 1;
                cur[i + 1..d].copy_from_slice(&lo[i + 1..d]);
                break;
            }
        }
    }
}

/// Simplicial cones spanned by generators that together cover the cone.
fn simplicial_cover(f: &SemigroupGens) -> Result<Vec<Vec<RatVector>>, SemigroupError> {
    let mut pts: Vec<RatVector> = f.gens.clone();
    pts.push(RatVector::zeros(f.d));
    let p = hull(&pts)?;
    let origin = RatVector::zeros(f.d);
    let mut cones = Vec::new();
    if p.affine_dim() == 0 {
        return Ok(cones);
    }
    for facet in p.facets() {
        if facet.value(&origin).is_zero() {
            continue;
        }
        let face: Vec<RatVector> = p
            .vertices()
            .iter()
            .filter(|v| facet.value(v).is_zero())
            .cloned()
            .collect();
        for s in hull(&face)?.triangulate() {
            cones.push(s);
        }
    }
    // A segment hull (rank one): the facet opposite the origin is a point.
    Ok(cones)
}

/// Report for [`khovanskii_shift`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftReport {
    pub shift: RatVector,
    /// Upper corner `W` of the verification window (coordinates in `[0, W]`,
    /// or `[-W, W]` when some generator has a negative coordinate).
    pub window: i64,
    pub points_checked: usize,
    pub certified: bool,
}

/// Is `s` a valid shift by the parallelepiped criterion: for each simplicial
/// cone of the cover, every group point of its half-open parallelepiped
/// translated by `s` lies in the semigroup.
fn parallelepiped_criterion(
    elems: &GradedElements,
    cover: &[(Vec<RatVector>, Vec<IVec>)],
    s: &IVec,
) -> bool {
    cover
        .iter()
        .all(|(_, pts)| pts.iter().all(|y| elems.contains(&iadd(y, s))))
}

/// The shift obtained from the zonotope `Y = {Σ r_i f_i : -1 <= r_i <= 0}`:
/// each `y` in the group is an integer combination; its negative part lies
/// in `S` and absorbs `y`.
fn zonotope_shift(f: &SemigroupGens) -> Result<IVec, SemigroupError> {
    let gens = f.nonzero_ints();
    let d = f.d;
    let lo: IVec = (0..d)
        .map(|j| -gens.iter().map(|g| g[j].max(0)).sum::<i64>())
        .collect();
    let hi: IVec = (0..d)
        .map(|j| -gens.iter().map(|g| g[j].min(0)).sum::<i64>())
        .collect();
    let big_gens: Vec<Vec<BigInt>> = gens
        .iter()
        .map(|g| g.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let h = linalg::hermite(&big_gens);
    let basis: Vec<RatVector> = h.h[..h.rank]
        .iter()
        .map(|r| RatVector::from_bigints(r))
        .collect();
    let mut shift = vec![0i64; d];
    let mut err = None;
    for_each_box_point(&lo, &hi, |p| {
        if err.is_some() {
            return;
        }
        let v = from_ivec(p);
        let Some(c) = linalg::coordinates(&basis, &v) else {
            return;
        };
        if !c.iter().all(|x| x.is_integer()) {
            return;
        }
        // Is p in Y? Solve Σ r_i f_i = p with -1 <= r_i <= 0 by LP.
        let k = gens.len();
        let a: Vec<Vec<Rat>> = (0..d)
            .map(|j| gens.iter().map(|g| int(-g[j])).collect())
            .collect();
        let mut rows = a.clone();
        let mut rhs: Vec<Rat> = p.iter().map(|&x| int(x)).collect();
        // r = -t, 0 <= t <= 1 as t + slack = 1.
        for row in rows.iter_mut() {
            row.extend(std::iter::repeat_n(int(0), k));
        }
        for i in 0..k {
            let mut row = vec![int(0); 2 * k];
            row[i] = int(1);
            row[k + i] = int(1);
            rows.push(row);
            rhs.push(int(1));
        }
        if lp::feasible_point(&rows, &rhs, 2 * k).is_none() {
            return;
        }
        // Integer coefficients of p in terms of the generators.
        let coeffs: Vec<BigInt> = {
            let mut z = vec![BigInt::zero(); h.u.len()];
            for (i, ci) in c.iter().enumerate() {
                z[i] = ci.to_integer();
            }
            (0..k)
                .map(|j| z.iter().zip(&h.u).map(|(zi, row)| zi * &row[j]).sum())
                .collect()
        };
        for (cj, g) in coeffs.iter().zip(&gens) {
            if cj.is_negative() {
                let Some(m) = (-cj).to_i64() else {
                    err = Some(SemigroupError::Overflow);
                    return;
                };
                for (s, x) in shift.iter_mut().zip(g) {
                    *s += m * x;
                }
            }
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(shift),
    }
}

/// Finds `s ∈ S` with `A ∩ (s + C) ⊆ S` and certifies it on a window.
pub fn khovanskii_shift(f: &SemigroupGens) -> Result<ShiftReport, SemigroupError> {
    let group = group_closure(f);
    let d = f.d;
    let Some(w) = f.grading() else {
        let s = zonotope_shift(f)?;
        return Ok(ShiftReport {
            shift: from_ivec(&s),
            window: 0,
            points_checked: 0,
            certified: false,
        });
    };
    let gens = f.nonzero_ints();
    let cover: Vec<(Vec<RatVector>, Vec<IVec>)> = simplicial_cover(f)?
        .into_iter()
        .map(|b| {
            let pts = parallelepiped_points(&b, &group, d);
            (b, pts)
        })
        .collect();
    let fallback = zonotope_shift(f)?;
    let limit = idot(&w, &fallback);
    let reach = cover
        .iter()
        .flat_map(|(_, pts)| pts.iter().map(|y| idot(&w, y)))
        .max()
        .unwrap_or(0);
    let step = gens.iter().map(|g| idot(&w, g)).max().unwrap_or(1);
    // Candidates are scanned by grade; the element bitmap grows on demand.
    let mut horizon = (64 * step).min(limit);
    let mut elems = GradedElements::new(&gens, &w, d, horizon + reach)?;
    // Semigroup elements in increasing (grade, lex) order.
    let mut heap: BinaryHeap<Reverse<(i64, IVec)>> = BinaryHeap::new();
    let mut seen: HashSet<IVec> = HashSet::new();
    heap.push(Reverse((0, vec![0; d])));
    seen.insert(vec![0; d]);
    let mut shift = fallback.clone();
    while let Some(Reverse((grade, s))) = heap.pop() {
        if grade > limit {
            break;
        }
        if grade > horizon {
            horizon = (2 * horizon).max(grade).min(limit);
            elems = GradedElements::new(&gens, &w, d, horizon + reach)?;
        }
        if parallelepiped_criterion(&elems, &cover, &s) {
            shift = s;
            break;
        }
        for g in &gens {
            let n = iadd(&s, g);
            if seen.insert(n.clone()) {
                heap.push(Reverse((idot(&w, &n), n)));
            }
        }
    }
    let (window, checked) = verify_shift(f, &w, &shift)?;
    Ok(ShiftReport {
        shift: from_ivec(&shift),
        window,
        points_checked: checked,
        certified: true,
    })
}

/// All semigroup elements of grade at most `max_grade`.
fn enumerate_by_grade(gens: &[IVec], w: &[i64], d: usize, max_grade: i64) -> HashSet<IVec> {
    let mut seen: HashSet<IVec> = HashSet::new();
    let mut stack = vec![vec![0; d]];
    seen.insert(vec![0; d]);
    while let Some(x) = stack.pop() {
        for g in gens {
            let n = iadd(&x, g);
            if idot(w, &n) <= max_grade && seen.insert(n.clone()) {
                stack.push(n);
            }
        }
    }
    seen
}

/// Semigroup elements of grade at most `max_grade`, stored as a bitmap over
/// a box that contains all of them.
struct GradedElements {
    w: IVec,
    max_grade: i64,
    lo: IVec,
    hi: IVec,
    strides: Vec<usize>,
    bits: Vec<u64>,
}

/// Largest bitmap built before reporting overflow.
const MAX_BITMAP_POINTS: u128 = 1 << 31;

impl GradedElements {
    fn new(gens: &[IVec], w: &[i64], d: usize, max_grade: i64) -> Result<Self, SemigroupError> {
        // x = Σ c_i g_i with Σ c_i w·g_i <= G lies in conv(0, G g_i / w·g_i).
        let mut lo = vec![0i64; d];
        let mut hi = vec![0i64; d];
        for g in gens {
            let gw = idot(w, g);
            for j in 0..d {
                let num = i128::from(max_grade) * i128::from(g[j]);
                let q = num.div_euclid(i128::from(gw));
                let c = if num.rem_euclid(i128::from(gw)) == 0 {
                    q
                } else {
                    q + 1
                };
                lo[j] = lo[j].min(i64::try_from(q).map_err(|_| SemigroupError::Overflow)?);
                hi[j] = hi[j].max(i64::try_from(c).map_err(|_| SemigroupError::Overflow)?);
            }
        }
        let mut strides = vec![0usize; d];
        let mut total: u128 = 1;
        for j in (0..d).rev() {
            strides[j] = total as usize;
            total *= (hi[j] - lo[j] + 1) as u128;
            if total > MAX_BITMAP_POINTS {
                return Err(SemigroupError::Overflow);
            }
        }
        let mut bits = vec![0u64; (total as usize).div_ceil(64)];
        let steps: Vec<(i64, i64)> = gens
            .iter()
            .map(|g| {
                (
                    g.iter().zip(&strides).map(|(x, s)| x * *s as i64).sum(),
                    idot(w, g),
                )
            })
            .collect();
        let origin: usize = lo
            .iter()
            .zip(&strides)
            .map(|(l, s)| (-l) as usize * s)
            .sum();
        bits[origin / 64] |= 1 << (origin % 64);
        let mut stack = vec![(origin, 0i64)];
        while let Some((idx, grade)) = stack.pop() {
            for &(delta, gw) in &steps {
                let ng = grade + gw;
                if ng > max_grade {
                    continue;
                }
                let n = (idx as i64 + delta) as usize;
                if bits[n / 64] >> (n % 64) & 1 == 0 {
                    bits[n / 64] |= 1 << (n % 64);
                    stack.push((n, ng));
                }
            }
        }
        Ok(GradedElements {
            w: w.to_vec(),
            max_grade,
            lo,
            hi,
            strides,
            bits,
        })
    }

    /// Membership for points of grade at most `max_grade`.
    fn contains(&self, p: &[i64]) -> bool {
        debug_assert!(idot(&self.w, p) <= self.max_grade);
        if p.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .any(|(x, (l, h))| x < l || x > h)
        {
            return false;
        }
        let n: usize = p
            .iter()
            .zip(&self.lo)
            .zip(&self.strides)
            .map(|((x, l), s)| (x - l) as usize * s)
            .sum();
        self.bits[n / 64] >> (n % 64) & 1 == 1
    }
}

/// Brute-force check that every group point of `s + C` in the window lies
/// in `S`. Returns the window size and number of points checked.
pub fn verify_shift(
    f: &SemigroupGens,
    w: &[i64],
    s: &IVec,
) -> Result<(i64, usize), SemigroupError> {
    let d = f.d;
    let gens = f.nonzero_ints();
    let max_coord = gens
        .iter()
        .chain(std::iter::once(s))
        .flatten()
        .map(|x| x.abs())
        .max()
        .unwrap_or(0)
        .max(1);
    let window = 10 * max_coord;
    let negative = gens.iter().flatten().any(|&x| x < 0);
    let lo = vec![if negative { -window } else { 0 }; d];
    let hi = vec![window; d];
    // Largest grade in the window.
    let max_grade: i64 = w
        .iter()
        .zip(lo.iter().zip(&hi))
        .map(|(&wi, (&l, &h))| (wi * l).max(wi * h))
        .sum();
    let elems = GradedElements::new(&gens, w, d, max_grade)?;
    let group = group_closure(f);
    let lattice = EchelonLattice::new(&group).ok_or(SemigroupError::Overflow)?;
    let cone_ineqs: Vec<IVec> = cone_closure(f)
        .dual()
        .generators
        .iter()
        .map(|v| v.to_i64s().ok_or(SemigroupError::Overflow))
        .collect::<Result<_, _>>()?;
    let mut checked = 0usize;
    let mut failure = None;
    for_each_box_point(&lo, &hi, |p| {
        if failure.is_some() {
            return;
        }
        let rel = isub(p, s);
        if cone_ineqs.iter().any(|y| idot(y, &rel) < 0) {
            return;
        }
        if !lattice.contains(p) {
            return;
        }
        checked += 1;
        if !elems.contains(p) {
            failure = Some(from_ivec(p));
        }
    });
    match failure {
        Some(p) => Err(SemigroupError::VerificationFailed(p)),
        None => Ok((window, checked)),
    }
}

/// Checks whether `s` is a valid shift on the window without searching.
pub fn is_valid_shift(f: &SemigroupGens, s: &RatVector) -> Result<bool, SemigroupError> {
    let w = f.grading().ok_or(SemigroupError::Empty)?;
    match verify_shift(f, &w, &to_ivec(s)?) {
        Ok(_) => Ok(true),
        Err(SemigroupError::VerificationFailed(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// A graded semigroup `S = ∪ S_m` stored explicitly up to a maximal level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GradedDoc", into = "GradedDoc")]
pub struct GradedSemigroup {
    d: usize,
    levels: BTreeMap<u32, BTreeSet<IVec>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GradedDoc {
    d: usize,
    levels: BTreeMap<u32, Vec<RatVector>>,
}

impl TryFrom<GradedDoc> for GradedSemigroup {
    type Error = SemigroupError;
    fn try_from(doc: GradedDoc) -> Result<Self, SemigroupError> {
        GradedSemigroup::new(doc.d, doc.levels)
    }
}

impl From<GradedSemigroup> for GradedDoc {
    fn from(s: GradedSemigroup) -> Self {
        GradedDoc {
            d: s.d,
            levels: s
                .levels
                .iter()
                .map(|(m, l)| (*m, l.iter().map(|v| from_ivec(v)).collect()))
                .collect(),
        }
    }
}

impl GradedSemigroup {
    /// Validates `0 ∈ S_1` and `S_k + S_l ⊆ S_{k+l}` for stored levels.
    pub fn new(d: usize, levels: BTreeMap<u32, Vec<RatVector>>) -> Result<Self, SemigroupError> {
        let mut stored: BTreeMap<u32, BTreeSet<IVec>> = BTreeMap::new();
        for (m, pts) in levels {
            let mut set = BTreeSet::new();
            for p in &pts {
                if p.dim() != d {
                    return Err(SemigroupError::DimensionMismatch {
                        expected: d,
                        found: p.dim(),
                    });
                }
                set.insert(to_ivec(p)?);
            }
            stored.insert(m, set);
        }
        if !stored.get(&1).is_some_and(|s| s.contains(&vec![0; d])) {
            return Err(SemigroupError::MissingOrigin);
        }
        for (&k, sk) in &stored {
            for (&l, sl) in stored.range(k..) {
                let Some(skl) = stored.get(&(k + l)) else {
                    continue;
                };
                for a in sk {
                    for b in sl {
                        let c = iadd(a, b);
                        if !skl.contains(&c) {
                            return Err(SemigroupError::NotClosed {
                                k,
                                l,
                                point: from_ivec(&c),
                            });
                        }
                    }
                }
            }
        }
        Ok(GradedSemigroup { d, levels: stored })
    }

    /// Levels `1..=m_max` of the semigroup generated by pairs `(level, x)`
    /// with `level >= 1`.
    pub fn from_generators(
        d: usize,
        gens: &[(u32, RatVector)],
        m_max: u32,
    ) -> Result<Self, SemigroupError> {
        let gi: Vec<(u32, IVec)> = gens
            .iter()
            .map(|(k, v)| {
                if v.dim() != d {
                    return Err(SemigroupError::DimensionMismatch {
                        expected: d,
                        found: v.dim(),
                    });
                }
                Ok((*k, to_ivec(v)?))
            })
            .collect::<Result<_, _>>()?;
        let mut sets: Vec<BTreeSet<IVec>> = vec![BTreeSet::new(); m_max as usize + 1];
        sets[0].insert(vec![0; d]);
        for m in 1..=m_max as usize {
            let mut cur = BTreeSet::new();
            for (k, x) in &gi {
                let k = *k as usize;
                if k == 0 || k > m {
                    continue;
                }
                for p in &sets[m - k] {
                    cur.insert(iadd(p, x));
                }
            }
            sets[m] = cur;
        }
        let levels = (1..=m_max)
            .map(|m| (m, sets[m as usize].iter().map(|v| from_ivec(v)).collect()))
            .collect();
        Self::new(d, levels)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn max_level(&self) -> u32 {
        self.levels.keys().next_back().copied().unwrap_or(0)
    }

    pub fn level(&self, m: u32) -> Vec<RatVector> {
        self.levels
            .get(&m)
            .map(|s| s.iter().map(|v| from_ivec(v)).collect())
            .unwrap_or_default()
    }

    pub fn contains(&self, m: u32, x: &[i64]) -> bool {
        self.levels.get(&m).is_some_and(|s| s.contains(x))
    }

    /// Closed convex hull of `S_m / m` over stored levels.
    pub fn hull_c1(&self) -> Result<Polytope, SemigroupError> {
        let pts: Vec<RatVector> = self
            .levels
            .iter()
            .flat_map(|(m, s)| {
                let inv = Rat::new(1.into(), (*m).into());
                s.iter()
                    .map(move |v| from_ivec(v).scale(&inv))
                    .collect::<Vec<_>>()
            })
            .collect();
        Ok(hull(&pts)?)
    }
}

/// Integer points of `m·K`.
pub fn dilated_lattice_points(k: &Polytope, m: u32) -> Vec<IVec> {
    let mr = int(m as i64);
    let d = k.dim();
    let lo: IVec = (0..d)
        .map(|i| {
            k.vertices()
                .iter()
                .map(|v| (&v[i] * &mr).floor().to_integer().to_i64().unwrap())
                .min()
                .unwrap()
        })
        .collect();
    let hi: IVec = (0..d)
        .map(|i| {
            k.vertices()
                .iter()
                .map(|v| (&v[i] * &mr).ceil().to_integer().to_i64().unwrap())
                .max()
                .unwrap()
        })
        .collect();
    let mut out = Vec::new();
    for_each_box_point(&lo, &hi, |p| {
        let x = from_ivec(p);
        let ok = k
            .equations()
            .iter()
            .all(|e| e.normal.dot(&x) == &e.offset * &mr)
            && k.facets()
                .iter()
                .all(|f| f.normal.dot(&x) >= &f.offset * &mr);
        if ok {
            out.push(p.to_vec());
        }
    });
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SaturationReport {
    /// Least `m0` such that every level in `[m0, m_max]` is saturated on `K`.
    pub m0: Option<u32>,
    pub m_max: u32,
    /// Levels at which some point of `K ∩ Λ/m` is missing from `S_m/m`.
    pub failing_levels: Vec<u32>,
}

/// Least level from which `K ∩ Λ/m = K ∩ S_m/m` holds through `m_max`.
pub fn saturation_level(
    s: &GradedSemigroup,
    k: &Polytope,
    m_max: u32,
) -> Result<SaturationReport, SemigroupError> {
    if k.dim() != s.d {
        return Err(SemigroupError::DimensionMismatch {
            expected: s.d,
            found: k.dim(),
        });
    }
    let c1 = s.hull_c1()?;
    for v in k.vertices() {
        if !c1.interior_contains(v) {
            return Err(SemigroupError::NotInterior(v.clone()));
        }
    }
    let ok: Vec<(u32, bool)> = (1..=m_max)
        .map(|m| {
            let pts = dilated_lattice_points(k, m);
            (m, pts.iter().all(|p| s.contains(m, p)))
        })
        .collect();
    let failing: Vec<u32> = ok.iter().filter(|(_, b)| !b).map(|(m, _)| *m).collect();
    let m0 = match failing.last() {
        None => Some(1),
        Some(&last) if last < m_max => Some(last + 1),
        Some(_) => None,
    };
    Ok(SaturationReport {
        m0,
        m_max,
        failing_levels: failing,
    })
}

/// Convenience: the counts `|K ∩ Λ/m|` and `|K ∩ S_m/m|` at level `m`.
pub fn level_counts(s: &GradedSemigroup, k: &Polytope, m: u32) -> (usize, usize) {
    let pts = dilated_lattice_points(k, m);
    let inside = pts.iter().filter(|p| s.contains(m, p)).count();
    (pts.len(), inside)
}

/// Grade-ordered elements of `S` up to `max_grade` (test helper).
pub fn elements_up_to(f: &SemigroupGens, max_grade: i64) -> Option<Vec<RatVector>> {
    let w = f.grading()?;
    let mut v: Vec<IVec> = enumerate_by_grade(&f.nonzero_ints(), &w, f.d, max_grade)
        .into_iter()
        .collect();
    v.sort();
    Some(v.iter().map(|x| from_ivec(x)).collect())
}
