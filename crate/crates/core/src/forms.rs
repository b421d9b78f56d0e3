//! Symmetric multilinear forms, hyperbolicity checks, inertia, and the
//! kernel statements for negative semidefinite configurations.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, Matrix};
use crate::rational::{int, rat_from_json, rat_to_json, Rat, RatVector};
use crate::roots;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FormError {
    #[error("expected {expected} arguments, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("vector of dimension {found} does not match rank {expected}")]
    Rank { expected: usize, found: usize },
    #[error("matrix is not square and symmetric")]
    NotSymmetric,
    #[error("order must be at least {0}")]
    Order(usize),
    #[error("self-product of argument {index} is not positive: {value}")]
    NonPositive { index: usize, value: Rat },
    #[error("precondition failed: {0}")]
    Precondition(String),
}

/// Symmetric `n`-linear form on `Q^r`, stored on sorted index multisets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymMultiForm {
    order: usize,
    rank: usize,
    values: BTreeMap<Vec<usize>, Rat>,
}

impl SymMultiForm {
    pub fn new(order: usize, rank: usize) -> Self {
        SymMultiForm {
            order,
            rank,
            values: BTreeMap::new(),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Sets the value on the multiset `idx` (any order).
    pub fn set(&mut self, idx: &[usize], v: Rat) -> Result<(), FormError> {
        if idx.len() != self.order {
            return Err(FormError::Arity {
                expected: self.order,
                found: idx.len(),
            });
        }
        if let Some(&bad) = idx.iter().find(|&&i| i >= self.rank) {
            return Err(FormError::Rank {
                expected: self.rank,
                found: bad,
            });
        }
        let mut k = idx.to_vec();
        k.sort_unstable();
        if v.is_zero() {
            self.values.remove(&k);
        } else {
            self.values.insert(k, v);
        }
        Ok(())
    }

    pub fn get(&self, idx: &[usize]) -> Rat {
        let mut k = idx.to_vec();
        k.sort_unstable();
        self.values.get(&k).cloned().unwrap_or_else(Rat::zero)
    }

    /// Bilinear form of a symmetric matrix.
    pub fn from_gram(g: &GramMatrix) -> Self {
        let r = g.rank();
        let mut f = SymMultiForm::new(2, r);
        for i in 0..r {
            for j in i..r {
                f.set(&[i, j], g.m[i][j].clone()).unwrap();
            }
        }
        f
    }

    /// Multilinear expansion over all index tuples.
    pub fn eval(&self, xs: &[&RatVector]) -> Result<Rat, FormError> {
        if xs.len() != self.order {
            return Err(FormError::Arity {
                expected: self.order,
                found: xs.len(),
            });
        }
        for x in xs {
            if x.dim() != self.rank {
                return Err(FormError::Rank {
                    expected: self.rank,
                    found: x.dim(),
                });
            }
        }
        let mut total = Rat::zero();
        let mut idx = vec![0usize; self.order];
        loop {
            let v = self.get(&idx);
            if !v.is_zero() {
                let mut p = v;
                for (x, &i) in xs.iter().zip(&idx) {
                    if x[i].is_zero() {
                        p = Rat::zero();
                        break;
                    }
                    p *= &x[i];
                }
                total += p;
            }
            let mut k = self.order;
            loop {
                if k == 0 {
                    return Ok(total);
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < self.rank {
                    break;
                }
                idx[k] = 0;
            }
        }
    }

    /// `(x, ..., x)`.
    pub fn volume(&self, x: &RatVector) -> Result<Rat, FormError> {
        self.eval(&vec![x; self.order])
    }

    /// Bilinear form `(v, w) ↦ T(a_1, ..., a_{n-2}, v, w)`.
    pub fn contract(&self, fixed: &[&RatVector]) -> Result<GramMatrix, FormError> {
        if fixed.len() + 2 != self.order {
            return Err(FormError::Arity {
                expected: self.order - 2,
                found: fixed.len(),
            });
        }
        let r = self.rank;
        let m: Matrix = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        let ei = RatVector::unit(r, i);
                        let ej = RatVector::unit(r, j);
                        let mut args: Vec<&RatVector> = fixed.to_vec();
                        args.push(&ei);
                        args.push(&ej);
                        self.eval(&args).unwrap()
                    })
                    .collect()
            })
            .collect();
        Ok(GramMatrix { m })
    }
}

impl Serialize for SymMultiForm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut top = s.serialize_map(Some(3))?;
        top.serialize_entry("order", &self.order)?;
        top.serialize_entry("rank", &self.rank)?;
        let vals: BTreeMap<String, serde_json::Value> = self
            .values
            .iter()
            .map(|(k, v)| {
                (
                    k.iter()
                        .map(|i| i.to_string())
                        .collect::<Vec<_>>()
                        .join(","),
                    rat_to_json(v),
                )
            })
            .collect();
        top.serialize_entry("values", &vals)?;
        top.end()
    }
}

impl<'de> Deserialize<'de> for SymMultiForm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Doc {
            order: usize,
            rank: usize,
            values: BTreeMap<String, serde_json::Value>,
        }
        let doc = Doc::deserialize(d)?;
        let mut f = SymMultiForm::new(doc.order, doc.rank);
        for (k, v) in doc.values {
            let idx: Vec<usize> = k
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse()
                        .map_err(|_| de::Error::custom(format!("bad multiset {k}")))
                })
                .collect::<Result<_, _>>()?;
            let r = rat_from_json(&v)
                .ok_or_else(|| de::Error::custom(format!("not a rational: {v}")))?;
            f.set(&idx, r).map_err(de::Error::custom)?;
        }
        Ok(f)
    }
}

/// `(e_1, ..., e_n) = 1` and every value with a repeated index zero.
pub fn rectangle_form(n: usize) -> Result<SymMultiForm, FormError> {
    if n < 2 {
        return Err(FormError::Order(2));
    }
    let mut f = SymMultiForm::new(n, n);
    f.set(&(0..n).collect::<Vec<_>>(), Rat::one())?;
    Ok(f)
}

/// Exact symmetric matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GramDoc", into = "GramDoc")]
pub struct GramMatrix {
    m: Matrix,
}

#[derive(Serialize, Deserialize)]
struct GramDoc(Vec<RatVector>);

impl TryFrom<GramDoc> for GramMatrix {
    type Error = FormError;
    fn try_from(d: GramDoc) -> Result<Self, FormError> {
        GramMatrix::new(d.0.into_iter().map(|r| r.into_coords()).collect())
    }
}

impl From<GramMatrix> for GramDoc {
    fn from(g: GramMatrix) -> Self {
        GramDoc(g.m.into_iter().map(RatVector::new).collect())
    }
}

impl GramMatrix {
    pub fn new(m: Matrix) -> Result<Self, FormError> {
        let r = m.len();
        if m.iter().any(|row| row.len() != r) {
            return Err(FormError::NotSymmetric);
        }
        for i in 0..r {
            for j in 0..i {
                if m[i][j] != m[j][i] {
                    return Err(FormError::NotSymmetric);
                }
            }
        }
        Ok(GramMatrix { m })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self, FormError> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| int(x)).collect())
                .collect(),
        )
    }

    pub fn rank(&self) -> usize {
        self.m.len()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn pair(&self, x: &RatVector, y: &RatVector) -> Rat {
        let gy = linalg::mat_vec(&self.m, y.coords());
        x.coords()
            .iter()
            .zip(&gy)
            .fold(Rat::zero(), |acc, (a, b)| acc + a * b)
    }

    /// `B^T G B` for basis vectors `B` (the restriction to their span).
    pub fn restrict(&self, basis: &[RatVector]) -> GramMatrix {
        GramMatrix {
            m: basis
                .iter()
                .map(|a| basis.iter().map(|b| self.pair(a, b)).collect())
                .collect(),
        }
    }
}

/// Inertia `(n_plus, n_zero, n_minus)` by symmetric Gaussian reduction.
pub fn signature(g: &GramMatrix) -> (usize, usize, usize) {
    let mut a = g.m.clone();
    let n = a.len();
    let (mut pos, mut neg) = (0, 0);
    let mut k = 0;
    while k < n {
        if a[k][k].is_zero() {
            if let Some(p) = (k + 1..n).find(|&i| !a[i][i].is_zero()) {
                a.swap(k, p);
                for row in a.iter_mut() {
                    row.swap(k, p);
                }
            } else if let Some((i, j)) = (k..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !a[i][j].is_zero())
            {
                // Row/column i += row/column j gives diagonal 2 a_ij.
                for c in 0..n {
                    let t = a[j][c].clone();
                    a[i][c] += t;
                }
                for r in 0..n {
                    let t = a[r][j].clone();
                    a[r][i] += t;
                }
                if i != k {
                    a.swap(k, i);
                    for row in a.iter_mut() {
                        row.swap(k, i);
                    }
                }
            } else {
                break;
            }
        }
        let p = a[k][k].clone();
        if p.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &p;
            for c in k..n {
                let t = &f * &a[k][c];
                a[i][c] -= t;
            }
        }
        for i in k + 1..n {
            a[k][i] = Rat::zero();
            a[i][k] = Rat::zero();
        }
        k += 1;
    }
    (pos, n - pos - neg, neg)
}

/// Hodge index pattern: exactly one positive direction.
pub fn hodge_pattern(g: &GramMatrix) -> bool {
    signature(g).0 == 1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub samples: usize,
    /// Sample indices of the first failure per axiom, if any.
    pub positivity: Option<Vec<usize>>,
    pub homogeneity: Option<Vec<usize>>,
    pub concavity: Option<Vec<usize>>,
    pub reverse_cauchy_schwarz: Option<Vec<usize>>,
    pub passed: bool,
}

/// Non-decreasing index tuples of length `k` over `0..n`.
fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in multisets(n, k - 1) {
        let start = rest.last().copied().unwrap_or(0);
        for i in start..n {
            let mut v = rest.clone();
            v.push(i);
            out.push(v);
        }
    }
    out
}

/// Sample-based check of the hyperbolic axioms on `samples ⊂ A`.
pub fn hyperbolic_axioms_check(
    t: &SymMultiForm,
    samples: &[RatVector],
) -> Result<AxiomReport, FormError> {
    let n = t.order;
    let s = samples.len();
    let args = |idx: &[usize]| -> Vec<&RatVector> { idx.iter().map(|&i| &samples[i]).collect() };
    let mut positivity = None;
    for idx in multisets(s, n) {
        if !t.eval(&args(&idx))?.is_positive() {
            positivity = Some(idx);
            break;
        }
    }
    let mut homogeneity = None;
    let scalars = [Rat::new(1.into(), 2.into()), int(2), int(3)];
    'h: for idx in multisets(s, n) {
        let base = t.eval(&args(&idx))?;
        for sc in &scalars {
            let scaled = samples[idx[0]].scale(sc);
            let mut a = args(&idx);
            a[0] = &scaled;
            if t.eval(&a)? != sc * &base {
                homogeneity = Some(idx);
                break 'h;
            }
        }
    }
    let mut concavity = None;
    'c: for fixed in multisets(s, n - 1) {
        for x in 0..s {
            for y in x + 1..s {
                let mid = (&samples[x] + &samples[y]).scale(&Rat::new(1.into(), 2.into()));
                let f = |v: &RatVector| -> Result<Rat, FormError> {
                    let mut a = vec![v];
                    a.extend(args(&fixed));
                    t.eval(&a)
                };
                let lhs = f(&mid)?;
                let rhs = (f(&samples[x])? + f(&samples[y])?) / int(2);
                if lhs < rhs {
                    let mut w = fixed.clone();
                    w.extend([x, y]);
                    concavity = Some(w);
                    break 'c;
                }
            }
        }
    }
    let mut rcs = None;
    'r: for fixed in multisets(s, n - 2) {
        for b in 0..s {
            for c in b..s {
                let mut a = args(&fixed);
                let tri = |u: usize, v: usize| -> Result<Rat, FormError> {
                    let mut x = a.clone();
                    x.push(&samples[u]);
                    x.push(&samples[v]);
                    t.eval(&x)
                };
                let bc = tri(b, c)?;
                if &bc * &bc < tri(b, b)? * tri(c, c)? {
                    a.clear();
                    let mut w = fixed.clone();
                    w.extend([b, c]);
                    rcs = Some(w);
                    break 'r;
                }
            }
        }
    }
    let passed =
        positivity.is_none() && homogeneity.is_none() && concavity.is_none() && rcs.is_none();
    Ok(AxiomReport {
        samples: s,
        positivity,
        homogeneity,
        concavity,
        reverse_cauchy_schwarz: rcs,
        passed,
    })
}

/// `(x_1, ..., x_n) >= |x_1| ⋯ |x_n|` via `(x_1..x_n)^n >= Π (x_i, ..., x_i)`.
pub fn chain_inequality_check(t: &SymMultiForm, xs: &[RatVector]) -> Result<bool, FormError> {
    let n = t.order;
    if xs.len() != n {
        return Err(FormError::Arity {
            expected: n,
            found: xs.len(),
        });
    }
    let mut prod = Rat::one();
    for (i, x) in xs.iter().enumerate() {
        let v = t.volume(x)?;
        if !v.is_positive() {
            return Err(FormError::NonPositive { index: i, value: v });
        }
        prod *= v;
    }
    let mixed = t.eval(&xs.iter().collect::<Vec<_>>())?;
    if mixed.is_negative() {
        return Ok(false);
    }
    Ok(num_traits::pow(mixed, n) >= prod)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CastelnuovoReport {
    #[serde(with = "crate::rational::serde_rat")]
    pub lhs: Rat,
    #[serde(with = "crate::rational::serde_rat")]
    pub rhs: Rat,
    pub holds: bool,
}

/// `(D,D) <= 2 (D·P1)(D·P2)` for isotropic `P1, P2` with `P1·P2 = 1`.
pub fn castelnuovo_check(
    g: &GramMatrix,
    p1: &RatVector,
    p2: &RatVector,
    d: &RatVector,
) -> Result<CastelnuovoReport, FormError> {
    for v in [p1, p2, d] {
        if v.dim() != g.rank() {
            return Err(FormError::Rank {
                expected: g.rank(),
                found: v.dim(),
            });
        }
    }
    if !g.pair(p1, p1).is_zero() || !g.pair(p2, p2).is_zero() || !g.pair(p1, p2).is_one() {
        return Err(FormError::Precondition(
            "need P1² = P2² = 0 and P1·P2 = 1".into(),
        ));
    }
    let lhs = g.pair(d, d);
    let rhs = int(2) * g.pair(d, p1) * g.pair(d, p2);
    let holds = lhs <= rhs;
    Ok(CastelnuovoReport { lhs, rhs, holds })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PdcReport {
    pub neg_semidef: bool,
    pub kernel_basis: Vec<RatVector>,
    /// Connected components of the positivity graph.
    pub components: Vec<Vec<usize>>,
    /// `rank - rank(G)`, compared against the number of components.
    pub kernel_dim: usize,
}

/// Negative semidefiniteness and kernel of a configuration with
/// `Σ α_i v_i` orthogonal to every `v_j` and nonnegative off-diagonal.
pub fn pdc_analysis(g: &GramMatrix, alpha: &[Rat]) -> Result<PdcReport, FormError> {
    let r = g.rank();
    if alpha.len() != r {
        return Err(FormError::Rank {
            expected: r,
            found: alpha.len(),
        });
    }
    if let Some(i) = alpha.iter().position(|a| !a.is_positive()) {
        return Err(FormError::Precondition(format!(
            "alpha_{i} is not positive"
        )));
    }
    let f = linalg::mat_vec(&g.m, alpha);
    if let Some(j) = f.iter().position(|x| !x.is_zero()) {
        return Err(FormError::Precondition(format!("v_{j}·f = {} ≠ 0", f[j])));
    }
    for i in 0..r {
        for j in 0..r {
            if i != j && g.m[i][j].is_negative() {
                return Err(FormError::Precondition(format!(
                    "v_{i}·v_{j} = {} < 0",
                    g.m[i][j]
                )));
            }
        }
    }
    let (pos, _, _) = signature(g);
    // Components by union-find.
    let mut parent: Vec<usize> = (0..r).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let root = find(p, p[x]);
            p[x] = root;
        }
        p[x]
    }
    for i in 0..r {
        for j in i + 1..r {
            if !g.m[i][j].is_zero() {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut comps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..r {
        let root = find(&mut parent, i);
        comps.entry(root).or_default().push(i);
    }
    let mut components: Vec<Vec<usize>> = comps.into_values().collect();
    components.sort();
    let kernel_basis: Vec<RatVector> = components
        .iter()
        .map(|c| {
            let mut v = vec![Rat::zero(); r];
            for &i in c {
                v[i] = alpha[i].clone();
            }
            RatVector::new(v)
        })
        .collect();
    let kernel_dim = r - linalg::rank(&g.m);
    Ok(PdcReport {
        neg_semidef: pos == 0,
        kernel_basis,
        components,
        kernel_dim,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CalabiReport {
    pub holds: bool,
    /// Number of sampled tuples `a ∈ A^{n-1}` checked.
    pub tuples_checked: usize,
}

/// For an order `n+1` form: if `c = a1 - a2 ∈ V` with `c·a1^n = c·a2^n` and
/// every sampled `b_a` negative semidefinite on `V`, then `c` pairs to zero
/// with `V` under each `b_a`.
pub fn calabi_kernel_check(
    t: &SymMultiForm,
    a_samples: &[RatVector],
    v_basis: &[RatVector],
    a1: &RatVector,
    a2: &RatVector,
) -> Result<CalabiReport, FormError> {
    if t.order < 3 {
        return Err(FormError::Order(3));
    }
    let n = t.order - 1;
    let c = a1 - a2;
    if c.is_zero() {
        return Ok(CalabiReport {
            holds: true,
            tuples_checked: 0,
        });
    }
    if linalg::coordinates(v_basis, &c).is_none() {
        return Err(FormError::Precondition(format!(
            "a1 - a2 = {c} is not in V"
        )));
    }
    let hyp = |a: &RatVector| -> Result<Rat, FormError> {
        let mut args = vec![&c];
        args.extend(std::iter::repeat_n(a, n));
        t.eval(&args)
    };
    let (h1, h2) = (hyp(a1)?, hyp(a2)?);
    if h1 != h2 {
        return Err(FormError::Precondition(format!(
            "c·a1^n = {h1} ≠ {h2} = c·a2^n"
        )));
    }
    let mut checked = 0;
    let mut holds = true;
    for idx in multisets(a_samples.len(), n - 1) {
        let fixed: Vec<&RatVector> = idx.iter().map(|&i| &a_samples[i]).collect();
        let b = t.contract(&fixed)?;
        let restricted = b.restrict(v_basis);
        if signature(&restricted).0 != 0 {
            return Err(FormError::Precondition(format!(
                "b_a is not negative semidefinite on V for samples {idx:?}"
            )));
        }
        checked += 1;
        if v_basis.iter().any(|v| !b.pair(&c, v).is_zero()) {
            holds = false;
        }
    }
    Ok(CalabiReport {
        holds,
        tuples_checked: checked,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConcavityReport {
    /// `vol(a+b)^{1/n}` against `vol(a)^{1/n} + vol(b)^{1/n}`.
    pub sum_comparison: String,
    /// Interior points `k/steps` where concavity along the segment failed.
    pub segment_failures: Vec<usize>,
    pub holds: bool,
}

/// `vol^{1/n}` superadditivity and concavity along `[a, b]` at `steps`
/// rational points, all by exact radical sign computations.
pub fn volume_root_concavity_check(
    t: &SymMultiForm,
    a: &RatVector,
    b: &RatVector,
    steps: usize,
) -> Result<ConcavityReport, FormError> {
    let n = t.order as u32;
    let va = t.volume(a)?;
    let vb = t.volume(b)?;
    for (i, v) in [&va, &vb].into_iter().enumerate() {
        if !v.is_positive() {
            return Err(FormError::NonPositive {
                index: i,
                value: v.clone(),
            });
        }
    }
    let vs = t.volume(&(a + b))?;
    let ord = roots::compare_root_sum(&vs, &[va.clone(), vb.clone()], n);
    let mut failures = Vec::new();
    for k in 1..steps {
        let s = Rat::new((k as i64).into(), (steps as i64).into());
        let p = &a.scale(&(Rat::one() - &s)) + &b.scale(&s);
        let vp = t.volume(&p)?;
        if vp.is_negative() {
            failures.push(k);
            continue;
        }
        let terms = [
            (Rat::one(), vp),
            (-(Rat::one() - &s), va.clone()),
            (-s.clone(), vb.clone()),
        ];
        if roots::radical_sum_sign(&terms, n) < 0 {
            failures.push(k);
        }
    }
    let sum_comparison = match ord {
        Ordering::Greater => "greater",
        Ordering::Equal => "equal",
        Ordering::Less => "less",
    }
    .to_string();
    let holds = ord != Ordering::Less && failures.is_empty();
    Ok(ConcavityReport {
        sum_comparison,
        segment_failures: failures,
        holds,
    })
}
