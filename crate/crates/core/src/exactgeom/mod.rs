//! Exact polyhedral geometry: cones, hulls, duality, projection, volume.
//!
//! Cones and polytopes are kept in a canonical form (primitive integer
//! generators, sorted, deduplicated), so equality of sets can be tested by
//! comparing lists.

pub mod dd;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, Matrix};
use crate::lp;
use crate::rational::{big, int, primitive, Rat, RatVector};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("empty input")]
    EmptyInput,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("linear map shape is inconsistent: {0}")]
    Shape(String),
    #[error("basis vectors are linearly dependent")]
    DependentBasis,
    #[error("extension infeasible ({reason}); witness {witness}")]
    Infeasible { reason: String, witness: RatVector },
}

fn check_dim(expected: usize, v: &RatVector) -> Result<(), GeomError> {
    if v.dim() != expected {
        return Err(GeomError::DimensionMismatch {
            expected,
            found: v.dim(),
        });
    }
    Ok(())
}

fn to_ints(v: &RatVector) -> Vec<BigInt> {
    primitive(v.coords())
}

/// Rays of `rays` projected onto the orthogonal complement of the span of
/// `lineality` and made primitive. Zero projections are dropped.
fn project_off(lineality: &[Vec<BigInt>], rays: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    if lineality.is_empty() {
        return rays
            .iter()
            .filter(|r| r.iter().any(|x| !x.is_zero()))
            .cloned()
            .collect();
    }
    let l = linalg::to_rat_rows(lineality);
    let gram: Matrix = l
        .iter()
        .map(|a| l.iter().map(|b| dot(a, b)).collect())
        .collect();
    rays.iter()
        .filter_map(|r| {
            let rr: Vec<Rat> = r.iter().map(big).collect();
            let rhs: Vec<Rat> = l.iter().map(|a| dot(a, &rr)).collect();
            let c = linalg::solve(&gram, &rhs).expect("lineality basis is independent");
            let mut out = rr;
            for (ci, li) in c.iter().zip(&l) {
                for (o, x) in out.iter_mut().zip(li) {
                    *o -= ci * x;
                }
            }
            let p = primitive(&out);
            p.iter().any(|x| !x.is_zero()).then_some(p)
        })
        .collect()
}

fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

/// Canonical generators of a cone given as `(lineality, rays)`.
fn canonical(lineality: &[Vec<BigInt>], rays: &[Vec<BigInt>]) -> Vec<RatVector> {
    let lin_rat = linalg::to_rat_rows(lineality);
    let lin = linalg::canonical_row_space(&lin_rat);
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    for l in &lin {
        out.push(l.clone());
        out.push(l.iter().map(|x| -x).collect());
    }
    out.extend(project_off(&lin, rays));
    out.sort();
    out.dedup();
    out.iter().map(|v| RatVector::from_bigints(v)).collect()
}

/// A polyhedral cone, the nonnegative span of its generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeGen {
    pub dim: usize,
    pub generators: Vec<RatVector>,
}

impl ConeGen {
    pub fn new(dim: usize, generators: Vec<RatVector>) -> Result<Self, GeomError> {
        for g in &generators {
            check_dim(dim, g)?;
        }
        let generators = generators.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(ConeGen { dim, generators })
    }

    pub fn from_ints(dim: usize, gens: &[&[i64]]) -> Result<Self, GeomError> {
        Self::new(dim, gens.iter().map(|g| RatVector::from_ints(g)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        ConeGen {
            dim,
            generators: Vec::new(),
        }
    }

    /// All of `R^dim`.
    pub fn full(dim: usize) -> Self {
        let mut generators = Vec::new();
        for i in 0..dim {
            generators.push(RatVector::unit(dim, i));
            generators.push(-RatVector::unit(dim, i));
        }
        ConeGen { dim, generators }
    }

    fn int_generators(&self) -> Vec<Vec<BigInt>> {
        self.generators.iter().map(to_ints).collect()
    }

    /// Generators of `{y : y·x >= 0 for all x in self}` in canonical form.
    pub fn dual(&self) -> ConeGen {
        let (lin, rays) = dd::cone_from_constraints(self.dim, &self.int_generators());
        ConeGen {
            dim: self.dim,
            generators: canonical(&lin, &rays),
        }
    }

    /// Canonical irredundant generators of the same cone.
    pub fn normalize(&self) -> ConeGen {
        self.dual().dual()
    }

    pub fn set_eq(&self, other: &ConeGen) -> bool {
        self.dim == other.dim && self.normalize().generators == other.normalize().generators
    }

    /// Dimension of the linear span.
    pub fn span_dim(&self) -> usize {
        let rows: Matrix = self
            .generators
            .iter()
            .map(|g| g.coords().to_vec())
            .collect();
        linalg::rank(&rows)
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.span_dim() == self.dim
    }

    /// Exact membership via LP feasibility.
    pub fn contains(&self, x: &RatVector) -> bool {
        if x.dim() != self.dim {
            return false;
        }
        if x.is_zero() {
            return true;
        }
        if self.generators.is_empty() {
            return false;
        }
        let a: Matrix = (0..self.dim)
            .map(|i| self.generators.iter().map(|g| g[i].clone()).collect())
            .collect();
        lp::feasible_point(&a, x.coords(), self.generators.len()).is_some()
    }

    /// Nonnegative coefficients expressing `x` in the generators, if any.
    pub fn decompose(&self, x: &RatVector) -> Option<Vec<Rat>> {
        let a: Matrix = (0..self.dim)
            .map(|i| self.generators.iter().map(|g| g[i].clone()).collect())
            .collect();
        lp::feasible_point(&a, x.coords(), self.generators.len())
    }

    /// Intersection with another cone.
    pub fn intersect(&self, other: &ConeGen) -> ConeGen {
        let mut cons = self.dual().int_generators();
        cons.extend(other.dual().int_generators());
        let (lin, rays) = dd::cone_from_constraints(self.dim, &cons);
        ConeGen {
            dim: self.dim,
            generators: canonical(&lin, &rays),
        }
    }

    /// Intersection with a linear subspace given by spanning vectors.
    pub fn intersect_span(&self, span: &[RatVector]) -> ConeGen {
        let rows: Matrix = span.iter().map(|v| v.coords().to_vec()).collect();
        let mut cons = self.dual().int_generators();
        for eq in linalg::kernel(&rows, self.dim) {
            let e = primitive(&eq);
            cons.push(e.iter().map(|x| -x).collect());
            cons.push(e);
        }
        let (lin, rays) = dd::cone_from_constraints(self.dim, &cons);
        ConeGen {
            dim: self.dim,
            generators: canonical(&lin, &rays),
        }
    }
}

/// Dense linear map `R^cols -> R^rows`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinMap {
    #[serde(with = "crate::rational::serde_matrix")]
    pub matrix: Vec<Vec<Rat>>,
    pub cols: usize,
}

impl LinMap {
    pub fn new(matrix: Vec<Vec<Rat>>) -> Result<Self, GeomError> {
        let cols = matrix.first().map_or(0, Vec::len);
        if matrix.iter().any(|r| r.len() != cols) {
            return Err(GeomError::Shape("ragged rows".into()));
        }
        Ok(LinMap { matrix, cols })
    }

    pub fn with_cols(matrix: Vec<Vec<Rat>>, cols: usize) -> Result<Self, GeomError> {
        if matrix.iter().any(|r| r.len() != cols) {
            return Err(GeomError::Shape(format!("expected {cols} columns")));
        }
        Ok(LinMap { matrix, cols })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self, GeomError> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| int(x)).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        LinMap {
            matrix: (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                        .collect()
                })
                .collect(),
            cols: n,
        }
    }

    pub fn rows(&self) -> usize {
        self.matrix.len()
    }

    pub fn apply(&self, v: &RatVector) -> Result<RatVector, GeomError> {
        check_dim(self.cols, v)?;
        Ok(RatVector::new(linalg::mat_vec(&self.matrix, v.coords())))
    }

    pub fn rank(&self) -> usize {
        linalg::rank(&self.matrix)
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.rows()
    }
}

/// Result of [`project_cone`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProjectedCone {
    pub cone: ConeGen,
    /// The interior of the source cone meets `ker L`, so the image is the
    /// whole codomain.
    pub interior_meets_kernel: bool,
    pub surjective: bool,
}

/// Generators of `L(c)`.
pub fn project_cone(l: &LinMap, c: &ConeGen) -> Result<ProjectedCone, GeomError> {
    if l.cols != c.dim {
        return Err(GeomError::DimensionMismatch {
            expected: l.cols,
            found: c.dim,
        });
    }
    let m = l.rows();
    let images: Vec<RatVector> = c
        .generators
        .iter()
        .map(|g| l.apply(g))
        .collect::<Result<_, _>>()?;
    let surjective = l.is_surjective();
    let mut meets = false;
    if c.is_full_dimensional() && !c.generators.is_empty() {
        // lambda = 1 + mu with mu >= 0 and sum lambda_i L g_i = 0.
        let k = images.len();
        let a: Matrix = (0..m)
            .map(|i| images.iter().map(|g| g[i].clone()).collect())
            .collect();
        let rhs: Vec<Rat> = a
            .iter()
            .map(|row| -row.iter().fold(Rat::zero(), |s, x| s + x))
            .collect();
        meets = lp::feasible_point(&a, &rhs, k).is_some();
    }
    let cone = if meets {
        // L(C) is then the whole image of L.
        let mut span = images.clone();
        span.extend(images.iter().map(|g| g.scale(&-Rat::one())));
        ConeGen::new(m, span)?.normalize()
    } else {
        ConeGen::new(m, images)?.normalize()
    };
    Ok(ProjectedCone {
        cone,
        interior_meets_kernel: meets,
        surjective,
    })
}

/// True iff `c·d > 0` for every nonzero generator `d` of the primal cone,
/// i.e. `c` lies in the interior of its dual.
pub fn interior_contains(dual_of: &ConeGen, c: &RatVector) -> Result<bool, GeomError> {
    check_dim(dual_of.dim, c)?;
    Ok(dual_of
        .generators
        .iter()
        .filter(|d| !d.is_zero())
        .all(|d| d.dot(c).is_positive()))
}

/// Extends `h` (given on the basis `u` of a subspace) to a linear functional
/// that is nonnegative on `p`.
pub fn riesz_extend(
    dim_v: usize,
    p: &ConeGen,
    u: &[RatVector],
    h: &[Rat],
) -> Result<RatVector, GeomError> {
    if p.dim != dim_v {
        return Err(GeomError::DimensionMismatch {
            expected: dim_v,
            found: p.dim,
        });
    }
    for x in u {
        check_dim(dim_v, x)?;
    }
    if h.len() != u.len() {
        return Err(GeomError::DimensionMismatch {
            expected: u.len(),
            found: h.len(),
        });
    }
    let urows: Matrix = u.iter().map(|x| x.coords().to_vec()).collect();
    if linalg::rank(&urows) != u.len() {
        return Err(GeomError::DependentBasis);
    }
    let h_of = |w: &RatVector| -> Rat {
        let c = linalg::coordinates(u, w).expect("vector lies in span(U)");
        c.iter().zip(h).fold(Rat::zero(), |acc, (a, b)| acc + a * b)
    };
    for w in &p.intersect_span(u).generators {
        if h_of(w).is_negative() {
            return Err(GeomError::Infeasible {
                reason: "h is negative on P ∩ span(U)".into(),
                witness: w.clone(),
            });
        }
    }
    // Domination: v = U(a+ - a-) - G lambda.
    let k = u.len();
    let g = p.generators.len();
    let cols = 2 * k + g;
    let a: Matrix = (0..dim_v)
        .map(|i| {
            let mut row = Vec::with_capacity(cols);
            row.extend(u.iter().map(|x| x[i].clone()));
            row.extend(u.iter().map(|x| -x[i].clone()));
            row.extend(p.generators.iter().map(|x| -x[i].clone()));
            row
        })
        .collect();
    for v in &p.generators {
        if lp::feasible_point(&a, v.coords(), cols).is_none() {
            return Err(GeomError::Infeasible {
                reason: "generator is not dominated by span(U)".into(),
                witness: v.clone(),
            });
        }
    }
    let ineq: Matrix = p.generators.iter().map(|x| x.coords().to_vec()).collect();
    let zeros = vec![Rat::zero(); ineq.len()];
    match lp::feasible_free(&urows, h, &ineq, &zeros, dim_v) {
        Some(x) => Ok(RatVector::new(x)),
        None => Err(GeomError::Infeasible {
            reason: "no positive extension".into(),
            witness: p
                .generators
                .first()
                .cloned()
                .unwrap_or_else(|| RatVector::zeros(dim_v)),
        }),
    }
}

/// Facet inequality `normal · x >= offset`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Facet {
    pub normal: RatVector,
    #[serde(with = "crate::rational::serde_rat")]
    pub offset: Rat,
}

impl Facet {
    pub fn value(&self, x: &RatVector) -> Rat {
        self.normal.dot(x) - &self.offset
    }
}

/// A nonempty polytope in canonical vertex form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PolytopeDoc", into = "PolytopeDoc")]
pub struct Polytope {
    dim: usize,
    vertices: Vec<RatVector>,
    facets: Vec<Facet>,
    /// Affine equations `normal · x = offset` cutting out the affine span.
    equations: Vec<Facet>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolytopeDoc {
    dim: usize,
    vertices: Vec<RatVector>,
}

impl TryFrom<PolytopeDoc> for Polytope {
    type Error = GeomError;
    fn try_from(d: PolytopeDoc) -> Result<Self, GeomError> {
        let p = hull(&d.vertices)?;
        if p.dim != d.dim {
            return Err(GeomError::DimensionMismatch {
                expected: d.dim,
                found: p.dim,
            });
        }
        Ok(p)
    }
}

impl From<Polytope> for PolytopeDoc {
    fn from(p: Polytope) -> Self {
        PolytopeDoc {
            dim: p.dim,
            vertices: p.vertices,
        }
    }
}

/// Convex hull of a finite point set.
pub fn hull(points: &[RatVector]) -> Result<Polytope, GeomError> {
    let first = points.first().ok_or(GeomError::EmptyInput)?;
    let n = first.dim();
    for p in points {
        check_dim(n, p)?;
    }
    let homog: Vec<Vec<BigInt>> = points
        .iter()
        .map(|p| primitive(p.prepend(Rat::one()).coords()))
        .collect();
    // Inequalities (b, a): b + a·x >= 0 on the hull.
    let (lin, rays) = dd::cone_from_constraints(n + 1, &homog);
    let lin = linalg::canonical_row_space(&linalg::to_rat_rows(&lin));
    let rays = project_off(&lin, &rays);
    // Back to generators of the homogenized cone.
    let mut cons: Vec<Vec<BigInt>> = rays.clone();
    for l in &lin {
        cons.push(l.clone());
        cons.push(l.iter().map(|x| -x).collect());
    }
    let (klin, krays) = dd::cone_from_constraints(n + 1, &cons);
    debug_assert!(klin.is_empty());
    let mut vertices: Vec<RatVector> = krays
        .iter()
        .map(|r| {
            let t = big(&r[0]);
            RatVector::new(r[1..].iter().map(|x| big(x) / &t).collect())
        })
        .collect();
    vertices.sort();
    vertices.dedup();
    let to_facet = |r: &Vec<BigInt>| Facet {
        normal: RatVector::from_bigints(&r[1..]),
        offset: -big(&r[0]),
    };
    let mut facets: Vec<Facet> = rays
        .iter()
        .map(to_facet)
        .filter(|f| vertices.iter().any(|v| f.value(v).is_zero()))
        .collect();
    facets.sort();
    facets.dedup();
    let equations: Vec<Facet> = lin.iter().map(to_facet).collect();
    Ok(Polytope {
        dim: n,
        vertices,
        facets,
        equations,
    })
}

impl Polytope {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[RatVector] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn equations(&self) -> &[Facet] {
        &self.equations
    }

    /// Dimension of the affine span.
    pub fn affine_dim(&self) -> usize {
        self.dim - self.equations.len()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.equations.is_empty()
    }

    pub fn contains(&self, x: &RatVector) -> bool {
        x.dim() == self.dim
            && self.equations.iter().all(|e| e.value(x).is_zero())
            && self.facets.iter().all(|f| !f.value(x).is_negative())
    }

    /// Strict interior membership (relative to the ambient space).
    pub fn interior_contains(&self, x: &RatVector) -> bool {
        self.is_full_dimensional() && self.facets.iter().all(|f| f.value(x).is_positive())
    }

    pub fn scale(&self, s: &Rat) -> Result<Polytope, GeomError> {
        hull(&self.vertices.iter().map(|v| v.scale(s)).collect::<Vec<_>>())
    }

    pub fn translate(&self, t: &RatVector) -> Result<Polytope, GeomError> {
        hull(&self.vertices.iter().map(|v| v + t).collect::<Vec<_>>())
    }

    /// Integer lower/upper bounds per coordinate that contain the polytope.
    pub fn bounding_box(&self) -> Vec<(BigInt, BigInt)> {
        (0..self.dim)
            .map(|i| {
                let lo = self
                    .vertices
                    .iter()
                    .map(|v| v[i].floor().to_integer())
                    .min()
                    .unwrap();
                let hi = self
                    .vertices
                    .iter()
                    .map(|v| v[i].ceil().to_integer())
                    .max()
                    .unwrap();
                (lo, hi)
            })
            .collect()
    }

    /// All integer points, in lexicographic order.
    pub fn lattice_points(&self) -> Vec<RatVector> {
        let bbox = self.bounding_box();
        let mut out = Vec::new();
        let mut cur: Vec<BigInt> = bbox.iter().map(|(lo, _)| lo.clone()).collect();
        if self.dim == 0 {
            return vec![RatVector::zeros(0)];
        }
        loop {
            let p = RatVector::from_bigints(&cur);
            if self.contains(&p) {
                out.push(p);
            }
            let mut i = self.dim;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if cur[i] < bbox[i].1 {
                    cur[i] += 1;
                    for (j, c) in cur.iter_mut().enumerate().skip(i + 1) {
                        *c = bbox[j].0.clone();
                    }
                    break;
                }
            }
        }
    }

    /// Pulling triangulation into simplices of the affine dimension. Each
    /// simplex is a list of `affine_dim + 1` vertices.
    pub fn triangulate(&self) -> Vec<Vec<RatVector>> {
        let k = self.affine_dim();
        if k == 0 {
            return vec![vec![self.vertices[0].clone()]];
        }
        let apex = &self.vertices[0];
        let mut out = Vec::new();
        for f in &self.facets {
            if f.value(apex).is_zero() {
                continue;
            }
            let face: Vec<RatVector> = self
                .vertices
                .iter()
                .filter(|v| f.value(v).is_zero())
                .cloned()
                .collect();
            let face = hull(&face).expect("facet is nonempty");
            for mut s in face.triangulate() {
                s.insert(0, apex.clone());
                out.push(s);
            }
        }
        out
    }

    /// Lattice-normalized volume in the affine span (see [`polytope_volume`]).
    pub fn volume(&self) -> Rat {
        let k = self.affine_dim();
        if k == 0 {
            return Rat::one();
        }
        let v0 = &self.vertices[0];
        let edges: Vec<RatVector> = self.vertices.iter().map(|v| v - v0).collect();
        let basis = linalg::saturated_basis(&edges, self.dim);
        let fact: Rat = (1..=k as i64).fold(Rat::one(), |acc, i| acc * int(i));
        self.triangulate()
            .iter()
            .map(|s| {
                let m: Matrix = s[1..]
                    .iter()
                    .map(|v| linalg::coordinates(&basis, &(v - &s[0])).expect("in affine span"))
                    .collect();
                linalg::det(&m).abs()
            })
            .fold(Rat::zero(), |acc, x| acc + x)
            / fact
    }

    /// Full-dimensional volume; zero when the polytope is flat.
    pub fn ambient_volume(&self) -> Rat {
        if self.is_full_dimensional() {
            self.volume()
        } else {
            Rat::zero()
        }
    }
}

/// Volume in the affine span of `p`, normalized so that `lattice` (columns are
/// a basis; default the standard lattice) has covolume one within that span.
pub fn polytope_volume(p: &Polytope, lattice: Option<&LinMap>) -> Result<Rat, GeomError> {
    let Some(l) = lattice else {
        return Ok(p.volume());
    };
    if l.rows() != p.dim || l.cols != p.dim {
        return Err(GeomError::Shape(
            "lattice basis must be square of the ambient dimension".into(),
        ));
    }
    let cols: Vec<RatVector> = (0..l.cols)
        .map(|j| RatVector::new(l.matrix.iter().map(|r| r[j].clone()).collect()))
        .collect();
    let pulled: Vec<RatVector> = p
        .vertices
        .iter()
        .map(|v| {
            linalg::coordinates(&cols, v)
                .map(RatVector::new)
                .ok_or(GeomError::DependentBasis)
        })
        .collect::<Result<_, _>>()?;
    Ok(hull(&pulled)?.volume())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn pts(xs: &[&[i64]]) -> Vec<RatVector> {
        xs.iter().map(|x| RatVector::from_ints(x)).collect()
    }

    #[test]
    fn hull_drops_interior_point() {
        let mut p = pts(&[&[0, 0], &[1, 0], &[0, 1]]);
        p.push(RatVector::new(vec![frac(1, 4), frac(1, 4)]));
        let h = hull(&p).unwrap();
        assert_eq!(h.vertices(), pts(&[&[0, 0], &[0, 1], &[1, 0]]).as_slice());
        assert_eq!(h.facets().len(), 3);
    }

    #[test]
    fn single_point_hull() {
        let h = hull(&pts(&[&[0, 0]])).unwrap();
        assert_eq!(h.vertices().len(), 1);
        assert_eq!(h.affine_dim(), 0);
        assert_eq!(h.volume(), int(1));
    }

    #[test]
    fn square_hull_and_volumes() {
        let h = hull(&pts(&[&[0, 0], &[2, 0], &[0, 2], &[2, 2], &[1, 1]])).unwrap();
        assert_eq!(h.vertices().len(), 4);
        assert_eq!(h.volume(), int(4));
        let s = hull(&pts(&[&[0, 0], &[1, 0], &[0, 1]])).unwrap();
        assert_eq!(s.volume(), frac(1, 2));
        let t = hull(&pts(&[&[0, 0], &[2, 0], &[0, 2]])).unwrap();
        assert_eq!(t.volume(), int(2));
    }

    #[test]
    fn hull_errors() {
        assert_eq!(hull(&[]), Err(GeomError::EmptyInput));
        assert!(matches!(
            hull(&[RatVector::from_ints(&[0]), RatVector::from_ints(&[0, 1])]),
            Err(GeomError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn segment_has_lattice_length() {
        let h = hull(&pts(&[&[0, 0], &[2, 2]])).unwrap();
        assert_eq!(h.affine_dim(), 1);
        assert_eq!(h.volume(), int(2));
        assert_eq!(h.ambient_volume(), int(0));
    }

    #[test]
    fn duals() {
        let q = ConeGen::from_ints(2, &[&[1, 0], &[0, 1]]).unwrap();
        assert_eq!(q.dual().generators, pts(&[&[0, 1], &[1, 0]]));
        let h = ConeGen::from_ints(2, &[&[1, 2]]).unwrap();
        assert_eq!(h.dual().generators, pts(&[&[-2, 1], &[1, 2], &[2, -1]]));
        let z = ConeGen::zero(3);
        assert!(z.dual().set_eq(&ConeGen::full(3)));
        assert!(ConeGen::full(3).dual().generators.is_empty());
    }

    #[test]
    fn interior_queries() {
        let d = ConeGen::from_ints(2, &[&[1, 0], &[0, 1]]).unwrap();
        assert!(interior_contains(&d, &RatVector::from_ints(&[1, 1])).unwrap());
        assert!(!interior_contains(&d, &RatVector::from_ints(&[1, 0])).unwrap());
        assert!(!interior_contains(&d, &RatVector::from_ints(&[-1, 2])).unwrap());
    }

    #[test]
    fn projections() {
        let oct = ConeGen::from_ints(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]).unwrap();
        let l = LinMap::from_ints(&[&[1, 0, 0], &[0, 1, 0]]).unwrap();
        let r = project_cone(&l, &oct).unwrap();
        assert_eq!(r.cone.generators, pts(&[&[0, 1], &[1, 0]]));
        assert!(!r.interior_meets_kernel);

        let q = ConeGen::from_ints(2, &[&[1, 0], &[0, 1]]).unwrap();
        let sum = LinMap::from_ints(&[&[1, 1]]).unwrap();
        assert_eq!(
            project_cone(&sum, &q).unwrap().cone.generators,
            pts(&[&[1]])
        );
        let diff = LinMap::from_ints(&[&[1, -1]]).unwrap();
        let r = project_cone(&diff, &q).unwrap();
        assert!(r.interior_meets_kernel);
        assert_eq!(r.cone.generators, pts(&[&[-1], &[1]]));
    }

    #[test]
    fn riesz_examples() {
        let q = ConeGen::from_ints(2, &[&[1, 0], &[0, 1]]).unwrap();
        let h = riesz_extend(2, &q, &pts(&[&[1, 1]]), &[int(1)]).unwrap();
        assert_eq!(h.dot(&RatVector::from_ints(&[1, 1])), int(1));
        assert!(q.generators.iter().all(|g| !h.dot(g).is_negative()));

        let full = riesz_extend(2, &q, &pts(&[&[1, 0], &[0, 1]]), &[int(2), int(3)]).unwrap();
        assert_eq!(full, RatVector::from_ints(&[2, 3]));

        // Not dominated: U = {(1,0)} cannot dominate (0,1).
        let e = riesz_extend(2, &q, &pts(&[&[1, 0]]), &[int(1)]).unwrap_err();
        assert!(matches!(e, GeomError::Infeasible { .. }));
        // Negative on P ∩ span(U).
        let e = riesz_extend(2, &q, &pts(&[&[1, 1]]), &[int(-1)]).unwrap_err();
        assert!(matches!(e, GeomError::Infeasible { .. }));
    }

    #[test]
    fn lattice_volume_and_points() {
        let t = hull(&pts(&[&[0, 0], &[2, 0], &[0, 2]])).unwrap();
        assert_eq!(t.lattice_points().len(), 6);
        let l = LinMap::from_ints(&[&[2, 0], &[0, 1]]).unwrap();
        assert_eq!(polytope_volume(&t, Some(&l)).unwrap(), int(1));
    }

    #[test]
    fn json_roundtrip() {
        let t = hull(&pts(&[&[0, 0], &[2, 0], &[0, 2]])).unwrap();
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(
            s,
            r#"{"dim":2,"vertices":[[[0,1],[0,1]],[[0,1],[2,1]],[[2,1],[0,1]]]}"#
        );
        let back: Polytope = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
    }
}
