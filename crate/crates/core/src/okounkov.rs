//! Okounkov bodies of toric graded series under a lexicographic valuation.
//!
//! The sections of `mD` are the characters `χ^u`, `u ∈ P_{mD}`; a section's
//! value is the lex-minimal (permuted) exponent among its monomials.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exactgeom::{hull, GeomError, Polytope};
use crate::rational::{int, Rat, RatVector};
use crate::roots;
use crate::semigroups::{
    dilated_lattice_points, saturation_level, GradedSemigroup, SemigroupError,
};
use crate::toric::{section_polytope, volume_sections, ToricDivisor, ToricError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OkounkovError {
    #[error("order {0:?} is not a permutation")]
    BadOrder(Vec<usize>),
    #[error("all value sets are empty")]
    EmptyLevels,
    #[error("value sets are not superadditive at levels {k} + {l}")]
    NotSuperadditive { k: u32, l: u32 },
    #[error("divisor is not big (volume {0})")]
    NotBig(Rat),
    #[error("K is not in the interior of the body (vertex {0})")]
    NotInterior(RatVector),
    #[error("no certified inner approximation up to level {0}")]
    NotCertified(u32),
    #[error(transparent)]
    Toric(#[from] ToricError),
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// Lexicographic valuation on monomials in a chosen variable order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LexValuation {
    order: Vec<usize>,
}

impl LexValuation {
    pub fn identity(d: usize) -> Self {
        LexValuation {
            order: (0..d).collect(),
        }
    }

    pub fn new(order: Vec<usize>) -> Result<Self, OkounkovError> {
        let mut sorted = order.clone();
        sorted.sort_unstable();
        if sorted != (0..order.len()).collect::<Vec<_>>() {
            return Err(OkounkovError::BadOrder(order));
        }
        Ok(LexValuation { order })
    }

    pub fn dim(&self) -> usize {
        self.order.len()
    }

    /// Value of the monomial with exponent `u`.
    pub fn monomial(&self, u: &[i64]) -> Vec<i64> {
        self.order.iter().map(|&i| u[i]).collect()
    }

    /// Value of a polynomial given by its support (lex-min permuted exponent);
    /// `None` for the zero polynomial.
    pub fn polynomial(&self, support: &[Vec<i64>]) -> Option<Vec<i64>> {
        support.iter().map(|u| self.monomial(u)).min()
    }
}

/// `V_m` for `m = 0..=m_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedValueSets {
    d: usize,
    levels: BTreeMap<u32, BTreeSet<Vec<i64>>>,
}

impl GradedValueSets {
    /// Validates superadditivity on stored levels and inserts `V_0 = {0}`.
    pub fn new(d: usize, levels: BTreeMap<u32, BTreeSet<Vec<i64>>>) -> Result<Self, OkounkovError> {
        let mut levels = levels;
        levels.insert(0, [vec![0; d]].into_iter().collect());
        for (&k, vk) in levels.range(1..) {
            for (&l, vl) in levels.range(k..) {
                let Some(s) = levels.get(&(k + l)) else {
                    continue;
                };
                for a in vk {
                    for b in vl {
                        let c: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                        if !s.contains(&c) {
                            return Err(OkounkovError::NotSuperadditive { k, l });
                        }
                    }
                }
            }
        }
        Ok(GradedValueSets { d, levels })
    }

    /// Value sets of the toric series of `D` up to `m_max`.
    pub fn from_toric(
        div: &ToricDivisor,
        val: &LexValuation,
        m_max: u32,
    ) -> Result<Self, OkounkovError> {
        let levels: BTreeMap<u32, BTreeSet<Vec<i64>>> = (1..=m_max)
            .into_par_iter()
            .map(|m| value_set(div, m, val).map(|v| (m, v)))
            .collect::<Result<_, _>>()?;
        Self::new(div.fan().dim(), levels)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn m_max(&self) -> u32 {
        *self.levels.keys().next_back().unwrap()
    }

    pub fn level(&self, m: u32) -> Option<&BTreeSet<Vec<i64>>> {
        self.levels.get(&m)
    }

    pub fn levels(&self) -> &BTreeMap<u32, BTreeSet<Vec<i64>>> {
        &self.levels
    }

    /// Same series with every level-`m` value shifted by `-m·c`.
    fn shifted(&self, c: &[i64]) -> GradedValueSets {
        let levels = self
            .levels
            .iter()
            .map(|(&m, s)| {
                let mi = m as i64;
                (
                    m,
                    s.iter()
                        .map(|v| v.iter().zip(c).map(|(x, y)| x - mi * y).collect())
                        .collect(),
                )
            })
            .collect();
        GradedValueSets { d: self.d, levels }
    }
}

/// Values of the level-`m` sections of `D`.
pub fn value_set(
    div: &ToricDivisor,
    m: u32,
    val: &LexValuation,
) -> Result<BTreeSet<Vec<i64>>, OkounkovError> {
    let d = div.fan().dim();
    if m == 0 {
        return Ok([vec![0; d]].into_iter().collect());
    }
    let p = match section_polytope(div) {
        Ok(p) => p,
        Err(ToricError::NoSections) => return Ok(BTreeSet::new()),
        Err(e) => return Err(e.into()),
    };
    Ok(dilated_lattice_points(&p, m)
        .iter()
        .map(|u| val.monomial(u))
        .collect())
}

/// Closed convex hull of `∪_{1 <= m} V_m / m` over the stored levels.
pub fn okounkov_body(v: &GradedValueSets) -> Result<Polytope, OkounkovError> {
    let pts: Vec<RatVector> = v
        .levels
        .range(1..)
        .flat_map(|(&m, s)| {
            let inv = Rat::new(1.into(), m.into());
            s.iter()
                .map(move |x| RatVector::from_ints(x).scale(&inv))
                .collect::<Vec<_>>()
        })
        .collect();
    if pts.is_empty() {
        return Err(OkounkovError::EmptyLevels);
    }
    Ok(hull(&pts)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MeasureRow {
    pub m: u32,
    #[serde(with = "crate::rational::serde_rat")]
    pub total: Rat,
    #[serde(with = "crate::rational::serde_rat")]
    pub deviation: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MeasureReport {
    /// Dimension of the body's affine span; masses are `|V_m| / m^dim`.
    pub dim: usize,
    /// Lattice-normalized volume of the body.
    #[serde(with = "crate::rational::serde_rat")]
    pub body_volume: Rat,
    pub rows: Vec<MeasureRow>,
    pub within_tolerance: bool,
}

/// Total masses of the counting measures `μ_m` against the body volume.
pub fn measure_report(
    v: &GradedValueSets,
    tolerance: &Rat,
) -> Result<MeasureReport, OkounkovError> {
    let body = okounkov_body(v)?;
    let k = body.affine_dim();
    let vol = body.volume();
    let rows: Vec<MeasureRow> = v
        .levels
        .range(1..)
        .map(|(&m, s)| {
            let total = Rat::from_integer(s.len().into())
                / Rat::from_integer(num_bigint::BigInt::from(m).pow(k as u32));
            let deviation = (&total - &vol).abs();
            MeasureRow {
                m,
                total,
                deviation,
            }
        })
        .collect();
    let within = rows.last().is_some_and(|r| r.deviation <= *tolerance);
    Ok(MeasureReport {
        dim: k,
        body_volume: vol,
        rows,
        within_tolerance: within,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LogConcavityReport {
    pub dim: usize,
    #[serde(with = "crate::rational::serde_rat")]
    pub vol1: Rat,
    #[serde(with = "crate::rational::serde_rat")]
    pub vol2: Rat,
    #[serde(with = "crate::rational::serde_rat")]
    pub vol_sum: Rat,
    /// Every vertex sum of the two bodies lies in the body of the sum.
    pub minkowski_inclusion: bool,
    /// `vol(D1+D2)^{1/n}` compared with `vol(D1)^{1/n} + vol(D2)^{1/n}`.
    pub comparison: String,
    pub holds: bool,
}

/// Minkowski inclusion of bodies and `vol^{1/n}` superadditivity.
pub fn logconcavity_check(
    d1: &ToricDivisor,
    d2: &ToricDivisor,
    m_max: u32,
) -> Result<LogConcavityReport, OkounkovError> {
    let n = d1.fan().dim();
    let (_, v1) = volume_sections(d1, 1)?;
    let (_, v2) = volume_sections(d2, 1)?;
    for v in [&v1, &v2] {
        if !v.is_positive() {
            return Err(OkounkovError::NotBig(v.clone()));
        }
    }
    let sum = d1.add(d2)?;
    let (_, vs) = volume_sections(&sum, 1)?;
    let val = LexValuation::identity(n);
    let b1 = okounkov_body(&GradedValueSets::from_toric(d1, &val, m_max)?)?;
    let b2 = okounkov_body(&GradedValueSets::from_toric(d2, &val, m_max)?)?;
    let bs = section_polytope(&sum)?;
    let inclusion = b1
        .vertices()
        .iter()
        .all(|a| b2.vertices().iter().all(|b| bs.contains(&(a + b))));
    let ord = roots::compare_root_sum(&vs, &[v1.clone(), v2.clone()], n as u32);
    let comparison = match ord {
        Ordering::Greater => "greater",
        Ordering::Equal => "equal",
        Ordering::Less => "less",
    }
    .to_string();
    Ok(LogConcavityReport {
        dim: n,
        vol1: v1,
        vol2: v2,
        vol_sum: vs,
        minkowski_inclusion: inclusion,
        holds: inclusion && ord != Ordering::Less,
        comparison,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InnerApproximation {
    /// Generators `(level, value)` in the original coordinates.
    pub generators: Vec<(u32, RatVector)>,
    /// Highest generator level used.
    pub level: u32,
    /// Translation applied so that level one contains the origin.
    pub shift: RatVector,
    /// Saturation level of the generated semigroup on `K`.
    pub m0: u32,
}

/// Finitely many graded values whose semigroup has `K` in the interior of
/// its body, certified by a saturation scan up to `m_max`.
pub fn inner_approx(
    v: &GradedValueSets,
    k: &Polytope,
    m_max: u32,
) -> Result<InnerApproximation, OkounkovError> {
    let body = okounkov_body(v)?;
    for x in k.vertices() {
        if !body.interior_contains(x) {
            return Err(OkounkovError::NotInterior(x.clone()));
        }
    }
    let c: Vec<i64> = v
        .level(1)
        .and_then(|s| s.iter().next().cloned())
        .ok_or(OkounkovError::EmptyLevels)?;
    let shift = RatVector::from_ints(&c);
    let sv = v.shifted(&c);
    let kshift = k.translate(&-&shift)?;
    for level in 1..=v.m_max() {
        let gens: Vec<(u32, RatVector)> = sv
            .levels
            .range(1..=level)
            .flat_map(|(&m, s)| s.iter().map(move |x| (m, RatVector::from_ints(x))))
            .collect();
        let pts: Vec<RatVector> = gens
            .iter()
            .map(|(m, x)| x.scale(&Rat::new(1.into(), (*m).into())))
            .collect();
        let sub = hull(&pts)?;
        if !kshift.vertices().iter().all(|x| sub.interior_contains(x)) {
            continue;
        }
        let s = GradedSemigroup::from_generators(v.d, &gens, m_max)?;
        let rep = saturation_level(&s, &kshift, m_max)?;
        let Some(m0) = rep.m0 else { continue };
        let generators = gens
            .into_iter()
            .map(|(m, x)| {
                let back = &x + &shift.scale(&int(m as i64));
                (m, back)
            })
            .collect();
        return Ok(InnerApproximation {
            generators,
            level,
            shift,
            m0,
        });
    }
    Err(OkounkovError::NotCertified(v.m_max()))
}

/// Normalized volume `d!·vol(body)` for a full-dimensional body, else zero.
pub fn body_volume(body: &Polytope) -> Rat {
    let n = body.dim() as i64;
    let fact = (1..=n).fold(Rat::one(), |acc, i| acc * int(i));
    if body.is_full_dimensional() {
        fact * body.volume()
    } else {
        Rat::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use crate::toric::{fans, h0};

    fn o1_p2() -> ToricDivisor {
        ToricDivisor::from_ints(fans::p2(), &[0, 0, 1]).unwrap()
    }

    #[test]
    fn value_sets() {
        let p1 = ToricDivisor::from_ints(fans::p1(), &[0, 2]).unwrap();
        let v = value_set(&p1, 1, &LexValuation::identity(1)).unwrap();
        assert_eq!(v, [vec![0], vec![1], vec![2]].into_iter().collect());
        assert_eq!(
            value_set(&p1, 0, &LexValuation::identity(1)).unwrap().len(),
            1
        );
        assert_eq!(
            value_set(&o1_p2(), 2, &LexValuation::identity(2))
                .unwrap()
                .len(),
            6
        );
    }

    #[test]
    fn bodies() {
        let p1 = ToricDivisor::from_ints(fans::p1(), &[0, 2]).unwrap();
        let b = okounkov_body(
            &GradedValueSets::from_toric(&p1, &LexValuation::identity(1), 3).unwrap(),
        )
        .unwrap();
        assert_eq!(b.volume(), int(2));
        let b = okounkov_body(
            &GradedValueSets::from_toric(&o1_p2(), &LexValuation::identity(2), 1).unwrap(),
        )
        .unwrap();
        assert_eq!(b.volume(), frac(1, 2));
        assert_eq!(body_volume(&b), int(1));
        let zero = ToricDivisor::from_ints(fans::p2(), &[0, 0, 0]).unwrap();
        let b = okounkov_body(
            &GradedValueSets::from_toric(&zero, &LexValuation::identity(2), 3).unwrap(),
        )
        .unwrap();
        assert_eq!(b.vertices().len(), 1);
    }

    #[test]
    fn cardinality_law() {
        let v = GradedValueSets::from_toric(&o1_p2(), &LexValuation::new(vec![1, 0]).unwrap(), 6)
            .unwrap();
        for m in 1..=6 {
            assert_eq!(
                num_bigint::BigInt::from(v.level(m).unwrap().len()),
                h0(&o1_p2(), m).unwrap()
            );
        }
    }

    #[test]
    fn measures() {
        let v = GradedValueSets::from_toric(&o1_p2(), &LexValuation::identity(2), 10).unwrap();
        let r = measure_report(&v, &frac(1, 5)).unwrap();
        assert_eq!(r.rows[9].total, frac(11 * 12, 2 * 100));
        assert_eq!(r.body_volume, frac(1, 2));
        assert!(r.within_tolerance);
        let p1 = ToricDivisor::from_ints(fans::p1(), &[0, 1]).unwrap();
        let r = measure_report(
            &GradedValueSets::from_toric(&p1, &LexValuation::identity(1), 4).unwrap(),
            &int(0),
        )
        .unwrap();
        assert_eq!(r.rows[3].total, frac(5, 4));
        assert!(!r.within_tolerance);
        let zero = ToricDivisor::from_ints(fans::p2(), &[0, 0, 0]).unwrap();
        let r = measure_report(
            &GradedValueSets::from_toric(&zero, &LexValuation::identity(2), 3).unwrap(),
            &int(0),
        )
        .unwrap();
        assert_eq!(r.dim, 0);
        assert!(r.rows.iter().all(|row| row.deviation.is_zero()));
    }

    #[test]
    fn logconcavity() {
        let r = logconcavity_check(&o1_p2(), &o1_p2().scale(&int(2)), 2).unwrap();
        assert_eq!(
            (r.vol1.clone(), r.vol2.clone(), r.vol_sum.clone()),
            (int(1), int(4), int(9))
        );
        assert_eq!(r.comparison, "equal");
        assert!(r.holds);
        let r = logconcavity_check(&o1_p2(), &o1_p2(), 2).unwrap();
        assert_eq!(r.comparison, "equal");
        let bl = fans::bl_p2(1);
        let h = ToricDivisor::from_ints(bl.clone(), &[0, 0, 1, 0]).unwrap();
        let h_minus_e = ToricDivisor::from_ints(bl, &[0, 0, 1, -1]).unwrap();
        assert_eq!(
            logconcavity_check(&h, &h_minus_e, 2),
            Err(OkounkovError::NotBig(int(0)))
        );
    }

    #[test]
    fn inner_approximations() {
        let v = GradedValueSets::from_toric(&o1_p2(), &LexValuation::identity(2), 4).unwrap();
        let c = RatVector::new(vec![frac(1, 3), frac(1, 3)]);
        let shrink = |x: &RatVector| &c + &(x - &c).scale(&frac(3, 4));
        let simplex = [
            RatVector::from_ints(&[0, 0]),
            RatVector::from_ints(&[1, 0]),
            RatVector::from_ints(&[0, 1]),
        ];
        let k = hull(&simplex.iter().map(shrink).collect::<Vec<_>>()).unwrap();
        let r = inner_approx(&v, &k, 8).unwrap();
        assert_eq!(r.level, 1);
        assert_eq!(r.m0, 1);
        let point = hull(&[RatVector::new(vec![frac(1, 4), frac(1, 4)])]).unwrap();
        assert!(inner_approx(&v, &point, 8).is_ok());
        let touching = hull(&[
            RatVector::from_ints(&[0, 0]),
            RatVector::new(vec![frac(1, 4), frac(1, 4)]),
        ])
        .unwrap();
        assert!(matches!(
            inner_approx(&v, &touching, 8),
            Err(OkounkovError::NotInterior(_))
        ));
    }
}
