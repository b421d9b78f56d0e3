//! Intersection theory on surfaces: effective and nef cones, the Zariski
//! positive part, volume, and the inequalities relating them.
//!
//! Classes are coordinate vectors in a fixed basis of `N¹`, paired through
//! the Gram matrix. The positive part of a pseudo-effective class is found
//! by enumerating candidate negative supports among the curve generators.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exactgeom::{self, ConeGen, GeomError};
use crate::forms::{signature, FormError, GramMatrix};
use crate::linalg;
use crate::rational::{int, Rat, RatVector};
use crate::toric::{fans, Fan, ToricDivisor};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BigconeError {
    #[error("class {0} is not pseudo-effective")]
    NotPsef(RatVector),
    #[error("class {class} is not big (volume {vol})")]
    NotBig { class: RatVector, vol: Rat },
    #[error("class {class} is not nef: it pairs to {value} with curve {curve}")]
    NotNef {
        class: RatVector,
        curve: RatVector,
        value: Rat,
    },
    #[error("nef generator {nef} pairs to {value} with effective generator {eff}")]
    Pairing {
        nef: RatVector,
        eff: RatVector,
        value: Rat,
    },
    #[error("Gram matrix has inertia {0:?}, expected one positive direction and no kernel")]
    Signature((usize, usize, usize)),
    #[error("class of dimension {found} in a lattice of rank {expected}")]
    Rank { expected: usize, found: usize },
    #[error("step must be nonzero")]
    ZeroStep,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("no decomposition found among the curve generators for {0}")]
    NoDecomposition(RatVector),
    #[error("no ample class found below {0}")]
    NoAmpleBelow(RatVector),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// `N¹` of a surface with its pairing, curve generators of the effective
/// cone and generators of the nef cone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceLattice {
    name: String,
    gram: GramMatrix,
    eff: Vec<RatVector>,
    nef: Vec<RatVector>,
}

impl SurfaceLattice {
    /// Validates nef/effective pairing signs and the Hodge signature.
    pub fn new(
        name: impl Into<String>,
        gram: GramMatrix,
        eff: Vec<RatVector>,
        nef: Vec<RatVector>,
    ) -> Result<Self, BigconeError> {
        let r = gram.rank();
        for v in eff.iter().chain(&nef) {
            if v.dim() != r {
                return Err(BigconeError::Rank {
                    expected: r,
                    found: v.dim(),
                });
            }
        }
        let sig = signature(&gram);
        if sig != (1, 0, r - 1) {
            return Err(BigconeError::Signature(sig));
        }
        for n in &nef {
            for e in &eff {
                let value = gram.pair(n, e);
                if value.is_negative() {
                    return Err(BigconeError::Pairing {
                        nef: n.clone(),
                        eff: e.clone(),
                        value,
                    });
                }
            }
        }
        Ok(SurfaceLattice {
            name: name.into(),
            gram,
            eff,
            nef,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.gram.rank()
    }

    pub fn gram(&self) -> &GramMatrix {
        &self.gram
    }

    pub fn eff_gens(&self) -> &[RatVector] {
        &self.eff
    }

    pub fn nef_gens(&self) -> &[RatVector] {
        &self.nef
    }

    pub fn pair(&self, x: &RatVector, y: &RatVector) -> Rat {
        self.gram.pair(x, y)
    }

    pub fn self_intersection(&self, x: &RatVector) -> Rat {
        self.gram.pair(x, x)
    }

    fn check(&self, x: &RatVector) -> Result<(), BigconeError> {
        if x.dim() != self.rank() {
            return Err(BigconeError::Rank {
                expected: self.rank(),
                found: x.dim(),
            });
        }
        Ok(())
    }

    pub fn eff_cone(&self) -> ConeGen {
        ConeGen::new(self.rank(), self.eff.clone()).expect("validated dimensions")
    }

    /// Nef cone computed as the dual of the effective cone under the pairing.
    pub fn nef_cone_from_duality(&self) -> ConeGen {
        let g = self.gram.matrix();
        let twisted: Vec<RatVector> = self
            .eff
            .iter()
            .map(|e| RatVector::new(linalg::mat_vec(g, e.coords())))
            .collect();
        ConeGen::new(self.rank(), twisted)
            .expect("validated dimensions")
            .dual()
    }

    pub fn is_psef(&self, x: &RatVector) -> bool {
        self.eff_cone().contains(x)
    }

    /// First effective generator pairing negatively with `x`, if any.
    pub fn nef_witness(&self, x: &RatVector) -> Option<(RatVector, Rat)> {
        self.eff.iter().find_map(|e| {
            let v = self.pair(x, e);
            v.is_negative().then(|| (e.clone(), v))
        })
    }

    pub fn is_nef(&self, x: &RatVector) -> bool {
        self.nef_witness(x).is_none()
    }

    /// Strictly positive on every curve generator.
    pub fn is_ample(&self, x: &RatVector) -> bool {
        let g = self.gram.matrix();
        let twisted = RatVector::new(linalg::mat_vec(g, x.coords()));
        exactgeom::interior_contains(&self.eff_cone(), &twisted).unwrap_or(false)
    }

    fn require_nef(&self, x: &RatVector) -> Result<(), BigconeError> {
        self.check(x)?;
        match self.nef_witness(x) {
            Some((curve, value)) => Err(BigconeError::NotNef {
                class: x.clone(),
                curve,
                value,
            }),
            None => Ok(()),
        }
    }

    /// Classes of the torus-invariant curves for the toric fixtures, as
    /// `(fan, class of each ray divisor)`.
    pub fn toric_model(&self) -> Option<(Fan, Vec<RatVector>)> {
        let v = RatVector::from_ints;
        let (fan, pairs): (Fan, Vec<(Vec<i64>, Vec<i64>)>) = match self.name.as_str() {
            "P2" => (
                fans::p2(),
                vec![
                    (vec![1, 0], vec![1]),
                    (vec![0, 1], vec![1]),
                    (vec![-1, -1], vec![1]),
                ],
            ),
            "P1xP1" => (
                fans::p1xp1(),
                vec![
                    (vec![1, 0], vec![1, 0]),
                    (vec![-1, 0], vec![1, 0]),
                    (vec![0, 1], vec![0, 1]),
                    (vec![0, -1], vec![0, 1]),
                ],
            ),
            "Bl1P2" => (
                fans::bl_p2(1),
                vec![
                    (vec![1, 0], vec![1, -1]),
                    (vec![0, 1], vec![1, -1]),
                    (vec![-1, -1], vec![1, 0]),
                    (vec![1, 1], vec![0, 1]),
                ],
            ),
            "Bl2P2" => (
                fans::bl_p2(2),
                vec![
                    (vec![1, 0], vec![1, -1, 0]),
                    (vec![0, 1], vec![1, -1, -1]),
                    (vec![-1, -1], vec![1, 0, -1]),
                    (vec![1, 1], vec![0, 1, 0]),
                    (vec![-1, 0], vec![0, 0, 1]),
                ],
            ),
            "Bl3P2" => (
                fans::bl_p2(3),
                vec![
                    (vec![1, 0], vec![1, -1, 0, -1]),
                    (vec![0, 1], vec![1, -1, -1, 0]),
                    (vec![-1, -1], vec![1, 0, -1, -1]),
                    (vec![1, 1], vec![0, 1, 0, 0]),
                    (vec![-1, 0], vec![0, 0, 1, 0]),
                    (vec![0, -1], vec![0, 0, 0, 1]),
                ],
            ),
            other => {
                let n: i64 = other.strip_prefix('F')?.parse().ok()?;
                (
                    fans::hirzebruch(n),
                    vec![
                        (vec![1, 0], vec![1, 0]),
                        (vec![0, 1], vec![0, 1]),
                        (vec![-1, n], vec![1, 0]),
                        (vec![0, -1], vec![n, 1]),
                    ],
                )
            }
        };
        let mut classes = vec![RatVector::zeros(self.rank()); fan.rays().len()];
        for (ray, class) in pairs {
            let i = fan.ray_index(&v(&ray))?;
            classes[i] = v(&class);
        }
        Some((fan, classes))
    }

    /// Class of a torus-invariant divisor on a toric fixture.
    pub fn class_of_toric(&self, d: &ToricDivisor) -> Option<RatVector> {
        let (_, classes) = self.toric_model()?;
        if classes.len() != d.coeffs().len() {
            return None;
        }
        Some(
            d.coeffs()
                .iter()
                .zip(&classes)
                .fold(RatVector::zeros(self.rank()), |acc, (a, c)| {
                    &acc + &c.scale(a)
                }),
        )
    }
}

/// Built-in surfaces with standard toric data.
pub mod surfaces {
    use super::*;

    fn build(name: &str, gram: &[&[i64]], eff: &[&[i64]], nef: &[&[i64]]) -> SurfaceLattice {
        let g = GramMatrix::from_ints(gram).expect("symmetric");
        let vs = |xs: &[&[i64]]| xs.iter().map(|x| RatVector::from_ints(x)).collect();
        SurfaceLattice::new(name, g, vs(eff), vs(nef)).expect("valid fixture")
    }

    /// Basis `H`.
    pub fn p2() -> SurfaceLattice {
        build("P2", &[&[1]], &[&[1]], &[&[1]])
    }

    /// Basis of the two rulings.
    pub fn p1xp1() -> SurfaceLattice {
        build(
            "P1xP1",
            &[&[0, 1], &[1, 0]],
            &[&[1, 0], &[0, 1]],
            &[&[1, 0], &[0, 1]],
        )
    }

    /// Basis `H, E_1, .., E_k` for `k <= 3` blown-up torus-fixed points.
    pub fn bl_p2(k: usize) -> Option<SurfaceLattice> {
        let s = match k {
            1 => build(
                "Bl1P2",
                &[&[1, 0], &[0, -1]],
                &[&[0, 1], &[1, -1]],
                &[&[1, 0], &[1, -1]],
            ),
            2 => build(
                "Bl2P2",
                &[&[1, 0, 0], &[0, -1, 0], &[0, 0, -1]],
                &[&[0, 1, 0], &[0, 0, 1], &[1, -1, -1]],
                &[&[1, 0, 0], &[1, -1, 0], &[1, 0, -1]],
            ),
            3 => build(
                "Bl3P2",
                &[
                    &[1, 0, 0, 0],
                    &[0, -1, 0, 0],
                    &[0, 0, -1, 0],
                    &[0, 0, 0, -1],
                ],
                &[
                    &[0, 1, 0, 0],
                    &[0, 0, 1, 0],
                    &[0, 0, 0, 1],
                    &[1, -1, -1, 0],
                    &[1, -1, 0, -1],
                    &[1, 0, -1, -1],
                ],
                &[
                    &[1, 0, 0, 0],
                    &[1, -1, 0, 0],
                    &[1, 0, -1, 0],
                    &[1, 0, 0, -1],
                    &[2, -1, -1, -1],
                ],
            ),
            _ => return None,
        };
        Some(s)
    }

    /// Hirzebruch surface in the basis fiber `F`, negative section `C`.
    pub fn hirzebruch(n: i64) -> Option<SurfaceLattice> {
        if !(0..=3).contains(&n) {
            return None;
        }
        Some(build(
            &format!("F{n}"),
            &[&[0, 1], &[1, -n]],
            &[&[1, 0], &[0, 1]],
            &[&[1, 0], &[n, 1]],
        ))
    }

    /// Looks a fixture up by name (`P2`, `P1xP1`, `Bl1P2`..`Bl3P2`, `F0`..`F3`).
    pub fn by_name(name: &str) -> Option<SurfaceLattice> {
        match name {
            "P2" => Some(p2()),
            "P1xP1" => Some(p1xp1()),
            "Bl1P2" => bl_p2(1),
            "Bl2P2" => bl_p2(2),
            "Bl3P2" => bl_p2(3),
            _ => hirzebruch(name.strip_prefix('F')?.parse().ok()?),
        }
    }

    pub fn all() -> Vec<SurfaceLattice> {
        [
            "P2", "P1xP1", "Bl1P2", "Bl2P2", "Bl3P2", "F0", "F1", "F2", "F3",
        ]
        .iter()
        .filter_map(|n| by_name(n))
        .collect()
    }
}

/// `x = P + N` with `P` nef, `N = Σ a_i C_i` over a negative definite
/// support of curve generators and `P·C_i = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZariskiDecomposition {
    pub positive: RatVector,
    pub negative: RatVector,
    /// Indices into the effective generators.
    pub support: Vec<usize>,
    #[serde(with = "crate::rational::serde_rat_vec")]
    pub multiplicities: Vec<Rat>,
    #[serde(with = "crate::rational::serde_rat")]
    pub volume: Rat,
}

fn subsets(n: usize) -> Vec<Vec<usize>> {
    (0u64..1 << n)
        .map(|mask| (0..n).filter(|&i| mask >> i & 1 == 1).collect())
        .collect()
}

fn try_support(
    s: &SurfaceLattice,
    x: &RatVector,
    support: &[usize],
) -> Option<ZariskiDecomposition> {
    let curves: Vec<RatVector> = support.iter().map(|&i| s.eff[i].clone()).collect();
    let mult: Vec<Rat> = if curves.is_empty() {
        Vec::new()
    } else {
        let g = s.gram.restrict(&curves);
        if signature(&g) != (0, 0, curves.len()) {
            return None;
        }
        let rhs: Vec<Rat> = curves.iter().map(|c| s.pair(x, c)).collect();
        let sol = linalg::solve(g.matrix(), &rhs)?;
        if sol.iter().any(|a| !a.is_positive()) {
            return None;
        }
        sol
    };
    let negative = curves
        .iter()
        .zip(&mult)
        .fold(RatVector::zeros(s.rank()), |acc, (c, a)| &acc + &c.scale(a));
    let positive = x - &negative;
    if !s.is_nef(&positive) {
        return None;
    }
    let volume = s.self_intersection(&positive);
    Some(ZariskiDecomposition {
        positive,
        negative,
        support: support.to_vec(),
        multiplicities: mult,
        volume,
    })
}

/// Zariski decomposition of a pseudo-effective class.
pub fn zariski(s: &SurfaceLattice, x: &RatVector) -> Result<ZariskiDecomposition, BigconeError> {
    s.check(x)?;
    if !s.is_psef(x) {
        return Err(BigconeError::NotPsef(x.clone()));
    }
    subsets(s.eff.len())
        .into_par_iter()
        .filter_map(|sup| try_support(s, x, &sup))
        .min_by(|a, b| a.support.cmp(&b.support))
        .ok_or_else(|| BigconeError::NoDecomposition(x.clone()))
}

/// Positive intersection product of a big class: its Zariski positive part.
pub fn psi(s: &SurfaceLattice, x: &RatVector) -> Result<RatVector, BigconeError> {
    let z = zariski(s, x)?;
    if !z.volume.is_positive() {
        return Err(BigconeError::NotBig {
            class: x.clone(),
            vol: z.volume,
        });
    }
    Ok(z.positive)
}

/// `P·P` for pseudo-effective classes, zero otherwise.
pub fn vol(s: &SurfaceLattice, x: &RatVector) -> Rat {
    match zariski(s, x) {
        Ok(z) => z.volume,
        Err(_) => Rat::zero(),
    }
}

/// Support of the negative part, or `None` outside the pseudo-effective cone.
pub fn chamber(s: &SurfaceLattice, x: &RatVector) -> Option<Vec<usize>> {
    zariski(s, x).ok().map(|z| z.support)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DvolReport {
    pub chamber_minus: Option<Vec<usize>>,
    pub chamber_center: Vec<usize>,
    pub chamber_plus: Option<Vec<usize>>,
    pub same_chamber: bool,
    /// `2 ψ(α)·γ`.
    #[serde(with = "crate::rational::serde_rat")]
    pub derivative: Rat,
    /// `(vol(α+tγ) - vol(α-tγ)) / 2t`.
    #[serde(with = "crate::rational::serde_rat")]
    pub symmetric_quotient: Rat,
    /// `(vol(α+tγ) - vol(α)) / t`.
    #[serde(with = "crate::rational::serde_rat")]
    pub forward_quotient: Rat,
    /// `(vol(α) - vol(α-tγ)) / t`.
    #[serde(with = "crate::rational::serde_rat")]
    pub backward_quotient: Rat,
    /// Exact equality of the symmetric quotient and the derivative, when
    /// both endpoints share the chamber of `α`.
    pub exact_match: Option<bool>,
}

/// Compares the difference quotient of `vol` along `γ` with `2 ψ(α)·γ`.
pub fn dvol_check(
    s: &SurfaceLattice,
    alpha: &RatVector,
    gamma: &RatVector,
    t: &Rat,
) -> Result<DvolReport, BigconeError> {
    if t.is_zero() {
        return Err(BigconeError::ZeroStep);
    }
    s.check(gamma)?;
    let z = zariski(s, alpha)?;
    if !z.volume.is_positive() {
        return Err(BigconeError::NotBig {
            class: alpha.clone(),
            vol: z.volume,
        });
    }
    let step = gamma.scale(t);
    let plus = alpha + &step;
    let minus = alpha - &step;
    let (vp, vm) = (vol(s, &plus), vol(s, &minus));
    let derivative = int(2) * s.pair(&z.positive, gamma);
    let symmetric_quotient = (&vp - &vm) / (int(2) * t);
    let forward_quotient = (&vp - &z.volume) / t;
    let backward_quotient = (&z.volume - &vm) / t;
    let (cp, cm) = (chamber(s, &plus), chamber(s, &minus));
    let same_chamber = cp.as_ref() == Some(&z.support) && cm.as_ref() == Some(&z.support);
    let exact_match = same_chamber.then(|| symmetric_quotient == derivative);
    Ok(DvolReport {
        chamber_minus: cm,
        chamber_center: z.support,
        chamber_plus: cp,
        same_chamber,
        derivative,
        symmetric_quotient,
        forward_quotient,
        backward_quotient,
        exact_match,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SandwichFailure {
    pub sample: RatVector,
    pub image: RatVector,
    pub curve: RatVector,
    #[serde(with = "crate::rational::serde_rat")]
    pub value: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualSample {
    pub class: RatVector,
    pub interior: bool,
    /// A big class whose positive part is this sample.
    pub preimage: Option<RatVector>,
    /// Index of an effective generator proportional to the sample.
    pub curve_multiple: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SandwichReport {
    pub big_checked: usize,
    pub right_inclusion_failures: Vec<SandwichFailure>,
    pub dual_samples: Vec<DualSample>,
    pub holds: bool,
}

fn proportional_index(gens: &[RatVector], c: &RatVector) -> Option<usize> {
    gens.iter().position(|g| {
        let i = match g.iter().position(|x| !x.is_zero()) {
            Some(i) => i,
            None => return false,
        };
        let ratio = &c[i] / &g[i];
        ratio.is_positive() && g.scale(&ratio) == *c
    })
}

/// `ψ` maps big classes into the closed dual of the effective cone and hits
/// every sampled interior point of it.
pub fn duality_sandwich_check(
    s: &SurfaceLattice,
    big_samples: &[RatVector],
    dual_samples: &[RatVector],
) -> Result<SandwichReport, BigconeError> {
    let mut failures = Vec::new();
    let mut big_checked = 0;
    for x in big_samples {
        let p = match psi(s, x) {
            Ok(p) => p,
            Err(BigconeError::NotBig { .. }) | Err(BigconeError::NotPsef(_)) => continue,
            Err(e) => return Err(e),
        };
        big_checked += 1;
        if let Some((curve, value)) = s.nef_witness(&p) {
            failures.push(SandwichFailure {
                sample: x.clone(),
                image: p,
                curve,
                value,
            });
        }
    }
    let mut duals = Vec::new();
    let mut hit_all = true;
    for c in dual_samples {
        s.check(c)?;
        let interior = s.is_ample(c);
        let preimage = if interior {
            let found = match psi(s, c) {
                Ok(p) if p == *c => Some(c.clone()),
                _ => None,
            };
            hit_all &= found.is_some();
            found
        } else {
            None
        };
        duals.push(DualSample {
            class: c.clone(),
            interior,
            preimage,
            curve_multiple: proportional_index(&s.eff, c),
        });
    }
    let holds = failures.is_empty() && hit_all;
    Ok(SandwichReport {
        big_checked,
        right_inclusion_failures: failures,
        dual_samples: duals,
        holds,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FujitaApproximation {
    pub ample: RatVector,
    #[serde(with = "crate::rational::serde_rat")]
    pub t: Rat,
    pub m: u64,
    #[serde(with = "crate::rational::serde_rat")]
    pub vol_ample: Rat,
    #[serde(with = "crate::rational::serde_rat")]
    pub vol_class: Rat,
}

/// An ample `A <= x` with `vol(A) >= (1 - eps) vol(x)`, of the form
/// `(1-t) ψ(x) + (t/m) h` for the sum `h` of the nef generators.
pub fn fujita_approx(
    s: &SurfaceLattice,
    x: &RatVector,
    eps: &Rat,
) -> Result<FujitaApproximation, BigconeError> {
    if !eps.is_positive() {
        return Err(BigconeError::Precondition(format!(
            "eps = {eps} must be positive"
        )));
    }
    let p = psi(s, x)?;
    let vx = s.self_intersection(&p);
    let h = s
        .nef
        .iter()
        .fold(RatVector::zeros(s.rank()), |acc, n| &acc + n);
    if !s.is_ample(&h) {
        return Err(BigconeError::NoAmpleBelow(x.clone()));
    }
    let mut m: u64 = 1;
    let below = loop {
        let d = &p - &h.scale(&Rat::new(1.into(), m.into()));
        if s.is_psef(&d) {
            break m;
        }
        if m > 1 << 40 {
            return Err(BigconeError::NoAmpleBelow(x.clone()));
        }
        m *= 2;
    };
    let target = (Rat::one() - eps) * &vx;
    let mut t = Rat::new(1.into(), 2.into());
    for _ in 0..128 {
        let a = &p.scale(&(Rat::one() - &t)) + &h.scale(&(&t / Rat::from_integer(below.into())));
        let va = s.self_intersection(&a);
        if va >= target && s.is_ample(&a) && s.is_psef(&(x - &a)) {
            return Ok(FujitaApproximation {
                ample: a,
                t,
                m: below,
                vol_ample: va,
                vol_class: vx,
            });
        }
        t /= int(2);
    }
    Err(BigconeError::NoAmpleBelow(x.clone()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    #[serde(with = "crate::rational::serde_rat")]
    pub lhs: Rat,
    #[serde(with = "crate::rational::serde_rat")]
    pub rhs: Rat,
    pub holds: bool,
}

impl BoundReport {
    fn new(lhs: Rat, rhs: Rat) -> Self {
        let holds = lhs >= rhs;
        BoundReport { lhs, rhs, holds }
    }
}

/// `vol(A - B) >= A² - 2 A·B` for nef `A, B`.
pub fn bound_difference_check(
    s: &SurfaceLattice,
    a: &RatVector,
    b: &RatVector,
) -> Result<BoundReport, BigconeError> {
    s.require_nef(a)?;
    s.require_nef(b)?;
    let lhs = vol(s, &(a - b));
    let rhs = s.self_intersection(a) - int(2) * s.pair(a, b);
    Ok(BoundReport::new(lhs, rhs))
}

/// `vol(β + tγ) >= β² + 2t β·γ - 64 ω² t²` under `β <= ω`, `ω ± γ` nef,
/// `ω` nef and big, `β` nef, `|t| <= 1`.
pub fn bound_perturbation_check(
    s: &SurfaceLattice,
    beta: &RatVector,
    gamma: &RatVector,
    omega: &RatVector,
    t: &Rat,
) -> Result<BoundReport, BigconeError> {
    if t.abs() > Rat::one() {
        return Err(BigconeError::Precondition(format!(
            "t = {t} outside [-1, 1]"
        )));
    }
    s.require_nef(beta)?;
    s.require_nef(omega)?;
    s.require_nef(&(omega + gamma))?;
    s.require_nef(&(omega - gamma))?;
    let w2 = s.self_intersection(omega);
    if !w2.is_positive() {
        return Err(BigconeError::NotBig {
            class: omega.clone(),
            vol: w2,
        });
    }
    let diff = omega - beta;
    if !s.is_psef(&diff) {
        return Err(BigconeError::NotPsef(diff));
    }
    let lhs = vol(s, &(beta + &gamma.scale(t)));
    let rhs = s.self_intersection(beta) + int(2) * t * s.pair(beta, gamma) - int(64) * w2 * t * t;
    Ok(BoundReport::new(lhs, rhs))
}

/// `c1·c2 <= d1·d2` for nef classes with `d_i - c_i` pseudo-effective.
pub fn monotone_product_check(
    s: &SurfaceLattice,
    c: [&RatVector; 2],
    d: [&RatVector; 2],
) -> Result<BoundReport, BigconeError> {
    for x in c.iter().chain(d.iter()) {
        s.require_nef(x)?;
    }
    for i in 0..2 {
        let diff = d[i] - c[i];
        if !s.is_psef(&diff) {
            return Err(BigconeError::NotPsef(diff));
        }
    }
    Ok(BoundReport::new(s.pair(d[0], d[1]), s.pair(c[0], c[1])))
}

/// Distinct negative supports met along a list of classes.
pub fn chambers_met(s: &SurfaceLattice, xs: &[RatVector]) -> BTreeSet<Vec<usize>> {
    xs.iter().filter_map(|x| chamber(s, x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use crate::toric::volume_sections;

    fn v(x: &[i64]) -> RatVector {
        RatVector::from_ints(x)
    }

    fn bl1() -> SurfaceLattice {
        surfaces::bl_p2(1).unwrap()
    }

    #[test]
    fn fixtures_are_consistent() {
        for s in surfaces::all() {
            let nef = ConeGen::new(s.rank(), s.nef_gens().to_vec()).unwrap();
            assert!(nef.set_eq(&s.nef_cone_from_duality()), "{}", s.name());
            let (fan, classes) = s.toric_model().unwrap();
            // Effective cone is spanned by the boundary curves.
            let boundary = ConeGen::new(s.rank(), classes.clone()).unwrap();
            assert!(boundary.set_eq(&s.eff_cone()), "{}", s.name());
            // Volumes of boundary divisors and of the anticanonical class
            // agree with the section-growth limit.
            let n = classes.len();
            let mut coeffs: Vec<Vec<i64>> = (0..n)
                .map(|i| (0..n).map(|j| (i == j) as i64).collect())
                .collect();
            coeffs.push(vec![1; n]);
            for a in coeffs {
                let d = ToricDivisor::from_ints(fan.clone(), &a).unwrap();
                let (_, exact) = volume_sections(&d, 1).unwrap();
                let class = s.class_of_toric(&d).unwrap();
                assert_eq!(exact, vol(&s, &class), "{} {a:?}", s.name());
            }
        }
    }

    #[test]
    fn positive_parts() {
        let s = bl1();
        let z = zariski(&s, &v(&[1, 1])).unwrap();
        assert_eq!(z.positive, v(&[1, 0]));
        assert_eq!(z.negative, v(&[0, 1]));
        assert_eq!(z.volume, int(1));
        assert_eq!(psi(&s, &v(&[3, -1])).unwrap(), v(&[3, -1]));
        assert_eq!(vol(&s, &v(&[3, -1])), int(8));
        assert_eq!(psi(&s, &v(&[1, 0])).unwrap(), v(&[1, 0]));
        assert!(matches!(
            psi(&s, &v(&[1, -1])),
            Err(BigconeError::NotBig { .. })
        ));
        assert!(matches!(
            psi(&s, &v(&[-1, 0])),
            Err(BigconeError::NotPsef(_))
        ));
        assert_eq!(vol(&s, &v(&[0, -1])), int(0));
        let p2 = surfaces::p2();
        for d in 1..5 {
            assert_eq!(vol(&p2, &v(&[d])), int(d * d));
        }
    }

    #[test]
    fn derivatives() {
        let s = bl1();
        let t = frac(1, 4);
        let r = dvol_check(&s, &v(&[1, 1]), &v(&[0, 1]), &t).unwrap();
        assert!(r.same_chamber);
        assert_eq!(r.derivative, int(0));
        assert_eq!(r.exact_match, Some(true));
        let r = dvol_check(&s, &v(&[1, 1]), &v(&[1, 0]), &t).unwrap();
        assert_eq!(r.derivative, int(2));
        assert_eq!(r.exact_match, Some(true));
        let r = dvol_check(&surfaces::p2(), &v(&[1]), &v(&[1]), &t).unwrap();
        assert_eq!((r.derivative.clone(), r.exact_match), (int(2), Some(true)));
        // Across the wall through H: -tE is nef side, +tE contracts E.
        let r = dvol_check(&s, &v(&[1, 0]), &v(&[0, 1]), &t).unwrap();
        assert!(!r.same_chamber);
        assert_eq!(r.exact_match, None);
        assert_eq!(r.forward_quotient, int(0));
        assert!(matches!(
            dvol_check(&s, &v(&[1, 1]), &v(&[1, 0]), &int(0)),
            Err(BigconeError::ZeroStep)
        ));
    }

    #[test]
    fn sandwich() {
        let s = bl1();
        let r = duality_sandwich_check(&s, &[v(&[1, 1]), v(&[2, -1])], &[v(&[1, 0]), v(&[3, -1])])
            .unwrap();
        assert!(r.holds);
        assert_eq!(r.big_checked, 2);
        assert!(!r.dual_samples[0].interior);
        assert_eq!(r.dual_samples[1].preimage, Some(v(&[3, -1])));
        let p = psi(&s, &v(&[1, 1])).unwrap();
        assert_eq!(s.pair(&p, &v(&[0, 1])), int(0));
        assert_eq!(s.pair(&p, &v(&[1, -1])), int(1));
    }

    #[test]
    fn fujita() {
        let s = bl1();
        let a = fujita_approx(&s, &v(&[1, 1]), &frac(1, 10)).unwrap();
        assert!(s.is_ample(&a.ample));
        assert!(a.vol_ample >= frac(9, 10));
        assert!(s.is_psef(&(&v(&[1, 1]) - &a.ample)));
        assert!(fujita_approx(&s, &v(&[3, -1]), &int(1)).is_ok());
        assert!(fujita_approx(&s, &v(&[1, 1]), &int(0)).is_err());
    }

    #[test]
    fn bounds() {
        let p2 = surfaces::p2();
        let r = bound_difference_check(&p2, &v(&[2]), &v(&[1])).unwrap();
        assert_eq!(
            (r.lhs.clone(), r.rhs.clone(), r.holds),
            (int(1), int(0), true)
        );
        let s = bl1();
        let r = bound_difference_check(&s, &v(&[3, -1]), &v(&[1, -1])).unwrap();
        assert_eq!((r.lhs.clone(), r.rhs.clone()), (int(4), int(4)));
        assert!(matches!(
            bound_difference_check(&s, &v(&[0, 1]), &v(&[1, 0])),
            Err(BigconeError::NotNef { .. })
        ));
        let r = bound_perturbation_check(&p2, &v(&[1]), &v(&[1]), &v(&[1]), &frac(1, 2)).unwrap();
        assert_eq!(
            (r.lhs.clone(), r.rhs.clone(), r.holds),
            (frac(9, 4), int(-14), true)
        );
        let r = bound_perturbation_check(&p2, &v(&[1]), &v(&[1]), &v(&[1]), &int(0)).unwrap();
        assert_eq!(r.lhs, r.rhs);
        let r =
            bound_perturbation_check(&p2, &v(&[1]), &v(&[2]), &v(&[1]), &frac(1, 2)).unwrap_err();
        assert!(matches!(r, BigconeError::NotNef { .. }));
        let r = bound_perturbation_check(&s, &v(&[1, 0]), &v(&[0, 1]), &v(&[3, -1]), &frac(1, 4))
            .unwrap();
        // vol(H + E/4) = 1; rhs = 1 + 0 - 64·8/16.
        assert_eq!((r.lhs.clone(), r.rhs.clone()), (int(1), int(-31)));
        let r =
            monotone_product_check(&s, [&v(&[1, -1]), &v(&[1, 0])], [&v(&[1, 0]), &v(&[3, -1])])
                .unwrap();
        assert_eq!(
            (r.lhs.clone(), r.rhs.clone(), r.holds),
            (int(3), int(1), true)
        );
    }
}
