//! Globally valued field structures on `k(t)` for `k = Q` or `F_p`: places,
//! principal divisors, the product formula, heights, piecewise-linear term
//! evaluation, and measures on divisorial valuations of toric surfaces.
//!
//! Heights follow the convention `ht(f) = r Σ_v μ(v) max(v(f), 0)`, counting
//! zeros of `f`. Under the product formula this equals the count of poles,
//! so `ht(f) = ht(1/f)` for any measure satisfying it.

pub mod chebyshev;
pub mod poly;
pub mod term;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bigcone::{BigconeError, SurfaceLattice};
use crate::exactgeom::dd;
use crate::rational::{int, rat_from_json, rat_to_json, Rat, RatVector};

pub use chebyshev::{chebyshev_constant, chebyshev_constant_with_tolerance, ChebyshevReport};
pub use poly::{BaseField, Poly, RationalFunction};
pub use term::TropTerm;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GvfError {
    #[error("the zero function has no divisor")]
    ZeroFunction,
    #[error("unsupported base field {0}")]
    BadField(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("functions and measure live over different base fields")]
    FieldMismatch,
    #[error("{0} is not a monic irreducible polynomial")]
    NotIrreducible(String),
    #[error("place {0} listed twice")]
    DuplicatePlace(String),
    #[error("negative mass {mass} at {place}")]
    NegativeMass { place: String, mass: Rat },
    #[error("scale must be positive, got {0}")]
    NonPositiveScale(Rat),
    #[error("term needs {expected} arguments, got {found}")]
    Arity { expected: usize, found: usize },
    #[error("no nonzero nonnegative measure satisfies the product formula")]
    NoSolution,
    #[error("superadditivity fails at ({n}, {m}): {detail}")]
    NotSuperadditive { n: u64, m: u64, detail: String },
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error(
        "class pairs to {value} with effective generator {curve}, so it is outside the dual cone"
    )]
    NotDual { curve: RatVector, value: Rat },
    #[error("surface {0} has no toric model")]
    NotToric(String),
    #[error("empty tuple")]
    Empty,
    #[error(transparent)]
    Bigcone(#[from] BigconeError),
}

/// A place of `k(t)/k`: a monic irreducible polynomial or infinity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Finite(Poly),
    Infinity,
}

impl Place {
    pub fn finite(p: Poly) -> Result<Self, GvfError> {
        if p.lead() != Rat::one() || !p.is_irreducible() {
            return Err(GvfError::NotIrreducible(p.to_string()));
        }
        Ok(Place::Finite(p))
    }

    /// Residue degree.
    pub fn weight(&self) -> u64 {
        match self {
            Place::Finite(p) => p.degree() as u64,
            Place::Infinity => 1,
        }
    }

    /// Order of a nonzero function at this place.
    pub fn order(&self, f: &RationalFunction) -> i64 {
        match self {
            Place::Finite(p) => f.num.order_at(p) as i64 - f.den.order_at(p) as i64,
            Place::Infinity => f.den.degree() as i64 - f.num.degree() as i64,
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinity => write!(f, "inf"),
        }
    }
}

/// Principal divisor: nonzero orders by place.
pub type Divisor = BTreeMap<Place, i64>;

/// `(f) = Σ_v v(f) v`, with finite orders from exact factorization and
/// `ord_∞ = deg(den) - deg(num)`.
pub fn divisor_of(f: &RationalFunction) -> Result<Divisor, GvfError> {
    let mut d = Divisor::new();
    for (poly, sign) in [(&f.num, 1i64), (&f.den, -1)] {
        let (_, fs) = poly.factor()?;
        for (g, k) in fs {
            *d.entry(Place::Finite(g)).or_insert(0) += sign * k as i64;
        }
    }
    let inf = f.den.degree() as i64 - f.num.degree() as i64;
    if inf != 0 {
        d.insert(Place::Infinity, inf);
    }
    d.retain(|_, v| *v != 0);
    Ok(d)
}

/// `Σ_v weight(v) · ord_v(f)`, zero for every nonzero `f`.
pub fn degree_of(d: &Divisor) -> i64 {
    d.iter().map(|(p, k)| p.weight() as i64 * k).sum()
}

/// Finitely supported measure on places.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaceMeasure {
    field: BaseField,
    support: BTreeMap<Place, Rat>,
}

impl PlaceMeasure {
    pub fn new(field: BaseField, masses: Vec<(Place, Rat)>) -> Result<Self, GvfError> {
        let mut support = BTreeMap::new();
        for (p, m) in masses {
            if let Place::Finite(q) = &p {
                if q.field() != field {
                    return Err(GvfError::FieldMismatch);
                }
            }
            if m.is_negative() {
                return Err(GvfError::NegativeMass {
                    place: p.to_string(),
                    mass: m,
                });
            }
            if support.insert(p.clone(), m).is_some() {
                return Err(GvfError::DuplicatePlace(p.to_string()));
            }
        }
        Ok(PlaceMeasure { field, support })
    }

    /// Mass equal to the residue degree at each listed place.
    pub fn canonical(field: BaseField, places: impl IntoIterator<Item = Place>) -> Self {
        let support = places.into_iter().map(|p| {
            let w = int(p.weight() as i64);
            (p, w)
        });
        PlaceMeasure {
            field,
            support: support.collect(),
        }
    }

    /// The canonical measure on infinity and every place where one of `fns`
    /// has a zero or a pole.
    pub fn canonical_for(field: BaseField, fns: &[RationalFunction]) -> Result<Self, GvfError> {
        let mut places: BTreeSet<Place> = BTreeSet::from([Place::Infinity]);
        for f in fns {
            if f.field() != field {
                return Err(GvfError::FieldMismatch);
            }
            places.extend(divisor_of(f)?.into_keys());
        }
        Ok(Self::canonical(field, places))
    }

    pub fn field(&self) -> BaseField {
        self.field
    }

    pub fn support(&self) -> &BTreeMap<Place, Rat> {
        &self.support
    }

    pub fn mass(&self, p: &Place) -> Option<&Rat> {
        self.support.get(p)
    }

    pub fn scale(&self, s: &Rat) -> Result<Self, GvfError> {
        if !s.is_positive() {
            return Err(GvfError::NonPositiveScale(s.clone()));
        }
        Ok(PlaceMeasure {
            field: self.field,
            support: self
                .support
                .iter()
                .map(|(p, m)| (p.clone(), m * s))
                .collect(),
        })
    }

    /// Keeps only the places satisfying `keep`.
    pub fn restrict(&self, keep: impl Fn(&Place) -> bool) -> Self {
        PlaceMeasure {
            field: self.field,
            support: self
                .support
                .iter()
                .filter(|(p, _)| keep(p))
                .map(|(p, m)| (p.clone(), m.clone()))
                .collect(),
        }
    }

    pub fn with_mass(&self, p: Place, m: Rat) -> Self {
        let mut out = self.clone();
        out.support.insert(p, m);
        out
    }

    fn check_field(&self, fns: &[&RationalFunction]) -> Result<(), GvfError> {
        if fns.iter().any(|f| f.field() != self.field) {
            return Err(GvfError::FieldMismatch);
        }
        Ok(())
    }
}

impl Serialize for PlaceMeasure {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        struct Entries<'a>(&'a BTreeMap<Place, Rat>);
        impl Serialize for Entries<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                let mut seq = s.serialize_seq(Some(self.0.len()))?;
                for (p, m) in self.0 {
                    let mut e = serde_json::Map::new();
                    match p {
                        Place::Finite(q) => e.insert("poly".into(), q.to_string().into()),
                        Place::Infinity => e.insert("inf".into(), true.into()),
                    };
                    e.insert("mass".into(), rat_to_json(m));
                    seq.serialize_element(&e)?;
                }
                seq.end()
            }
        }
        let mut top = s.serialize_map(Some(2))?;
        top.serialize_entry("field", &self.field.to_string())?;
        top.serialize_entry("places", &Entries(&self.support))?;
        top.end()
    }
}

impl<'de> Deserialize<'de> for PlaceMeasure {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Entry {
            poly: Option<String>,
            #[serde(default)]
            inf: bool,
            mass: serde_json::Value,
        }
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Doc {
            field: Option<String>,
            places: Vec<Entry>,
        }
        let doc = Doc::deserialize(d)?;
        let field = match doc.field {
            Some(f) => BaseField::parse(&f).map_err(de::Error::custom)?,
            None => BaseField::Rational,
        };
        let mut masses = Vec::new();
        for e in doc.places {
            let mass = rat_from_json(&e.mass)
                .ok_or_else(|| de::Error::custom(format!("bad mass {}", e.mass)))?;
            let place = match (e.poly, e.inf) {
                (None, true) => Place::Infinity,
                (Some(p), false) => {
                    let f = RationalFunction::parse(field, &p).map_err(de::Error::custom)?;
                    if !f.den.is_constant() {
                        return Err(de::Error::custom(format!("{p} is not a polynomial")));
                    }
                    let poly = f.num.scale(&f.den.lead().recip());
                    Place::finite(poly).map_err(de::Error::custom)?
                }
                _ => {
                    return Err(de::Error::custom(
                        "each place needs exactly one of poly or inf",
                    ))
                }
            };
            masses.push((place, mass));
        }
        PlaceMeasure::new(field, masses).map_err(de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidualReport {
    #[serde(with = "crate::rational::serde_rat")]
    pub residual: Rat,
    /// Places of the divisor carrying no mass.
    pub uncovered: Vec<String>,
}

/// `Σ_v μ(v) v(f)`.
pub fn product_formula_residual(
    f: &RationalFunction,
    mu: &PlaceMeasure,
) -> Result<ResidualReport, GvfError> {
    mu.check_field(&[f])?;
    let mut residual = Rat::zero();
    let mut uncovered = Vec::new();
    for (p, k) in divisor_of(f)? {
        match mu.mass(&p) {
            Some(m) => residual += m * int(k),
            None => uncovered.push(p.to_string()),
        }
    }
    Ok(ResidualReport {
        residual,
        uncovered,
    })
}

fn check_scale(r: &Rat) -> Result<(), GvfError> {
    if !r.is_positive() {
        return Err(GvfError::NonPositiveScale(r.clone()));
    }
    Ok(())
}

/// `r Σ_v μ(v) max(v(f), 0)`.
pub fn height(f: &RationalFunction, mu: &PlaceMeasure, r: &Rat) -> Result<Rat, GvfError> {
    projective_height(std::slice::from_ref(f), mu, r)
}

/// `r Σ_v μ(v) max(0, v(f_1), ..., v(f_n))` over nonzero entries.
pub fn projective_height(
    fs: &[RationalFunction],
    mu: &PlaceMeasure,
    r: &Rat,
) -> Result<Rat, GvfError> {
    check_scale(r)?;
    if fs.is_empty() {
        return Err(GvfError::Empty);
    }
    let refs: Vec<&RationalFunction> = fs.iter().collect();
    mu.check_field(&refs)?;
    let divs = fs.iter().map(divisor_of).collect::<Result<Vec<_>, _>>()?;
    let places: BTreeSet<&Place> = divs.iter().flat_map(|d| d.keys()).collect();
    let mut total = Rat::zero();
    for p in places {
        let Some(m) = mu.mass(p) else { continue };
        let top = divs
            .iter()
            .map(|d| d.get(p).copied().unwrap_or(0))
            .max()
            .unwrap_or(0)
            .max(0);
        total += m * int(top);
    }
    Ok(r * total)
}

/// `Σ_v μ(v) · term(v(f_1), ..., v(f_n))`.
pub fn eval_term(
    tt: &TropTerm,
    fs: &[RationalFunction],
    mu: &PlaceMeasure,
) -> Result<Rat, GvfError> {
    if fs.len() < tt.arity() {
        return Err(GvfError::Arity {
            expected: tt.arity(),
            found: fs.len(),
        });
    }
    let refs: Vec<&RationalFunction> = fs.iter().collect();
    mu.check_field(&refs)?;
    let divs = fs.iter().map(divisor_of).collect::<Result<Vec<_>, _>>()?;
    let places: BTreeSet<&Place> = divs.iter().flat_map(|d| d.keys()).collect();
    let mut total = Rat::zero();
    for p in places {
        let Some(m) = mu.mass(p) else { continue };
        let vals: Vec<Rat> = divs
            .iter()
            .map(|d| int(d.get(p).copied().unwrap_or(0)))
            .collect();
        total += m * tt.eval(&vals)?;
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WhaplesReport {
    pub places: Vec<String>,
    /// Extreme rays of the cone of nonnegative masses satisfying the
    /// product formula for every given function.
    pub rays: Vec<RatVector>,
    /// The solution ray when the cone is one-dimensional.
    pub unique_ray: Option<RatVector>,
    /// Whether the unique ray is proportional to the residue degrees.
    pub canonical: bool,
    /// Zeros or poles of the functions outside the given places.
    pub warnings: Vec<String>,
}

/// Nonnegative solutions `μ` of `Σ_v μ(v) v(f) = 0` for all `f` in `fns`.
pub fn artin_whaples_solve(
    places: &[Place],
    fns: &[RationalFunction],
) -> Result<WhaplesReport, GvfError> {
    let n = places.len();
    if n == 0 {
        return Err(GvfError::NoSolution);
    }
    let mut seen = BTreeSet::new();
    for p in places {
        if !seen.insert(p) {
            return Err(GvfError::DuplicatePlace(p.to_string()));
        }
    }
    let mut cons: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from((i == j) as i32)).collect())
        .collect();
    let mut warnings = Vec::new();
    for f in fns {
        let d = divisor_of(f)?;
        for p in d.keys() {
            if !places.contains(p) {
                warnings.push(format!(
                    "{f} has a zero or pole at {p}, which is not among the places"
                ));
            }
        }
        let row: Vec<BigInt> = places
            .iter()
            .map(|p| BigInt::from(d.get(p).copied().unwrap_or(0)))
            .collect();
        cons.push(row.iter().map(|x| -x).collect());
        cons.push(row);
    }
    let (lin, rays) = dd::cone_from_constraints(n, &cons);
    debug_assert!(lin.is_empty());
    let rays: Vec<RatVector> = rays
        .iter()
        .map(|r| RatVector::from_bigints(r))
        .filter(|r| !r.is_zero())
        .collect();
    if rays.is_empty() {
        return Err(GvfError::NoSolution);
    }
    let unique_ray = (rays.len() == 1).then(|| rays[0].clone());
    let weights =
        RatVector::from_ints(&places.iter().map(|p| p.weight() as i64).collect::<Vec<_>>());
    let canonical = unique_ray
        .as_ref()
        .is_some_and(|r| r.primitive() == weights.primitive());
    Ok(WhaplesReport {
        places: places.iter().map(|p| p.to_string()).collect(),
        rays,
        unique_ray,
        canonical,
        warnings,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaReport {
    /// Divisorial valuation of each torus-invariant prime divisor, by ray.
    pub valuations: Vec<String>,
    #[serde(with = "crate::rational::serde_rat_vec")]
    pub masses: Vec<Rat>,
    /// `Σ_D μ(v_D) v_D(χ^m)` for the coordinate characters `m`.
    #[serde(with = "crate::rational::serde_rat_vec")]
    pub product_formula: Vec<Rat>,
    /// Pairing the measure back against each prime divisor returns `a·[D]`.
    pub identity_holds: bool,
}

/// Measure `μ_a(v_D) = a·[D]` on the divisorial valuations of the boundary
/// of a toric surface, with its product-formula and section checks.
pub fn delta_measure(s: &SurfaceLattice, a: &RatVector) -> Result<DeltaReport, GvfError> {
    if a.dim() != s.rank() {
        return Err(BigconeError::Rank {
            expected: s.rank(),
            found: a.dim(),
        }
        .into());
    }
    if let Some(curve) = s.eff_gens().iter().find(|e| s.pair(a, e).is_negative()) {
        return Err(GvfError::NotDual {
            curve: curve.clone(),
            value: s.pair(a, curve),
        });
    }
    let (fan, classes) = s
        .toric_model()
        .ok_or_else(|| GvfError::NotToric(s.name().into()))?;
    let masses: Vec<Rat> = classes.iter().map(|c| s.pair(a, c)).collect();
    let valuations = fan.rays().iter().map(|r| format!("ord_D{r}")).collect();
    let dim = fan.dim();
    let product_formula = (0..dim)
        .map(|k| {
            fan.rays()
                .iter()
                .zip(&masses)
                .fold(Rat::zero(), |acc, (ray, m)| acc + m * &ray[k])
        })
        .collect();
    // v_D(D') is 1 if D = D' and 0 otherwise.
    let identity_holds = classes.iter().enumerate().all(|(j, c)| {
        let back: Rat = masses
            .iter()
            .enumerate()
            .filter(|(i, _)| *i == j)
            .map(|(_, m)| m.clone())
            .sum();
        back == s.pair(a, c)
    });
    Ok(DeltaReport {
        valuations,
        masses,
        product_formula,
        identity_holds,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FeketeReport {
    #[serde(with = "crate::rational::serde_rat")]
    pub best: Rat,
    pub best_n: u64,
    /// Successive strict improvements of `a_n / n`.
    pub certificate: Vec<(u64, String)>,
}

/// `max_{n <= n_max} a_n / n` for a sequence checked superadditive on all
/// pairs `n + m <= n_max`.
pub fn fekete_limit(a: impl Fn(u64) -> Rat, n_max: u64) -> Result<FeketeReport, GvfError> {
    if n_max == 0 {
        return Err(GvfError::Degenerate("n_max = 0".into()));
    }
    let vals: Vec<Rat> = (1..=n_max).map(&a).collect();
    for n in 1..=n_max {
        for m in 1..=n_max - n {
            let lhs = &vals[(n + m - 1) as usize];
            let rhs = &vals[(n - 1) as usize] + &vals[(m - 1) as usize];
            if *lhs < rhs {
                return Err(GvfError::NotSuperadditive {
                    n,
                    m,
                    detail: format!("{lhs} < {rhs}"),
                });
            }
        }
    }
    let mut best = &vals[0] / int(1);
    let mut best_n = 1;
    let mut certificate = vec![(1, best.to_string())];
    for n in 2..=n_max {
        let r = &vals[(n - 1) as usize] / int(n as i64);
        if r > best {
            best = r;
            best_n = n;
            certificate.push((n, best.to_string()));
        }
    }
    Ok(FeketeReport {
        best,
        best_n,
        certificate,
    })
}

/// A section at level `m` with its values at each sampled valuation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdelicSection {
    pub level: u32,
    pub values: Vec<RatVector>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdelicReport {
    pub checked: usize,
    /// `(section index, (1/m) Σ μ v(f))` for each violation.
    pub violations: Vec<(usize, String)>,
    pub passed: bool,
}

/// `(1/m) Σ_v μ(v) v(f) <= α` for every section.
pub fn adelic_consistency_check(
    masses: &[Rat],
    sections: &[(u32, Vec<Rat>)],
    alpha: &Rat,
) -> Result<AdelicReport, GvfError> {
    if alpha.is_negative() {
        return Err(GvfError::Degenerate(format!("slack {alpha} < 0")));
    }
    let mut violations = Vec::new();
    for (i, (m, vals)) in sections.iter().enumerate() {
        if *m == 0 {
            return Err(GvfError::Degenerate(format!("section {i} has level 0")));
        }
        if vals.len() != masses.len() {
            return Err(GvfError::Arity {
                expected: masses.len(),
                found: vals.len(),
            });
        }
        let s: Rat = masses.iter().zip(vals).map(|(a, b)| a * b).sum::<Rat>() / int(*m as i64);
        if s > *alpha {
            violations.push((i, s.to_string()));
        }
    }
    let passed = violations.is_empty();
    Ok(AdelicReport {
        checked: sections.len(),
        violations,
        passed,
    })
}

/// Masses and per-place orders of functions, for [`adelic_consistency_check`].
pub fn sections_from_functions(
    mu: &PlaceMeasure,
    fns: &[(u32, RationalFunction)],
) -> Result<(Vec<Rat>, Vec<(u32, Vec<Rat>)>), GvfError> {
    let refs: Vec<&RationalFunction> = fns.iter().map(|(_, f)| f).collect();
    mu.check_field(&refs)?;
    let masses: Vec<Rat> = mu.support.values().cloned().collect();
    let sections = fns
        .iter()
        .map(|(m, f)| (*m, mu.support.keys().map(|p| int(p.order(f))).collect()))
        .collect();
    Ok((masses, sections))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigcone::surfaces;
    use crate::rational::frac;

    const Q: BaseField = BaseField::Rational;

    fn rf(s: &str) -> RationalFunction {
        RationalFunction::parse(Q, s).unwrap()
    }

    fn place(s: &str) -> Place {
        Place::finite(rf(s).num).unwrap()
    }

    #[test]
    fn divisors() {
        let d = divisor_of(&rf("t^2+1")).unwrap();
        assert_eq!(d.get(&place("t^2+1")), Some(&1));
        assert_eq!(d.get(&Place::Infinity), Some(&-2));
        assert_eq!(degree_of(&d), 0);
        let d = divisor_of(&rf("(t-1)/t")).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.get(&place("t")), Some(&-1));
        assert!(divisor_of(&rf("5")).unwrap().is_empty());
        assert!(Place::finite(rf("t^2-1").num).is_err());
    }

    #[test]
    fn residuals_and_heights() {
        let f = rf("t^2+1");
        let mu = PlaceMeasure::canonical_for(Q, std::slice::from_ref(&f)).unwrap();
        assert_eq!(product_formula_residual(&f, &mu).unwrap().residual, int(0));
        let t = rf("t");
        let mu = PlaceMeasure::canonical_for(Q, std::slice::from_ref(&t)).unwrap();
        let doubled = mu.with_mass(place("t"), int(2));
        assert_eq!(
            product_formula_residual(&t, &doubled).unwrap().residual,
            int(1)
        );
        let one = Rat::one();
        assert_eq!(height(&t, &mu, &one).unwrap(), int(1));
        let mu2 = PlaceMeasure::canonical_for(Q, std::slice::from_ref(&f)).unwrap();
        assert_eq!(height(&f, &mu2, &one).unwrap(), int(2));
        assert_eq!(height(&rf("7"), &mu, &one).unwrap(), int(0));
        assert_eq!(
            projective_height(&[rf("1"), t.clone()], &mu, &one).unwrap(),
            int(1)
        );
        assert_eq!(projective_height(&[rf("1")], &mu, &one).unwrap(), int(0));
        assert_eq!(
            projective_height(&[t.clone(), rf("t^2")], &mu, &one).unwrap(),
            int(2)
        );
        assert!(height(&t, &mu, &int(0)).is_err());
    }

    #[test]
    fn terms() {
        let fs = [rf("t"), rf("t-1")];
        let mu = PlaceMeasure::canonical_for(Q, &fs).unwrap();
        let tt = TropTerm::parse("min(x1, x2)").unwrap();
        assert_eq!(eval_term(&tt, &fs, &mu).unwrap(), int(-1));
        let id = TropTerm::parse("x1").unwrap();
        assert_eq!(eval_term(&id, &fs, &mu).unwrap(), int(0));
        let pos = TropTerm::parse("x1 - min(x1, 0)").unwrap();
        let f = rf("t^2+1");
        let mu2 = PlaceMeasure::canonical_for(Q, std::slice::from_ref(&f)).unwrap();
        assert_eq!(
            eval_term(&pos, std::slice::from_ref(&f), &mu2).unwrap(),
            height(&f, &mu2, &Rat::one()).unwrap()
        );
    }

    #[test]
    fn whaples() {
        let r = artin_whaples_solve(
            &[place("t"), place("t-1"), Place::Infinity],
            &[rf("t"), rf("t-1")],
        )
        .unwrap();
        assert_eq!(r.unique_ray, Some(RatVector::from_ints(&[1, 1, 1])));
        assert!(r.canonical);
        assert!(matches!(
            artin_whaples_solve(&[place("t")], &[rf("t")]),
            Err(GvfError::NoSolution)
        ));
        let r = artin_whaples_solve(&[place("t"), Place::Infinity], &[rf("t")]).unwrap();
        assert_eq!(r.unique_ray, Some(RatVector::from_ints(&[1, 1])));
        let r = artin_whaples_solve(&[place("t^2+1"), Place::Infinity], &[rf("t^2+1")]).unwrap();
        assert_eq!(r.unique_ray, Some(RatVector::from_ints(&[2, 1])));
        assert!(r.canonical);
        let r = artin_whaples_solve(&[place("t"), Place::Infinity], &[rf("t-1")]).unwrap();
        assert!(!r.warnings.is_empty());
    }

    #[test]
    fn delta() {
        let s = surfaces::p1xp1();
        let r = delta_measure(&s, &RatVector::from_ints(&[1, 1])).unwrap();
        assert_eq!(r.masses, vec![int(1); 4]);
        assert!(r.product_formula.iter().all(|x| x.is_zero()));
        assert!(r.identity_holds);
        let r = delta_measure(&surfaces::p2(), &RatVector::from_ints(&[1])).unwrap();
        assert_eq!(r.masses, vec![int(1); 3]);
        let z = delta_measure(&s, &RatVector::from_ints(&[0, 0])).unwrap();
        assert!(z.masses.iter().all(|m| m.is_zero()));
        assert!(matches!(
            delta_measure(&s, &RatVector::from_ints(&[1, -1])),
            Err(GvfError::NotDual { .. })
        ));
    }

    #[test]
    fn fekete() {
        let r = fekete_limit(|n| int(n as i64 - 1), 100).unwrap();
        assert_eq!((r.best.clone(), r.best_n), (frac(99, 100), 100));
        let r = fekete_limit(|n| int(2 * n as i64), 10).unwrap();
        assert_eq!((r.best.clone(), r.best_n), (int(2), 1));
        let r = fekete_limit(|n| int(n as i64) - frac(1, n as i64), 50).unwrap();
        assert!(r.best > frac(99, 100));
        assert!(matches!(
            fekete_limit(|n| int((n * n) as i64) * int(-1), 5),
            Err(GvfError::NotSuperadditive { .. })
        ));
    }

    #[test]
    fn adelic() {
        let t = rf("t");
        let mu = PlaceMeasure::canonical_for(Q, std::slice::from_ref(&t)).unwrap();
        let finite = mu.restrict(|p| *p != Place::Infinity);
        let (m, secs) = sections_from_functions(&finite, &[(1, t.clone())]).unwrap();
        assert!(!adelic_consistency_check(&m, &secs, &int(0)).unwrap().passed);
        let inf = mu.restrict(|p| *p == Place::Infinity);
        let (m, secs) = sections_from_functions(&inf, &[(1, t.clone())]).unwrap();
        assert!(adelic_consistency_check(&m, &secs, &int(0)).unwrap().passed);
        assert!(adelic_consistency_check(&m, &[], &int(0)).unwrap().passed);
    }

    #[test]
    fn measure_json() {
        let mu = PlaceMeasure::canonical_for(Q, &[rf("t^2+1")]).unwrap();
        let s = serde_json::to_string(&mu).unwrap();
        assert_eq!(
            s,
            r#"{"field":"Q","places":[{"mass":[2,1],"poly":"t^2+1"},{"inf":true,"mass":[1,1]}]}"#
        );
        let back: PlaceMeasure = serde_json::from_str(&s).unwrap();
        assert_eq!(back, mu);
        let bad = r#"{"places":[{"poly":"t^2-1","mass":[1,1]}]}"#;
        assert!(serde_json::from_str::<PlaceMeasure>(bad).is_err());
    }
}
