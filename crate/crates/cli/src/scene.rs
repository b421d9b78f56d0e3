//! TOML scene files. The top-level `kind` selects the payload schema; every
//! table rejects unknown keys.

use std::fmt;
use std::path::Path;

use oklab::bigcone::{surfaces, SurfaceLattice};
use oklab::exactgeom::{hull, LinMap, Polytope};
use oklab::forms::GramMatrix;
use oklab::gvf::{BaseField, Place, PlaceMeasure, RationalFunction};
use oklab::rational::parse_rat;
use oklab::toric::{fans, Fan, MonomialIdeal, ToricDivisor};
use oklab::{Rat, RatVector};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    FanDivisor,
    Surface,
    Semigroup,
    GvfMeasure,
    Form,
    Chebyshev,
}

impl Kind {
    pub const ALL: [Kind; 6] = [
        Kind::FanDivisor,
        Kind::Surface,
        Kind::Semigroup,
        Kind::GvfMeasure,
        Kind::Form,
        Kind::Chebyshev,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::FanDivisor => "fan+divisor",
            Kind::Surface => "surface",
            Kind::Semigroup => "semigroup",
            Kind::GvfMeasure => "gvf-measure",
            Kind::Form => "form",
            Kind::Chebyshev => "chebyshev",
        }
    }

    fn parse(s: &str) -> Option<Kind> {
        Kind::ALL.into_iter().find(|k| k.name() == s)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A rational written as an integer, a `"p/q"` string or a `[p, q]` pair.
#[derive(Clone, Debug, Deserialize)]
#[serde(try_from = "RatIn")]
pub struct Q(pub Rat);

#[derive(Deserialize)]
#[serde(untagged)]
enum RatIn {
    Int(i64),
    Text(String),
    Pair([i64; 2]),
}

impl TryFrom<RatIn> for Q {
    type Error = String;
    fn try_from(r: RatIn) -> Result<Self, String> {
        match r {
            RatIn::Int(n) => Ok(Q(Rat::from_integer(n.into()))),
            RatIn::Text(s) => parse_rat(&s)
                .map(Q)
                .ok_or_else(|| format!("not a rational: {s:?}")),
            RatIn::Pair([_, 0]) => Err("zero denominator".into()),
            RatIn::Pair([n, d]) => Ok(Q(Rat::new(n.into(), d.into()))),
        }
    }
}

pub fn vector(xs: &[Q]) -> RatVector {
    RatVector::new(xs.iter().map(|q| q.0.clone()).collect())
}

pub fn vectors(xs: &[Vec<Q>]) -> Vec<RatVector> {
    xs.iter().map(|x| vector(x)).collect()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanSpec {
    pub name: Option<String>,
    pub rays: Option<Vec<Vec<i64>>>,
    pub cones: Option<Vec<Vec<usize>>>,
}

impl FanSpec {
    pub fn build(&self) -> Result<Fan, CliError> {
        match (&self.name, &self.rays) {
            (Some(name), None) => {
                named_fan(name).ok_or_else(|| CliError::Config(format!("unknown fan {name:?}")))
            }
            (None, Some(rays)) => {
                let rays: Vec<&[i64]> = rays.iter().map(Vec::as_slice).collect();
                let fan = match &self.cones {
                    Some(cones) => {
                        Fan::from_ints(&rays, &cones.iter().map(Vec::as_slice).collect::<Vec<_>>())
                    }
                    None => Fan::from_rays_2d(&rays),
                };
                fan.map_err(|e| CliError::Config(format!("fan: {e}")))
            }
            _ => Err(CliError::Config(
                "[fan] needs exactly one of name or rays".into(),
            )),
        }
    }
}

fn named_fan(name: &str) -> Option<Fan> {
    Some(match name {
        "P1" => fans::p1(),
        "P2" => fans::p2(),
        "P3" => fans::p3(),
        "P1xP1" => fans::p1xp1(),
        "Bl1P2" => fans::bl_p2(1),
        "Bl2P2" => fans::bl_p2(2),
        "Bl3P2" => fans::bl_p2(3),
        _ => {
            let n: i64 = name.strip_prefix('F')?.parse().ok()?;
            if !(0..=3).contains(&n) {
                return None;
            }
            fans::hirzebruch(n)
        }
    })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorSpec {
    pub coeffs: Vec<Q>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodySpec {
    pub m_max: Option<u32>,
    /// Coordinate order of the lexicographic valuation.
    pub order: Option<Vec<usize>>,
    pub tolerance: Option<Q>,
    /// Vertices of a polytope to approximate from inside.
    pub inner: Option<Vec<Vec<Q>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdealSpec {
    pub nvars: usize,
    pub generators: Vec<Vec<u32>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanDivisorScene {
    pub fan: Option<FanSpec>,
    pub divisor: Option<DivisorSpec>,
    /// Second divisor on the same fan.
    pub other: Option<DivisorSpec>,
    pub okbody: Option<BodySpec>,
    pub ideal: Option<IdealSpec>,
}

impl FanDivisorScene {
    pub fn fan(&self) -> Result<Fan, CliError> {
        self.fan.as_ref().ok_or_else(|| missing("[fan]"))?.build()
    }

    fn divisor_from(
        &self,
        spec: Option<&DivisorSpec>,
        table: &str,
    ) -> Result<ToricDivisor, CliError> {
        let spec = spec.ok_or_else(|| missing(table))?;
        ToricDivisor::new(
            self.fan()?,
            spec.coeffs.iter().map(|q| q.0.clone()).collect(),
        )
        .map_err(|e| CliError::Config(format!("{table}: {e}")))
    }

    pub fn divisor(&self) -> Result<ToricDivisor, CliError> {
        self.divisor_from(self.divisor.as_ref(), "[divisor]")
    }

    pub fn other(&self) -> Result<ToricDivisor, CliError> {
        self.divisor_from(self.other.as_ref(), "[other]")
    }

    pub fn ideal(&self) -> Result<MonomialIdeal, CliError> {
        let spec = self.ideal.as_ref().ok_or_else(|| missing("[ideal]"))?;
        MonomialIdeal::new(spec.nvars, spec.generators.clone())
            .map_err(|e| CliError::Config(format!("[ideal]: {e}")))
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceSpec {
    pub name: Option<String>,
    pub gram: Option<Vec<Vec<Q>>>,
    pub eff: Option<Vec<Vec<Q>>>,
    pub nef: Option<Vec<Vec<Q>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceScene {
    pub surface: SurfaceSpec,
}

impl SurfaceScene {
    pub fn lattice(&self) -> Result<SurfaceLattice, CliError> {
        let s = &self.surface;
        match (&s.gram, &s.eff, &s.nef) {
            (None, None, None) => {
                let name = s
                    .name
                    .as_deref()
                    .ok_or_else(|| missing("surface.name or surface.gram"))?;
                surfaces::by_name(name)
                    .ok_or_else(|| CliError::Config(format!("unknown surface {name:?}")))
            }
            (Some(g), Some(e), Some(n)) => {
                let gram = GramMatrix::new(
                    g.iter()
                        .map(|r| r.iter().map(|q| q.0.clone()).collect())
                        .collect(),
                )
                .map_err(|e| CliError::Config(format!("surface.gram: {e}")))?;
                let name = s.name.clone().unwrap_or_else(|| "custom".into());
                SurfaceLattice::new(name, gram, vectors(e), vectors(n))
                    .map_err(|e| CliError::Config(format!("[surface]: {e}")))
            }
            _ => Err(CliError::Config(
                "[surface] needs gram, eff and nef together".into(),
            )),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GensSpec {
    pub gens: Vec<Vec<i64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GradedSpec {
    pub d: usize,
    /// Each entry is a level followed by the point's coordinates.
    pub generators: Vec<Vec<i64>>,
    pub m_max: u32,
    /// Vertices of the test polytope `K`.
    pub k: Vec<Vec<Q>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeSpec {
    /// Linear map applied to the cone, as rows.
    pub map: Option<Vec<Vec<Q>>>,
    /// Functional to extend: values `h` prescribed on the vectors `u`.
    pub u: Option<Vec<Vec<Q>>>,
    pub h: Option<Vec<Q>>,
    /// Lattice used to normalize the hull volume, as rows of a map.
    pub lattice: Option<Vec<Vec<Q>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SemigroupScene {
    pub semigroup: Option<GensSpec>,
    pub graded: Option<GradedSpec>,
    pub cone: Option<ConeSpec>,
}

impl SemigroupScene {
    pub fn gens(&self) -> Result<&GensSpec, CliError> {
        self.semigroup
            .as_ref()
            .ok_or_else(|| missing("[semigroup]"))
    }

    pub fn graded(&self) -> Result<&GradedSpec, CliError> {
        self.graded.as_ref().ok_or_else(|| missing("[graded]"))
    }
}

pub fn lin_map(rows: &[Vec<Q>], what: &str) -> Result<LinMap, CliError> {
    LinMap::new(
        rows.iter()
            .map(|r| r.iter().map(|q| q.0.clone()).collect())
            .collect(),
    )
    .map_err(|e| CliError::Config(format!("{what}: {e}")))
}

pub fn polytope(vertices: &[Vec<Q>], what: &str) -> Result<Polytope, CliError> {
    hull(&vectors(vertices)).map_err(|e| CliError::Config(format!("{what}: {e}")))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GvfSpec {
    pub field: Option<String>,
    #[serde(default)]
    pub functions: Vec<String>,
    pub places: Option<Vec<String>>,
    pub r: Option<Q>,
    pub term: Option<String>,
    /// Level of each function when read as a section.
    pub levels: Option<Vec<u32>>,
    pub slack: Option<Q>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GvfScene {
    pub gvf: GvfSpec,
    /// `{places = [{poly = "t^2+1", mass = [2,1]}, {inf = true, mass = 1}]}`.
    pub measure: Option<toml::Value>,
}

impl GvfScene {
    pub fn field(&self) -> Result<BaseField, CliError> {
        match &self.gvf.field {
            None => Ok(BaseField::Rational),
            Some(f) => BaseField::parse(f).map_err(|e| CliError::Config(format!("gvf.field: {e}"))),
        }
    }

    pub fn parse_function(&self, s: &str) -> Result<RationalFunction, CliError> {
        RationalFunction::parse(self.field()?, s)
            .map_err(|e| CliError::Config(format!("function {s:?}: {e}")))
    }

    pub fn functions(&self) -> Result<Vec<RationalFunction>, CliError> {
        self.gvf
            .functions
            .iter()
            .map(|s| self.parse_function(s))
            .collect()
    }

    pub fn places(&self) -> Result<Option<Vec<Place>>, CliError> {
        let Some(ps) = &self.gvf.places else {
            return Ok(None);
        };
        let field = self.field()?;
        ps.iter()
            .map(|p| {
                if p.trim() == "inf" {
                    return Ok(Place::Infinity);
                }
                let f = RationalFunction::parse(field, p)
                    .map_err(|e| CliError::Config(format!("place {p:?}: {e}")))?;
                if !f.den.is_constant() {
                    return Err(CliError::Config(format!("place {p:?} is not a polynomial")));
                }
                Place::finite(f.num.monic())
                    .map_err(|e| CliError::Config(format!("place {p:?}: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Some)
    }

    /// The configured measure, else the places given with residue-degree
    /// masses, else the canonical measure on the zeros and poles of `fns`.
    pub fn measure(&self, fns: &[RationalFunction]) -> Result<PlaceMeasure, CliError> {
        let field = self.field()?;
        if let Some(m) = &self.measure {
            let mu: PlaceMeasure = m
                .clone()
                .try_into()
                .map_err(|e| CliError::Config(format!("[measure]: {e}")))?;
            if mu.field() != field {
                return Err(CliError::Config("[measure] and gvf.field disagree".into()));
            }
            return Ok(mu);
        }
        if let Some(places) = self.places()? {
            return Ok(PlaceMeasure::canonical(field, places));
        }
        PlaceMeasure::canonical_for(field, fns).map_err(|e| CliError::Input(e.to_string()))
    }

    pub fn r(&self) -> Rat {
        self.gvf
            .r
            .as_ref()
            .map_or_else(|| Rat::from_integer(1.into()), |q| q.0.clone())
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormSpec {
    pub gram: Option<Vec<Vec<Q>>>,
    /// Order of the rectangle form, used when no Gram matrix is given.
    pub rectangle: Option<usize>,
    pub samples: Option<Vec<Vec<Q>>>,
    /// The two rulings for the Castelnuovo inequality.
    pub rulings: Option<Vec<Vec<Q>>>,
    pub alpha: Option<Vec<Q>>,
    pub steps: Option<usize>,
    pub calabi: Option<CalabiSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalabiSpec {
    pub v_basis: Vec<Vec<Q>>,
    pub a1: Vec<Q>,
    pub a2: Vec<Q>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormScene {
    pub form: FormSpec,
}

impl FormScene {
    pub fn gram(&self) -> Result<GramMatrix, CliError> {
        let g = self
            .form
            .gram
            .as_ref()
            .ok_or_else(|| missing("form.gram"))?;
        GramMatrix::new(
            g.iter()
                .map(|r| r.iter().map(|q| q.0.clone()).collect())
                .collect(),
        )
        .map_err(|e| CliError::Config(format!("form.gram: {e}")))
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChebyshevSpec {
    pub interval: [f64; 2],
    pub grid: usize,
    pub n_max: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceSpec {
    /// `a_1, a_2, ...` of a superadditive sequence.
    pub values: Vec<Q>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChebyshevScene {
    pub chebyshev: Option<ChebyshevSpec>,
    pub sequence: Option<SequenceSpec>,
}

#[derive(Debug)]
pub enum Payload {
    FanDivisor(FanDivisorScene),
    Surface(SurfaceScene),
    Semigroup(SemigroupScene),
    Gvf(GvfScene),
    Form(FormScene),
    Chebyshev(ChebyshevScene),
}

#[derive(Debug)]
pub struct Scene {
    pub kind: Kind,
    pub seed: Option<u64>,
    pub payload: Payload,
}

/// Hex SHA-256 of the scene file bytes.
pub fn hash_bytes(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub fn read(path: &Path) -> Result<(Vec<u8>, String), CliError> {
    let bytes =
        std::fs::read(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let hash = hash_bytes(&bytes);
    Ok((bytes, hash))
}

pub fn parse(bytes: &[u8]) -> Result<Scene, CliError> {
    let text = std::str::from_utf8(bytes)
        .map_err(|_| CliError::Config("scene file is not UTF-8".into()))?;
    let mut table: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| CliError::Config(e.message().to_string()))?;
    let kind = match table.remove("kind") {
        Some(toml::Value::String(s)) => {
            Kind::parse(&s).ok_or_else(|| CliError::Config(format!("unknown kind {s:?}")))?
        }
        Some(_) => return Err(CliError::Config("kind must be a string".into())),
        None => return Err(missing("kind")),
    };
    let seed = match table.remove("seed") {
        None => None,
        Some(toml::Value::Integer(n)) if n >= 0 => Some(n as u64),
        Some(_) => {
            return Err(CliError::Config(
                "seed must be a nonnegative integer".into(),
            ))
        }
    };
    let payload = match kind {
        Kind::FanDivisor => Payload::FanDivisor(body(table, kind)?),
        Kind::Surface => Payload::Surface(body(table, kind)?),
        Kind::Semigroup => Payload::Semigroup(body(table, kind)?),
        Kind::GvfMeasure => Payload::Gvf(body(table, kind)?),
        Kind::Form => Payload::Form(body(table, kind)?),
        Kind::Chebyshev => Payload::Chebyshev(body(table, kind)?),
    };
    Ok(Scene {
        kind,
        seed,
        payload,
    })
}

fn body<T: DeserializeOwned>(table: toml::Table, kind: Kind) -> Result<T, CliError> {
    toml::Value::Table(table)
        .try_into()
        .map_err(|e: toml::de::Error| CliError::Config(format!("{kind} scene: {}", e.message())))
}

fn missing(what: &str) -> CliError {
    CliError::Config(format!("scene is missing {what}"))
}
