//! One handler per subcommand. Each returns its result document and the
//! witnesses of any failed check.

use std::fmt::Display;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use oklab::bigcone::{
    bound_difference_check, bound_perturbation_check, duality_sandwich_check, dvol_check,
    fujita_approx, monotone_product_check, psi, vol, zariski, SurfaceLattice,
};
use oklab::exactgeom::{interior_contains, polytope_volume, project_cone, riesz_extend};
use oklab::forms::{
    calabi_kernel_check, castelnuovo_check, chain_inequality_check, hodge_pattern,
    hyperbolic_axioms_check, pdc_analysis, rectangle_form, signature, volume_root_concavity_check,
    SymMultiForm,
};
use oklab::gvf::chebyshev::REMEZ_TOLERANCE;
use oklab::gvf::{
    adelic_consistency_check, artin_whaples_solve, chebyshev_constant_with_tolerance,
    delta_measure, divisor_of, eval_term, fekete_limit, height, product_formula_residual,
    projective_height, sections_from_functions, RationalFunction, TropTerm,
};
use oklab::okounkov::{
    body_volume, inner_approx, logconcavity_check, measure_report, okounkov_body, GradedValueSets,
    LexValuation,
};
use oklab::rational::{frac, int, rat_to_json, to_i64};
use oklab::semigroups::{
    cone_closure, group_closure, khovanskii_shift, membership, saturation_level, GradedSemigroup,
    SemigroupGens,
};
use oklab::toric::{
    blowup_fan, h0, hilbert_degree, pullback, section_polytope, stable_join, stable_meet,
    volume_sections, ToricDivisor,
};
use oklab::{Rat, RatVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cli::Command;
use crate::scene::{
    self, ChebyshevScene, FanDivisorScene, FormScene, GvfScene, Payload, SemigroupScene,
};
use crate::CliError;

pub struct Outcome {
    pub result: Value,
    pub witnesses: Vec<Value>,
}

impl Outcome {
    fn pass(result: Value) -> Self {
        Outcome {
            result,
            witnesses: Vec::new(),
        }
    }
}

fn to_json<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn input<E: Display>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

fn big_json(x: &num_bigint::BigInt) -> Value {
    match to_i64(x) {
        Some(v) => v.into(),
        None => x.to_string().into(),
    }
}

pub fn run(cmd: &Command, payload: &Payload, seed: u64) -> Result<Outcome, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match (cmd, payload) {
        (Command::Okbody { m_max, .. }, Payload::FanDivisor(s)) => okbody(s, *m_max),
        (Command::Sections { m, .. }, Payload::FanDivisor(s)) => sections(s, *m),
        (Command::Meet { .. }, Payload::FanDivisor(s)) => meet(s),
        (Command::Blowup { cone, m, .. }, Payload::FanDivisor(s)) => blowup(s, cone, *m),
        (Command::Logconcavity { m_max, .. }, Payload::FanDivisor(s)) => {
            let rep = logconcavity_check(&s.divisor()?, &s.other()?, *m_max).map_err(input)?;
            let witnesses = if rep.holds {
                vec![]
            } else {
                vec![json!({"comparison": rep.comparison})]
            };
            Ok(Outcome {
                result: to_json(&rep),
                witnesses,
            })
        }
        (Command::InnerApprox { m_max, .. }, Payload::FanDivisor(s)) => inner(s, *m_max),
        (Command::Hilbert { .. }, Payload::FanDivisor(s)) => {
            let (dim, degree) = hilbert_degree(&s.ideal()?).map_err(input)?;
            Ok(Outcome::pass(
                json!({"projective_dimension": dim, "degree": big_json(&degree)}),
            ))
        }
        (Command::Zariski { class, .. }, Payload::Surface(s)) => {
            let z = zariski(&s.lattice()?, class).map_err(input)?;
            Ok(Outcome::pass(json!({
                "class": class,
                "positive": z.positive,
                "negative": z.negative,
                "support": z.support,
                "multiplicities": z.multiplicities.iter().map(rat_to_json).collect::<Vec<_>>(),
                "volume": rat_to_json(&z.volume),
            })))
        }
        (Command::Psi { class, .. }, Payload::Surface(s)) => {
            let lat = s.lattice()?;
            let p = psi(&lat, class).map_err(input)?;
            Ok(Outcome::pass(
                json!({"class": class, "psi": p, "volume": rat_to_json(&vol(&lat, class))}),
            ))
        }
        (
            Command::DvolCheck {
                class, gamma, t, ..
            },
            Payload::Surface(s),
        ) => {
            let rep = dvol_check(&s.lattice()?, class, gamma, t).map_err(input)?;
            let witnesses = if rep.exact_match == Some(false) {
                vec![
                    json!({"symmetric_quotient": rat_to_json(&rep.symmetric_quotient), "derivative": rat_to_json(&rep.derivative)}),
                ]
            } else {
                vec![]
            };
            Ok(Outcome {
                result: to_json(&rep),
                witnesses,
            })
        }
        (Command::Fujita { class, eps, .. }, Payload::Surface(s)) => {
            fujita(&s.lattice()?, class, eps)
        }
        (Command::Sandwich { samples, .. }, Payload::Surface(s)) => {
            sandwich(&s.lattice()?, *samples, &mut rng)
        }
        (
            Command::Bounds {
                a,
                b,
                beta,
                gamma,
                omega,
                t,
                c1,
                c2,
                d1,
                d2,
                ..
            },
            Payload::Surface(s),
        ) => {
            let lat = s.lattice()?;
            let mut result = serde_json::Map::new();
            let mut witnesses = Vec::new();
            let mut record = |name: &str, rep: oklab::bigcone::BoundReport| {
                if !rep.holds {
                    witnesses.push(json!({"bound": name, "lhs": rat_to_json(&rep.lhs), "rhs": rat_to_json(&rep.rhs)}));
                }
                result.insert(name.into(), to_json(&rep));
            };
            if let (Some(a), Some(b)) = (a, b) {
                record(
                    "difference",
                    bound_difference_check(&lat, a, b).map_err(input)?,
                );
            }
            if let (Some(beta), Some(gamma), Some(omega), Some(t)) = (beta, gamma, omega, t) {
                record(
                    "perturbation",
                    bound_perturbation_check(&lat, beta, gamma, omega, t).map_err(input)?,
                );
            }
            if let (Some(c1), Some(c2), Some(d1), Some(d2)) = (c1, c2, d1, d2) {
                record(
                    "monotone_product",
                    monotone_product_check(&lat, [c1, c2], [d1, d2]).map_err(input)?,
                );
            }
            if result.is_empty() {
                return Err(CliError::Config(
                    "bounds needs --a --b, --beta --gamma --omega --t, or --c1 --c2 --d1 --d2"
                        .into(),
                ));
            }
            Ok(Outcome {
                result: Value::Object(result),
                witnesses,
            })
        }
        (Command::DeltaMeasure { class, .. }, Payload::Surface(s)) => {
            let rep = delta_measure(&s.lattice()?, class).map_err(input)?;
            let mut witnesses = Vec::new();
            if !rep.identity_holds {
                witnesses.push(json!({"identity_holds": false}));
            }
            if rep.product_formula.iter().any(|x| !x.is_zero()) {
                witnesses.push(json!({"product_formula": to_json(&rep)["product_formula"]}));
            }
            Ok(Outcome {
                result: to_json(&rep),
                witnesses,
            })
        }
        (Command::Signature { class, samples, .. }, Payload::Form(s)) => {
            signature_cmd(s, class.as_ref(), *samples, &mut rng)
        }
        (Command::Pdc { .. }, Payload::Form(s)) => {
            let g = s.gram()?;
            let alpha: Vec<Rat> = match &s.form.alpha {
                Some(a) => a.iter().map(|q| q.0.clone()).collect(),
                None => vec![Rat::one(); g.rank()],
            };
            Ok(Outcome::pass(to_json(
                &pdc_analysis(&g, &alpha).map_err(input)?,
            )))
        }
        (Command::Hyperbolic { samples, .. }, Payload::Form(s)) => {
            hyperbolic(s, *samples, &mut rng)
        }
        (Command::Khovanskii { .. }, Payload::Semigroup(s)) => {
            let f = gens(s)?;
            let rep = khovanskii_shift(&f).map_err(input)?;
            let witnesses = if rep.certified {
                vec![]
            } else {
                vec![json!({"shift": rep.shift, "certified": false})]
            };
            Ok(Outcome {
                result: json!({"shift": to_json(&rep), "group_basis": group_closure(&f), "cone": cone_closure(&f)}),
                witnesses,
            })
        }
        (Command::Membership { point, bound, .. }, Payload::Semigroup(s)) => {
            let m = membership(&gens(s)?, point, *bound).map_err(input)?;
            Ok(Outcome::pass(
                json!({"point": point, "bound": bound, "membership": to_json(&m)}),
            ))
        }
        (Command::Saturation { .. }, Payload::Semigroup(s)) => saturation(s),
        (Command::Cone { point, .. }, Payload::Semigroup(s)) => cone(s, point.as_ref()),
        (Command::Height { f, .. }, Payload::Gvf(s)) => {
            let f = one_function(s, f.as_deref())?;
            let mu = s.measure(std::slice::from_ref(&f))?;
            let h = height(&f, &mu, &s.r()).map_err(input)?;
            Ok(Outcome::pass(
                json!({"function": f.to_string(), "measure": to_json(&mu), "height": rat_to_json(&h)}),
            ))
        }
        (Command::ProjectiveHeight { f, .. }, Payload::Gvf(s)) => {
            let fns = if f.is_empty() {
                s.functions()?
            } else {
                f.iter()
                    .map(|x| s.parse_function(x))
                    .collect::<Result<_, _>>()?
            };
            let mu = s.measure(&fns)?;
            let h = projective_height(&fns, &mu, &s.r()).map_err(input)?;
            Ok(Outcome::pass(json!({
                "functions": fns.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
                "measure": to_json(&mu),
                "projective_height": rat_to_json(&h),
            })))
        }
        (Command::ProductFormula { f, .. }, Payload::Gvf(s)) => product_formula(s, f.as_deref()),
        (Command::TermEval { term, .. }, Payload::Gvf(s)) => {
            let text = term
                .as_deref()
                .or(s.gvf.term.as_deref())
                .ok_or_else(|| CliError::Config("term-eval needs --term or gvf.term".into()))?;
            let tt = TropTerm::parse(text).map_err(|e| CliError::Config(format!("term: {e}")))?;
            let fns = s.functions()?;
            let mu = s.measure(&fns)?;
            let value = eval_term(&tt, &fns, &mu).map_err(input)?;
            Ok(Outcome::pass(
                json!({"term": text, "measure": to_json(&mu), "value": rat_to_json(&value)}),
            ))
        }
        (Command::Whaples { .. }, Payload::Gvf(s)) => {
            let places = s
                .places()?
                .ok_or_else(|| CliError::Config("whaples needs gvf.places".into()))?;
            let rep = artin_whaples_solve(&places, &s.functions()?).map_err(input)?;
            Ok(Outcome::pass(to_json(&rep)))
        }
        (Command::Adelic { .. }, Payload::Gvf(s)) => adelic(s),
        (Command::Chebyshev { tolerance, .. }, Payload::Chebyshev(s)) => chebyshev(s, *tolerance),
        (Command::Fekete { .. }, Payload::Chebyshev(s)) => fekete(s),
        _ => unreachable!("scene kind is checked against the route before dispatch"),
    }
}

/// Smallest level at which every vertex of the section polytope is a lattice
/// point after scaling.
fn vertex_level(d: &ToricDivisor) -> Result<u32, CliError> {
    let p = section_polytope(d).map_err(input)?;
    let l = p
        .vertices()
        .iter()
        .flat_map(|x| x.iter().map(|c| c.denom().clone()))
        .fold(num_bigint::BigInt::one(), |a, b| a.lcm(&b));
    to_i64(&l)
        .and_then(|x| u32::try_from(x).ok())
        .ok_or_else(|| CliError::Input(format!("vertex denominators too large: {l}")))
}

fn valuation(s: &FanDivisorScene, dim: usize) -> Result<LexValuation, CliError> {
    match s.okbody.as_ref().and_then(|b| b.order.clone()) {
        Some(order) => {
            LexValuation::new(order).map_err(|e| CliError::Config(format!("okbody.order: {e}")))
        }
        None => Ok(LexValuation::identity(dim)),
    }
}

fn okbody(s: &FanDivisorScene, m_max: Option<u32>) -> Result<Outcome, CliError> {
    let d = s.divisor()?;
    let m_max = match m_max.or(s.okbody.as_ref().and_then(|b| b.m_max)) {
        Some(m) => m,
        None => 2 * vertex_level(&d)?,
    };
    if m_max == 0 {
        return Err(CliError::Config("m_max must be positive".into()));
    }
    let val = valuation(s, d.fan().dim())?;
    let sets = GradedValueSets::from_toric(&d, &val, m_max).map_err(input)?;
    let body = okounkov_body(&sets).map_err(input)?;
    let tolerance = s
        .okbody
        .as_ref()
        .and_then(|b| b.tolerance.as_ref())
        .map_or_else(|| frac(1, 2), |q| q.0.clone());
    let report = measure_report(&sets, &tolerance).map_err(input)?;
    Ok(Outcome::pass(json!({
        "body": body,
        "volume": rat_to_json(&body_volume(&body)),
        "lattice_volume": rat_to_json(&polytope_volume(&body, None).map_err(input)?),
        "m_max": m_max,
        "report": report.rows,
        "within_tolerance": report.within_tolerance,
    })))
}

fn sections(s: &FanDivisorScene, m: u32) -> Result<Outcome, CliError> {
    if m == 0 {
        return Err(CliError::Config("--m must be positive".into()));
    }
    let d = s.divisor()?;
    let counts: Vec<Value> = (1..=m)
        .map(|k| h0(&d, k).map(|h| big_json(&h)))
        .collect::<Result<_, _>>()
        .map_err(input)?;
    let polytope = section_polytope(&d).ok().map(|p| to_json(&p));
    let (estimate, exact) = volume_sections(&d, m).map_err(input)?;
    Ok(Outcome::pass(json!({
        "polytope": polytope,
        "h0": counts,
        "estimate": rat_to_json(&estimate),
        "volume": rat_to_json(&exact),
        "nef": d.is_nef(),
        "ample": d.is_ample(),
    })))
}

fn meet(s: &FanDivisorScene) -> Result<Outcome, CliError> {
    let (d1, d2) = (s.divisor()?, s.other()?);
    let (mfan, m) = stable_meet(&d1, &d2).map_err(input)?;
    let (jfan, j) = stable_join(&d1, &d2).map_err(input)?;
    let doc = |fan: &oklab::toric::Fan, d: &ToricDivisor| json!({"fan": fan, "coeffs": d.coeffs().iter().map(rat_to_json).collect::<Vec<_>>()});
    Ok(Outcome::pass(
        json!({"meet": doc(&mfan, &m), "join": doc(&jfan, &j)}),
    ))
}

fn blowup(s: &FanDivisorScene, cone: &[usize], m: u32) -> Result<Outcome, CliError> {
    let d = s.divisor()?;
    let fine = blowup_fan(d.fan(), cone).map_err(input)?;
    let pulled = pullback(&d, &fine).map_err(input)?;
    let mut rows = Vec::new();
    let mut witnesses = Vec::new();
    for k in 1..=m {
        let (a, b) = (h0(&d, k).map_err(input)?, h0(&pulled, k).map_err(input)?);
        if a != b {
            witnesses.push(json!({"m": k, "h0": big_json(&a), "h0_pullback": big_json(&b)}));
        }
        rows.push(json!({"m": k, "h0": big_json(&a), "h0_pullback": big_json(&b)}));
    }
    Ok(Outcome {
        result: json!({
            "fan": fine,
            "pullback": pulled.coeffs().iter().map(rat_to_json).collect::<Vec<_>>(),
            "sections": rows,
        }),
        witnesses,
    })
}

fn inner(s: &FanDivisorScene, m_max: u32) -> Result<Outcome, CliError> {
    let d = s.divisor()?;
    let verts = s
        .okbody
        .as_ref()
        .and_then(|b| b.inner.as_ref())
        .ok_or_else(|| CliError::Config("inner-approx needs okbody.inner".into()))?;
    let k = scene::polytope(verts, "okbody.inner")?;
    let sets =
        GradedValueSets::from_toric(&d, &valuation(s, d.fan().dim())?, m_max).map_err(input)?;
    Ok(Outcome::pass(to_json(
        &inner_approx(&sets, &k, m_max).map_err(input)?,
    )))
}

fn fujita(s: &SurfaceLattice, class: &RatVector, eps: &Rat) -> Result<Outcome, CliError> {
    let f = fujita_approx(s, class, eps).map_err(input)?;
    let bound = (Rat::one() - eps) * vol(s, class);
    let mut witnesses = Vec::new();
    if s.self_intersection(&f.ample) < bound {
        witnesses.push(json!({"vol_ample": rat_to_json(&s.self_intersection(&f.ample)), "required": rat_to_json(&bound)}));
    }
    if !s.is_ample(&f.ample) {
        witnesses.push(json!({"not_ample": f.ample}));
    }
    let rest = class - &f.ample;
    if !s.is_psef(&rest) {
        witnesses.push(json!({"difference_not_psef": rest}));
    }
    Ok(Outcome {
        result: to_json(&f),
        witnesses,
    })
}

fn rand_rat(r: &mut ChaCha8Rng, lo: i64, hi: i64, max_den: i64) -> Rat {
    frac(r.gen_range(lo..=hi), r.gen_range(1..=max_den))
}

fn sum(s: &SurfaceLattice, xs: &[RatVector]) -> RatVector {
    xs.iter()
        .fold(RatVector::zeros(s.rank()), |acc, x| &acc + x)
}

fn sandwich(s: &SurfaceLattice, samples: usize, r: &mut ChaCha8Rng) -> Result<Outcome, CliError> {
    let h = sum(s, s.nef_gens());
    let mut big: Vec<RatVector> = s.nef_gens().to_vec();
    big.push(h.clone());
    big.extend(s.eff_gens().iter().map(|e| &h + e));
    big.extend((0..samples).map(|_| {
        let mut x = s
            .nef_gens()
            .iter()
            .fold(RatVector::zeros(s.rank()), |acc, n| {
                &acc + &n.scale(&rand_rat(r, 1, 4, 3))
            });
        for e in s.eff_gens() {
            x = &x + &e.scale(&rand_rat(r, 0, 4, 3));
        }
        x
    }));
    big.retain(|x| vol(s, x).is_positive());
    let mut dual: Vec<RatVector> = s.nef_gens().to_vec();
    dual.push(h);
    dual.extend((0..samples.div_ceil(2)).map(|_| {
        s.nef_gens()
            .iter()
            .fold(RatVector::zeros(s.rank()), |acc, n| {
                &acc + &n.scale(&rand_rat(r, 1, 5, 2))
            })
    }));
    let rep = duality_sandwich_check(s, &big, &dual).map_err(input)?;
    let mut witnesses: Vec<Value> = rep.right_inclusion_failures.iter().map(to_json).collect();
    for d in &rep.dual_samples {
        if d.interior && d.preimage.as_ref() != Some(&d.class) {
            witnesses.push(json!({"interior_class_not_fixed": d.class}));
        }
    }
    Ok(Outcome {
        result: to_json(&rep),
        witnesses,
    })
}

fn signature_cmd(
    s: &FormScene,
    class: Option<&RatVector>,
    samples: usize,
    r: &mut ChaCha8Rng,
) -> Result<Outcome, CliError> {
    let g = s.gram()?;
    let (plus, zero, minus) = signature(&g);
    let mut result = json!({"signature": [plus, zero, minus], "hodge_pattern": hodge_pattern(&g)});
    let mut witnesses = Vec::new();
    if let Some(rulings) = &s.form.rulings {
        let rulings = scene::vectors(rulings);
        let [p1, p2] = rulings.as_slice() else {
            return Err(CliError::Config(
                "form.rulings needs exactly two classes".into(),
            ));
        };
        let classes: Vec<RatVector> = match class {
            Some(c) => vec![c.clone()],
            None => (0..samples)
                .map(|_| {
                    RatVector::new((0..g.rank()).map(|_| int(r.gen_range(-10..=10))).collect())
                })
                .collect(),
        };
        let mut strict = 0;
        for d in &classes {
            let rep = castelnuovo_check(&g, p1, p2, d).map_err(input)?;
            if !rep.holds {
                witnesses.push(
                    json!({"class": d, "lhs": rat_to_json(&rep.lhs), "rhs": rat_to_json(&rep.rhs)}),
                );
            } else if rep.lhs < rep.rhs {
                strict += 1;
            }
        }
        result["castelnuovo"] =
            json!({"checked": classes.len(), "strict": strict, "failures": witnesses.len()});
    }
    Ok(Outcome { result, witnesses })
}

fn hyperbolic(s: &FormScene, count: usize, r: &mut ChaCha8Rng) -> Result<Outcome, CliError> {
    let t = match (&s.form.gram, s.form.rectangle) {
        (Some(_), None) => SymMultiForm::from_gram(&s.gram()?),
        (None, Some(n)) => rectangle_form(n).map_err(input)?,
        _ => {
            return Err(CliError::Config(
                "[form] needs exactly one of gram or rectangle".into(),
            ))
        }
    };
    let samples: Vec<RatVector> = match &s.form.samples {
        Some(xs) => scene::vectors(xs),
        None if s.form.rectangle.is_some() => (0..count)
            .map(|_| RatVector::new((0..t.rank()).map(|_| rand_rat(r, 1, 9, 4)).collect()))
            .collect(),
        None => {
            return Err(CliError::Config(
                "form.samples is required for a Gram form".into(),
            ))
        }
    };
    let n = t.order();
    if samples.len() < n.max(2) {
        return Err(CliError::Config(format!(
            "need at least {} samples",
            n.max(2)
        )));
    }
    let mut witnesses = Vec::new();
    let axioms = hyperbolic_axioms_check(&t, &samples).map_err(input)?;
    if !axioms.passed {
        witnesses.push(json!({"axioms": to_json(&axioms)}));
    }
    let first: Vec<&RatVector> = samples[..n].iter().collect();
    let value = t.eval(&first).map_err(input)?;
    let chain = chain_inequality_check(&t, &samples[..n]).map_err(input)?;
    if !chain {
        witnesses.push(json!({"chain_inequality": samples[..n].to_vec()}));
    }
    let steps = s.form.steps.unwrap_or(8);
    let concavity =
        volume_root_concavity_check(&t, &samples[0], &samples[1], steps).map_err(input)?;
    if !concavity.holds {
        witnesses.push(json!({"concavity": to_json(&concavity)}));
    }
    let mut result = json!({
        "order": n,
        "rank": t.rank(),
        "samples": samples.len(),
        "value_on_first_samples": rat_to_json(&value),
        "axioms": axioms,
        "chain_inequality": chain,
        "concavity": concavity,
    });
    if let Some(c) = &s.form.calabi {
        let rep = calabi_kernel_check(
            &t,
            &samples,
            &scene::vectors(&c.v_basis),
            &scene::vector(&c.a1),
            &scene::vector(&c.a2),
        )
        .map_err(input)?;
        if !rep.holds {
            witnesses.push(json!({"calabi": to_json(&rep)}));
        }
        result["calabi"] = to_json(&rep);
    }
    Ok(Outcome { result, witnesses })
}

fn gens(s: &SemigroupScene) -> Result<SemigroupGens, CliError> {
    let g = s.gens()?;
    let rows: Vec<&[i64]> = g.gens.iter().map(Vec::as_slice).collect();
    SemigroupGens::from_ints(&rows).map_err(|e| CliError::Config(format!("[semigroup]: {e}")))
}

fn saturation(s: &SemigroupScene) -> Result<Outcome, CliError> {
    let g = s.graded()?;
    let mut levelled = Vec::new();
    for row in &g.generators {
        let (&level, point) = row
            .split_first()
            .ok_or_else(|| CliError::Config("empty graded generator".into()))?;
        let level =
            u32::try_from(level).map_err(|_| CliError::Config(format!("bad level {level}")))?;
        levelled.push((level, RatVector::from_ints(point)));
    }
    let sg = GradedSemigroup::from_generators(g.d, &levelled, g.m_max)
        .map_err(|e| CliError::Config(format!("[graded]: {e}")))?;
    let k = scene::polytope(&g.k, "graded.k")?;
    let rep = saturation_level(&sg, &k, g.m_max).map_err(input)?;
    let witnesses = if rep.m0.is_none() {
        vec![json!({"failing_levels": rep.failing_levels})]
    } else {
        vec![]
    };
    Ok(Outcome {
        result: to_json(&rep),
        witnesses,
    })
}

fn cone(s: &SemigroupScene, point: Option<&RatVector>) -> Result<Outcome, CliError> {
    let f = gens(s)?;
    let c = cone_closure(&f);
    let mut result = json!({"cone": c, "dual": c.dual()});
    if let Some(p) = point {
        result["point_in_dual_interior"] = interior_contains(&c, p).map_err(input)?.into();
    }
    let spec = s.cone.as_ref();
    if let Some(rows) = spec.and_then(|c| c.map.as_ref()) {
        let l = scene::lin_map(rows, "cone.map")?;
        result["projection"] = to_json(&project_cone(&l, &c).map_err(input)?);
    }
    match (
        spec.and_then(|c| c.u.as_ref()),
        spec.and_then(|c| c.h.as_ref()),
    ) {
        (Some(u), Some(h)) => {
            let hv: Vec<Rat> = h.iter().map(|q| q.0.clone()).collect();
            result["extension"] = match riesz_extend(f.dim(), &c, &scene::vectors(u), &hv) {
                Ok(func) => json!({"functional": func}),
                Err(oklab::exactgeom::GeomError::Infeasible { witness, .. }) => {
                    json!({"infeasible": witness})
                }
                Err(e) => return Err(input(e)),
            };
        }
        (None, None) => {}
        _ => return Err(CliError::Config("cone.u and cone.h go together".into())),
    }
    let hull = scene::polytope(
        &f.gens()
            .iter()
            .map(|g| g.iter().map(|x| scene::Q(x.clone())).collect())
            .collect::<Vec<_>>(),
        "generators",
    )?;
    let lattice = match spec.and_then(|c| c.lattice.as_ref()) {
        Some(rows) => Some(scene::lin_map(rows, "cone.lattice")?),
        None => None,
    };
    result["hull"] = to_json(&hull);
    result["hull_volume"] = rat_to_json(&polytope_volume(&hull, lattice.as_ref()).map_err(input)?);
    Ok(Outcome::pass(result))
}

fn one_function(s: &GvfScene, f: Option<&str>) -> Result<RationalFunction, CliError> {
    match f {
        Some(text) => s.parse_function(text),
        None => s
            .functions()?
            .into_iter()
            .next()
            .ok_or_else(|| CliError::Config("no function given (--f or gvf.functions)".into())),
    }
}

fn product_formula(s: &GvfScene, f: Option<&str>) -> Result<Outcome, CliError> {
    let f = one_function(s, f)?;
    let mu = s.measure(std::slice::from_ref(&f))?;
    let divisor = divisor_of(&f).map_err(input)?;
    let rep = product_formula_residual(&f, &mu).map_err(input)?;
    let divisor: serde_json::Map<String, Value> = divisor
        .iter()
        .map(|(p, k)| (p.to_string(), Value::from(*k)))
        .collect();
    let witnesses = if rep.residual.is_zero() {
        vec![]
    } else {
        vec![json!({"residual": rat_to_json(&rep.residual), "uncovered": rep.uncovered})]
    };
    Ok(Outcome {
        result: json!({
            "function": f.to_string(),
            "divisor": divisor,
            "measure": to_json(&mu),
            "residual": rat_to_json(&rep.residual),
            "uncovered": rep.uncovered,
        }),
        witnesses,
    })
}

fn adelic(s: &GvfScene) -> Result<Outcome, CliError> {
    let fns = s.functions()?;
    let levels = s.gvf.levels.clone().unwrap_or_else(|| vec![1; fns.len()]);
    if levels.len() != fns.len() {
        return Err(CliError::Config(
            "gvf.levels needs one level per function".into(),
        ));
    }
    let mu = s.measure(&fns)?;
    let pairs: Vec<(u32, RationalFunction)> = levels.into_iter().zip(fns).collect();
    let (masses, sections) = sections_from_functions(&mu, &pairs).map_err(input)?;
    let slack = s.gvf.slack.as_ref().map_or_else(Rat::zero, |q| q.0.clone());
    let rep = adelic_consistency_check(&masses, &sections, &slack).map_err(input)?;
    let witnesses = rep
        .violations
        .iter()
        .map(|(i, v)| json!({"section": i, "value": v}))
        .collect();
    Ok(Outcome {
        result: json!({"measure": to_json(&mu), "slack": rat_to_json(&slack), "report": rep}),
        witnesses,
    })
}

fn chebyshev(s: &ChebyshevScene, tolerance: Option<f64>) -> Result<Outcome, CliError> {
    let c = s
        .chebyshev
        .as_ref()
        .ok_or_else(|| CliError::Config("scene is missing [chebyshev]".into()))?;
    let tol = tolerance.unwrap_or(REMEZ_TOLERANCE);
    let rep = chebyshev_constant_with_tolerance(c.interval[0], c.interval[1], c.grid, c.n_max, tol)
        .map_err(input)?;
    Ok(Outcome::pass(to_json(&rep)))
}

fn fekete(s: &ChebyshevScene) -> Result<Outcome, CliError> {
    let seq = s
        .sequence
        .as_ref()
        .ok_or_else(|| CliError::Config("scene is missing [sequence]".into()))?;
    let vals: Vec<Rat> = seq.values.iter().map(|q| q.0.clone()).collect();
    if vals.is_empty() {
        return Err(CliError::Config("sequence.values is empty".into()));
    }
    match fekete_limit(|n| vals[(n - 1) as usize].clone(), vals.len() as u64) {
        Ok(rep) => Ok(Outcome::pass(to_json(&rep))),
        Err(oklab::gvf::GvfError::NotSuperadditive { n, m, detail }) => Ok(Outcome {
            result: json!({"superadditive": false}),
            witnesses: vec![json!({"n": n, "m": m, "detail": detail})],
        }),
        Err(e) => Err(input(e)),
    }
}
