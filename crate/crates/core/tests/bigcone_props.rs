use num_integer::Integer;
use num_traits::{Signed, Zero};
use oklab::bigcone::{psi, surfaces, vol, zariski, SurfaceLattice};
use oklab::forms::signature;
use oklab::okounkov::{body_volume, okounkov_body, GradedValueSets, LexValuation};
use oklab::rational::int;
use oklab::toric::{section_polytope, volume_sections, ToricDivisor};
use oklab::{Rat, RatVector};
use proptest::prelude::*;

fn surface() -> impl Strategy<Value = SurfaceLattice> {
    (0usize..surfaces::all().len()).prop_map(|i| surfaces::all().swap_remove(i))
}

fn small_rat() -> impl Strategy<Value = Rat> {
    (0i64..=6, 1i64..=3).prop_map(|(a, b)| Rat::new(a.into(), b.into()))
}

/// A big class: a nonnegative combination of curves plus an ample class.
fn big_class(s: &SurfaceLattice, c: &[Rat]) -> RatVector {
    let ample = s
        .nef_gens()
        .iter()
        .fold(RatVector::zeros(s.rank()), |acc, h| &acc + h);
    s.eff_gens()
        .iter()
        .zip(c)
        .fold(ample, |acc, (e, a)| &acc + &e.scale(a))
}

fn case() -> impl Strategy<Value = (SurfaceLattice, Vec<Rat>, Vec<Rat>)> {
    (
        surface(),
        prop::collection::vec(small_rat(), 8),
        prop::collection::vec(small_rat(), 8),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// `ψ(λx) = λψ(x)`, `ψ∘ψ = ψ`, and `ψ` fixes nef classes.
    #[test]
    fn psi_homogeneous_and_idempotent((s, c, _) in case(), lam in 1i64..=4) {
        let x = big_class(&s, &c);
        let p = psi(&s, &x).unwrap();
        prop_assert_eq!(psi(&s, &x.scale(&int(lam))).unwrap(), p.scale(&int(lam)));
        prop_assert_eq!(psi(&s, &p).unwrap(), p.clone());
        prop_assert!(s.is_nef(&p));
        let h = big_class(&s, &[]);
        prop_assert_eq!(psi(&s, &h).unwrap(), h);
    }

    /// Adding an effective class can only grow the positive part and the volume.
    #[test]
    fn psi_monotone((s, c, e) in case()) {
        let x = big_class(&s, &c);
        let eff = s.eff_gens().iter().zip(&e).fold(RatVector::zeros(s.rank()), |acc, (g, a)| &acc + &g.scale(a));
        let y = &x + &eff;
        let (px, py) = (psi(&s, &x).unwrap(), psi(&s, &y).unwrap());
        prop_assert!(s.is_psef(&(&py - &px)));
        prop_assert!(vol(&s, &y) >= vol(&s, &x));
    }

    /// `P·N_i = 0` on the support and the support is negative definite.
    #[test]
    fn negative_part_certificate((s, c, _) in case()) {
        let x = big_class(&s, &c);
        let z = zariski(&s, &x).unwrap();
        prop_assert_eq!(&(&z.positive + &z.negative), &x);
        let curves: Vec<RatVector> = z.support.iter().map(|&i| s.eff_gens()[i].clone()).collect();
        for curve in &curves {
            prop_assert!(s.pair(&z.positive, curve).is_zero());
        }
        if !curves.is_empty() {
            prop_assert_eq!(signature(&s.gram().restrict(&curves)), (0, 0, curves.len()));
        }
        prop_assert!(z.multiplicities.iter().all(|m| m.is_positive()));
        prop_assert_eq!(z.volume, s.self_intersection(&z.positive));
    }

    /// Zariski volume, exact polytope volume and Okounkov body volume agree
    /// on effective torus-invariant divisors.
    #[test]
    fn three_volumes_agree(s in surface(), c in prop::collection::vec(0i64..=3, 6)) {
        let (fan, _) = s.toric_model().unwrap();
        let n = fan.rays().len();
        let d = ToricDivisor::from_ints(fan, &c[..n]).unwrap();
        let class = s.class_of_toric(&d).unwrap();
        let (_, exact) = volume_sections(&d, 1).unwrap();
        prop_assert_eq!(vol(&s, &class), exact.clone());
        if exact.is_positive() {
            // Levels up to the vertex denominators reach every vertex.
            let poly = section_polytope(&d).unwrap();
            let m = poly.vertices().iter().flat_map(|v| v.coords().iter().map(|x| x.denom().clone())).fold(1u32.into(), |a: num_bigint::BigInt, b| a.lcm(&b));
            let m: u32 = m.try_into().unwrap();
            let body = okounkov_body(&GradedValueSets::from_toric(&d, &LexValuation::identity(2), m).unwrap()).unwrap();
            prop_assert_eq!(body_volume(&body), exact);
        }
    }
}
