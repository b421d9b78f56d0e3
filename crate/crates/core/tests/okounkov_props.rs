use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Signed;
use oklab::okounkov::{
    body_volume, logconcavity_check, okounkov_body, value_set, GradedValueSets, LexValuation,
};
use oklab::toric::{fans, h0, volume_sections, Fan, ToricDivisor};
use oklab::RatVector;
use proptest::prelude::*;

fn surface_fans() -> Vec<Fan> {
    vec![
        fans::p2(),
        fans::p1xp1(),
        fans::hirzebruch(1),
        fans::bl_p2(1),
        fans::bl_p2(2),
    ]
}

fn any_divisor() -> impl Strategy<Value = ToricDivisor> {
    (0usize..5, prop::collection::vec(-1i64..=3, 5)).prop_map(|(f, c)| {
        let fan = surface_fans().swap_remove(f);
        let n = fan.rays().len();
        ToricDivisor::from_ints(fan, &c[..n]).unwrap()
    })
}

fn big_nef_divisor() -> impl Strategy<Value = ToricDivisor> {
    any_divisor().prop_filter("big and nef", |d| {
        d.is_nef() && volume_sections(d, 1).unwrap().1.is_positive()
    })
}

fn vertex_set(p: &oklab::exactgeom::Polytope) -> BTreeSet<RatVector> {
    p.vertices().iter().cloned().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// `V_k + V_l ⊆ V_{k+l}` and `|V_m| = h0(mD)`.
    #[test]
    fn value_sets_superadditive(d in any_divisor(), k in 1u32..4, l in 1u32..4) {
        let val = LexValuation::identity(2);
        let vk = value_set(&d, k, &val).unwrap();
        let vl = value_set(&d, l, &val).unwrap();
        let vkl = value_set(&d, k + l, &val).unwrap();
        for a in &vk {
            for b in &vl {
                let s: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                prop_assert!(vkl.contains(&s));
            }
        }
        for m in [k, l, k + l] {
            prop_assert_eq!(BigInt::from(value_set(&d, m, &val).unwrap().len()), h0(&d, m).unwrap());
        }
    }

    /// For nef lattice divisors the body is already reached at level one and
    /// its normalized volume equals the exact and asymptotic volumes.
    #[test]
    fn body_stable_and_volume_bridge(d in big_nef_divisor(), m_max in 2u32..5) {
        let val = LexValuation::identity(2);
        let b1 = okounkov_body(&GradedValueSets::from_toric(&d, &val, m_max).unwrap()).unwrap();
        let b2 = okounkov_body(&GradedValueSets::from_toric(&d, &val, 2 * m_max).unwrap()).unwrap();
        prop_assert_eq!(vertex_set(&b1), vertex_set(&b2));
        let (_, exact) = volume_sections(&d, 1).unwrap();
        prop_assert_eq!(body_volume(&b1), exact);
    }

    /// Adding an effective divisor enlarges the body.
    #[test]
    fn bodies_monotone(d in big_nef_divisor(), e in prop::collection::vec(0i64..=2, 5)) {
        let n = d.fan().rays().len();
        let eff = ToricDivisor::from_ints(d.fan().clone(), &e[..n]).unwrap();
        let bigger = d.add(&eff).unwrap();
        let val = LexValuation::identity(2);
        let small = okounkov_body(&GradedValueSets::from_toric(&d, &val, 3).unwrap()).unwrap();
        let large = okounkov_body(&GradedValueSets::from_toric(&bigger, &val, 3).unwrap()).unwrap();
        for v in small.vertices() {
            prop_assert!(large.contains(v));
        }
        prop_assert!(body_volume(&large) >= body_volume(&small));
    }

    /// `vol^{1/2}` is superadditive on big nef pairs.
    #[test]
    fn brunn_minkowski_on_pairs(pair in (0usize..5).prop_flat_map(|f| {
        let n = surface_fans()[f].rays().len();
        (Just(f), prop::collection::vec(0i64..=3, n), prop::collection::vec(0i64..=3, n))
    })) {
        let (f, c1, c2) = pair;
        let d1 = ToricDivisor::from_ints(surface_fans().swap_remove(f), &c1).unwrap();
        let d2 = ToricDivisor::from_ints(surface_fans().swap_remove(f), &c2).unwrap();
        let big = |d: &ToricDivisor| d.is_nef() && volume_sections(d, 1).unwrap().1.is_positive();
        prop_assume!(big(&d1) && big(&d2));
        let r = logconcavity_check(&d1, &d2, 2).unwrap();
        prop_assert!(r.holds, "{:?}", r);
    }
}
