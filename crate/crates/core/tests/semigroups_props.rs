use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use oklab::exactgeom::hull;
use oklab::linalg::{det, hermite, to_rat_rows};
use oklab::semigroups::{
    cone_closure, elements_up_to, group_closure, in_group, khovanskii_shift, saturation_level,
    GradedSemigroup, SemigroupGens,
};
use oklab::RatVector;
use proptest::prelude::*;

fn gens_2d() -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(0i64..=4, 2), 1..5)
        .prop_filter("needs a nonzero generator", |g| {
            g.iter().any(|v| v.iter().any(|&x| x != 0))
        })
}

fn semigroup(g: &[Vec<i64>]) -> SemigroupGens {
    SemigroupGens::new(g.iter().map(|v| RatVector::from_ints(v)).collect()).unwrap()
}

fn grade(w: &[i64], p: &[i64]) -> i64 {
    w.iter().zip(p).map(|(a, b)| a * b).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// Every element of `S` lies in the group and the cone it generates.
    #[test]
    fn semigroup_inside_group_and_cone(g in gens_2d()) {
        let f = semigroup(&g);
        let group = group_closure(&f);
        let cone = cone_closure(&f);
        for x in elements_up_to(&f, 20).unwrap() {
            prop_assert!(in_group(&group, &x));
            prop_assert!(cone.contains(&x));
        }
        for x in f.gens() {
            prop_assert!(in_group(&group, x));
        }
    }

    /// The shift is an element of `S` and every group point of `s + C` up to
    /// a modest grade is reached by the brute-force enumeration.
    #[test]
    fn shift_absorbs_group_points(g in gens_2d()) {
        let f = semigroup(&g);
        let report = khovanskii_shift(&f).unwrap();
        prop_assert!(report.certified);
        let w = f.grading().unwrap();
        let s = report.shift.to_i64s().unwrap();
        let bound = grade(&w, &s) + 12 * w.iter().map(|x| x.abs()).max().unwrap();
        let elems: BTreeSet<Vec<i64>> =
            elements_up_to(&f, bound).unwrap().iter().map(|v| v.to_i64s().unwrap()).collect();
        prop_assert!(elems.contains(&s));
        let group = group_closure(&f);
        let cone = cone_closure(&f);
        for x in 0..=12i64 {
            for y in 0..=12i64 {
                let p = vec![x, y];
                if grade(&w, &p) > bound {
                    continue;
                }
                let rel = RatVector::from_ints(&[x - s[0], y - s[1]]);
                if cone.contains(&rel) && in_group(&group, &RatVector::from_ints(&p)) {
                    prop_assert!(elems.contains(&p), "{:?} missing for shift {:?}", p, s);
                }
            }
        }
    }

    /// Hermite form: `u·m = h`, `u` unimodular, zero rows after the rank.
    #[test]
    fn hermite_certificate(m in prop::collection::vec(prop::collection::vec(-6i64..=6, 3), 1..5)) {
        let mb: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let hnf = hermite(&mb);
        let cols = 3;
        for i in 0..mb.len() {
            for j in 0..cols {
                let s: BigInt = (0..mb.len()).map(|k| &hnf.u[i][k] * &mb[k][j]).sum();
                prop_assert_eq!(&s, &hnf.h[i][j]);
            }
        }
        prop_assert_eq!(det(&to_rat_rows(&hnf.u)).abs(), oklab::rational::int(1));
        for row in &hnf.h[hnf.rank..] {
            prop_assert!(row.iter().all(Zero::is_zero));
        }
        for row in &hnf.h[..hnf.rank] {
            let lead = row.iter().find(|x| !x.is_zero());
            prop_assert!(lead.is_some_and(|x| x.is_positive()));
        }
    }

    /// Saturation failures on a smaller `K` are failures on a larger one.
    #[test]
    fn saturation_monotone_in_k(extra in prop::collection::btree_set(1i64..6, 0..4), top in 3i64..7, cut in 0usize..3) {
        let mut level1: Vec<i64> = vec![0, top];
        level1.extend(extra.into_iter().filter(|&x| x < top));
        let gens: Vec<(u32, RatVector)> = level1.iter().map(|&x| (1, RatVector::from_ints(&[x]))).collect();
        let m_max = 12;
        let s = GradedSemigroup::from_generators(1, &gens, m_max).unwrap();
        let q = |n: i64, d: i64| RatVector::new(vec![oklab::rational::frac(n, d)]);
        let small = hull(&[q(2 * top, 5), q(3 * top, 5)]).unwrap();
        let (a, b) = [(top, 5), (top, 4), (top, 3)][cut];
        let large = hull(&[q(a, b), q(b * top - a, b)]).unwrap();
        let rs = saturation_level(&s, &small, m_max).unwrap();
        let rl = saturation_level(&s, &large, m_max).unwrap();
        for m in &rs.failing_levels {
            prop_assert!(rl.failing_levels.contains(m));
        }
        if let (Some(ms), Some(ml)) = (rs.m0, rl.m0) {
            prop_assert!(ms <= ml);
        }
        if rl.m0.is_some() {
            prop_assert!(rs.m0.is_some());
        }
    }
}

#[test]
fn gap_fixture_saturates_from_two() {
    let gens: Vec<(u32, RatVector)> = [0, 2, 3]
        .iter()
        .map(|&x| (1, RatVector::from_ints(&[x])))
        .collect();
    let s = GradedSemigroup::from_generators(1, &gens, 8).unwrap();
    let k = hull(&[RatVector::from_ints(&[1]), RatVector::from_ints(&[2])]).unwrap();
    let r = saturation_level(&s, &k, 8).unwrap();
    assert_eq!(r.m0, Some(2));
    assert_eq!(r.failing_levels, vec![1]);
}
