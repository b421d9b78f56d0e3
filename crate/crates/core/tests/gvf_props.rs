use num_traits::{One, Zero};
use oklab::bigcone::surfaces;
use oklab::gvf::{
    delta_measure, divisor_of, eval_term, height, product_formula_residual, projective_height,
    BaseField, Place, PlaceMeasure, Poly, RationalFunction, TropTerm,
};
use oklab::rational::{frac, int};
use oklab::{Rat, RatVector};
use proptest::prelude::*;

fn field() -> impl Strategy<Value = BaseField> {
    prop_oneof![
        Just(BaseField::Rational),
        Just(BaseField::prime(5).unwrap())
    ]
}

fn poly(f: BaseField) -> impl Strategy<Value = Poly> {
    prop::collection::vec(-5i64..=5, 1..=4)
        .prop_map(move |c| Poly::from_ints(f, &c))
        .prop_filter("nonzero", |p| !p.is_zero())
}

fn function(f: BaseField) -> impl Strategy<Value = RationalFunction> {
    (poly(f), poly(f)).prop_map(|(n, d)| RationalFunction::new(n, d).unwrap())
}

fn functions(k: usize) -> impl Strategy<Value = (BaseField, Vec<RationalFunction>)> {
    field().prop_flat_map(move |f| (Just(f), prop::collection::vec(function(f), k)))
}

fn one(f: BaseField) -> RationalFunction {
    RationalFunction::poly(Poly::one(f)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The canonical measure satisfies the product formula; finite zeros and
    /// poles weighted by degree balance the order at infinity.
    #[test]
    fn product_formula_holds((k, fs) in functions(1)) {
        let f = &fs[0];
        let mu = PlaceMeasure::canonical_for(k, &fs).unwrap();
        let r = product_formula_residual(f, &mu).unwrap();
        prop_assert!(r.residual.is_zero());
        prop_assert!(r.uncovered.is_empty());
        let div = divisor_of(f).unwrap();
        let finite: i64 = div
            .iter()
            .filter(|(p, _)| **p != Place::Infinity)
            .map(|(p, m)| p.weight() as i64 * m)
            .sum();
        prop_assert_eq!(finite, f.num.degree() as i64 - f.den.degree() as i64);
        prop_assert_eq!(div.get(&Place::Infinity).copied().unwrap_or(0), -finite);
        // Factorization reassembles the numerator.
        let (unit, factors) = f.num.factor().unwrap();
        let back = factors.iter().fold(Poly::constant(k, unit), |acc, (p, e)| acc.mul(&p.pow(*e)));
        prop_assert_eq!(back, f.num.clone());
        prop_assert!(factors.iter().all(|(p, _)| p.is_irreducible()));
    }

    /// `ht(f) = ht(1/f)`, `ht(f^k) = k·ht(f)` and renormalizing the measure
    /// rescales the height.
    #[test]
    fn height_symmetry_and_scaling((k, fs) in functions(1), e in 1u32..=3, s in 1i64..=5) {
        let f = &fs[0];
        let mu = PlaceMeasure::canonical_for(k, &fs).unwrap();
        let r = Rat::one();
        let h = height(f, &mu, &r).unwrap();
        prop_assert_eq!(height(&f.inv(), &mu, &r).unwrap(), h.clone());
        let fe = RationalFunction::new(f.num.pow(e), f.den.pow(e)).unwrap();
        prop_assert_eq!(height(&fe, &mu, &r).unwrap(), int(e as i64) * &h);
        let scaled = mu.scale(&frac(1, s)).unwrap();
        prop_assert_eq!(height(f, &scaled, &int(s)).unwrap(), h);
    }

    /// Integration of terms is linear; single variables integrate to zero;
    /// `min` and `max` reduce to projective heights of ratios.
    #[test]
    fn terms_reduce_to_heights((k, fs) in functions(3), a in -3i64..=3, b in -3i64..=3) {
        let mu = PlaceMeasure::canonical_for(k, &fs).unwrap();
        let r = Rat::one();
        let x1 = TropTerm::var(0);
        let x2 = TropTerm::var(1);
        prop_assert!(eval_term(&x1, &fs, &mu).unwrap().is_zero());
        let m = TropTerm::min(x1.clone(), x2.clone());
        let mx = TropTerm::max(x1.clone(), x2.clone());
        let lin = TropTerm::add(TropTerm::scale(int(a), m.clone()), TropTerm::scale(int(b), mx.clone()));
        let im = eval_term(&m, &fs, &mu).unwrap();
        let imx = eval_term(&mx, &fs, &mu).unwrap();
        prop_assert_eq!(eval_term(&lin, &fs, &mu).unwrap(), int(a) * &im + int(b) * &imx);
        let ratio = fs[1].div(&fs[0]);
        prop_assert_eq!(im, -projective_height(&[one(k), ratio], &mu, &r).unwrap());
        let max3 = TropTerm::parse("max(x1, x2, x3)").unwrap();
        let ratios = vec![one(k), fs[0].div(&fs[2]), fs[1].div(&fs[2])];
        prop_assert_eq!(eval_term(&max3, &fs, &mu).unwrap(), projective_height(&ratios, &mu, &r).unwrap());
    }
}

/// Every lattice point of the dual of the effective cone gives a measure on
/// the boundary valuations that satisfies the product formula.
#[test]
fn delta_measures_satisfy_product_formula() {
    for s in surfaces::all() {
        let r = s.rank();
        let mut checked = 0;
        let mut idx = vec![-3i64; r];
        loop {
            let a = RatVector::from_ints(&idx);
            if s.eff_gens().iter().all(|e| s.pair(&a, e) >= Rat::zero()) {
                let rep = delta_measure(&s, &a).unwrap();
                assert!(
                    rep.product_formula.iter().all(Zero::is_zero),
                    "{} at {a}",
                    s.name()
                );
                assert!(rep.identity_holds);
                checked += 1;
            }
            let mut k = 0;
            while k < r {
                idx[k] += 1;
                if idx[k] <= 3 {
                    break;
                }
                idx[k] = -3;
                k += 1;
            }
            if k == r {
                break;
            }
        }
        assert!(checked > 1, "{}", s.name());
    }
}
