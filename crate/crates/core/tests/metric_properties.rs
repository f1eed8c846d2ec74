use fuzzy_korovkin::{AlphaGrid, FuzzyNumber, Interval};
use proptest::prelude::*;

const TOL: f64 = 1e-12;

fn grid() -> AlphaGrid {
    AlphaGrid::uniform(20).unwrap()
}

/// Nested cuts from a core interval and per-level outward steps.
fn fuzzy_number() -> impl Strategy<Value = FuzzyNumber> {
    (
        -5.0..5.0f64,
        0.0..1.0f64,
        prop::collection::vec((0.0..0.2f64, 0.0..0.2f64), 21),
    )
        .prop_map(|(lo, width, steps)| {
            let g = grid();
            let mut cuts = vec![Interval::point(0.0); g.len()];
            let (mut a, mut b) = (lo, lo + width);
            for i in (0..g.len()).rev() {
                cuts[i] = Interval { lo: a, hi: b };
                a -= steps[i].0;
                b += steps[i].1;
            }
            FuzzyNumber::from_cuts(g, cuts).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn metric_axioms(u in fuzzy_number(), v in fuzzy_number(), w in fuzzy_number()) {
        let duv = u.distance(&v).unwrap();
        prop_assert!(u.distance(&u).unwrap() <= TOL);
        prop_assert!(duv >= 0.0);
        prop_assert!((duv - v.distance(&u).unwrap()).abs() <= TOL);
        prop_assert!(duv <= u.distance(&w).unwrap() + w.distance(&v).unwrap() + TOL);
    }

    #[test]
    fn translation_and_homogeneity(u in fuzzy_number(), v in fuzzy_number(), w in fuzzy_number(), l in -4.0..4.0f64) {
        let duv = u.distance(&v).unwrap();
        let shifted = u.add(&w).unwrap().distance(&v.add(&w).unwrap()).unwrap();
        prop_assert!((shifted - duv).abs() <= TOL);
        let scaled = u.scale(l).distance(&v.scale(l)).unwrap();
        prop_assert!((scaled - l.abs() * duv).abs() <= TOL);
    }

    #[test]
    fn arithmetic_preserves_validity(u in fuzzy_number(), v in fuzzy_number(), l in -4.0..4.0f64) {
        prop_assert!(u.add(&v).unwrap().is_valid());
        prop_assert!(u.scale(l).is_valid());
    }

    #[test]
    fn partial_order(u in fuzzy_number(), v in fuzzy_number(), w in fuzzy_number()) {
        prop_assert!(u.partial_leq(&u).unwrap());
        if u.partial_leq(&v).unwrap() && v.partial_leq(&u).unwrap() {
            prop_assert!(u.distance(&v).unwrap() == 0.0);
        }
        if u.partial_leq(&v).unwrap() {
            prop_assert!(u.add(&w).unwrap().partial_leq(&v.add(&w).unwrap()).unwrap());
            prop_assert!(v.scale(-1.0).partial_leq(&u.scale(-1.0)).unwrap());
        }
        let bumped = u.add(&FuzzyNumber::crisp(0.5, &grid())).unwrap();
        prop_assert!(u.partial_leq(&bumped).unwrap());
    }
}

#[test]
fn mismatched_grids_are_rejected() {
    let a = FuzzyNumber::crisp(1.0, &AlphaGrid::uniform(4).unwrap());
    let b = FuzzyNumber::crisp(1.0, &AlphaGrid::uniform(5).unwrap());
    assert!(a.distance(&b).is_err());
    assert!(a.add(&b).is_err());
}
