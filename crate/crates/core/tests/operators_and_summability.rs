use std::sync::Arc;

use fuzzy_korovkin::function::{catalog, modulus_fuzzy, modulus_via_lemma, DomainGrid};
use fuzzy_korovkin::harness::{run_classical, summability_points, Setup};
use fuzzy_korovkin::operators::{is_perfect_cube, lift_fuzzy, Bernstein};
use fuzzy_korovkin::summability::{cube_series, transform_fuzzy, TruncationPolicy};
use fuzzy_korovkin::validate;
use fuzzy_korovkin::{AlphaGrid, PowerSeriesMethod};

#[test]
fn modulus_two_ways_on_catalog() {
    let grid = DomainGrid::unit(1001).unwrap();
    let alpha = AlphaGrid::default();
    for f in catalog::all() {
        for d in [0.01, 0.1, 0.5] {
            let a = modulus_fuzzy(&f, d, &grid, &alpha).unwrap();
            let b = modulus_via_lemma(&f, d, &grid, &alpha).unwrap();
            assert!((a - b).abs() <= 1e-12, "{} at {d}: {a} vs {b}", f.name());
        }
    }
}

#[test]
fn positivity_transport_both_families() {
    let alpha = AlphaGrid::default();
    for base in [Bernstein::plain(), Bernstein::perturbed()] {
        let fam = lift_fuzzy(Arc::new(base));
        let c = validate::positivity_transport(&fam, 100, 11, &alpha).unwrap();
        assert!(c.passed, "{c:?}");
    }
}

#[test]
fn fuzzy_distance_at_half_shrinks_with_t() {
    let fam = lift_fuzzy(Arc::new(Bernstein::perturbed()));
    let alpha = AlphaGrid::default();
    let f = catalog::f1();
    let target = f.eval(0.5, &alpha).unwrap();
    let policy = TruncationPolicy::default();
    let d = |t: f64| {
        transform_fuzzy(&fam, &f, t, &PowerSeriesMethod::Abel, &policy, 0.5, &alpha)
            .unwrap()
            .distance(&target)
            .unwrap()
    };
    let (d9, d999) = (d(0.9), d(0.999));
    assert!(d999 < d9, "{d999} !< {d9}");
}

#[test]
fn example1_dichotomy() {
    let grid = DomainGrid::unit(101).unwrap();
    let ns: Vec<usize> = (1..=1000).collect();
    let r = run_classical(&Bernstein::perturbed(), &ns, &grid).unwrap();
    for (n, row) in ns.iter().zip(&r.rows) {
        let expect = if is_perfect_cube(*n as u64) { 1.0 } else { 0.0 };
        assert_eq!(row.norm_e0, Some(expect), "n = {n}");
    }
    let s: Vec<f64> = [0.9, 0.99, 0.999].iter().map(|&t| cube_series(t, 1e-12).unwrap()).collect();
    assert!(s[0] > s[1] && s[1] > s[2]);
    assert!((s[2] - 8.4367e-3).abs() < 1e-6);
}

#[test]
fn plain_bernstein_summed_is_regular() {
    let setup = Setup {
        grid: DomainGrid::unit(101).unwrap(),
        alpha: AlphaGrid::uniform(20).unwrap(),
        ..Setup::default()
    };
    let fam = lift_fuzzy(Arc::new(Bernstein::plain()));
    let pts = summability_points(&fam, &catalog::f2(), &[0.5, 0.9, 0.99], &setup).unwrap();
    for w in pts.windows(2) {
        assert!(w[1].norms[2] < w[0].norms[2]);
        assert!(w[1].dstar < w[0].dstar);
    }
    for p in &pts {
        assert!(p.norms[0] < 1e-8);
        assert!(p.norms[1] < 1e-8);
        // e2 mean is x² + x(1−x)·(Abel mean of 1/n), largest at x = 1/2
        let t = p.t;
        let mean_inv_n = (1.0 - t) * (-(1.0 - t).ln()) / t;
        assert!((p.norms[2] - 0.25 * mean_inv_n).abs() < 1e-8);
    }
}
