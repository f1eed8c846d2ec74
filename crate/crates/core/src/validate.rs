//! Randomized and exhaustive invariant checks: metric axioms for `D`, the
//! two modulus computations, endpoint consistency of the fuzzy lift and
//! positivity transport.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::function::{catalog, modulus_fuzzy, modulus_via_lemma, scalar_fn, DomainGrid, FuzzyFunction};
use crate::fuzzy::{AlphaGrid, FuzzyNumber, Interval, Side};
use crate::operators::FuzzyOperatorFamily;

pub const PROPERTY_TOL: f64 = 1e-12;

/// Outcome of one property over many samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyCheck {
    pub property: String,
    pub samples: usize,
    /// Largest observed defect (0 for a perfect run).
    pub worst: f64,
    pub tol: f64,
    pub passed: bool,
}

impl PropertyCheck {
    fn new(property: &str, samples: usize, worst: f64, tol: f64) -> Self {
        PropertyCheck {
            property: property.into(),
            samples,
            worst,
            tol,
            passed: worst <= tol,
        }
    }
}

/// A random valid fuzzy number: crisp, triangular or a general nested
/// family, with magnitude below about 10.
pub fn random_fuzzy_number<R: Rng>(rng: &mut R, grid: &AlphaGrid) -> FuzzyNumber {
    let centre = rng.gen_range(-5.0..5.0);
    match rng.gen_range(0..8) {
        0 => FuzzyNumber::crisp(centre, grid),
        1 | 2 => {
            let a = centre - rng.gen_range(0.0..2.0);
            let c = centre + rng.gen_range(0.0..2.0);
            FuzzyNumber::triangular(a, centre, c, grid).expect("ordered parameters")
        }
        _ => {
            let k = grid.len();
            let mut cuts = vec![Interval::point(0.0); k];
            let mut lo = centre - rng.gen_range(0.0..0.5);
            let mut hi = centre + rng.gen_range(0.0..0.5);
            for i in (0..k).rev() {
                cuts[i] = Interval { lo, hi };
                lo -= rng.gen_range(0.0..0.05);
                hi += rng.gen_range(0.0..0.05);
            }
            FuzzyNumber::from_cuts(grid.clone(), cuts).expect("nested by construction")
        }
    }
}

/// Identity, symmetry, triangle inequality, translation invariance and
/// homogeneity of `D`, plus closure of `+` and scaling, on `samples` random
/// triples.
pub fn metric_axioms(samples: usize, seed: u64, grid: &AlphaGrid) -> Result<Vec<PropertyCheck>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = [0.0_f64; 6];
    for _ in 0..samples {
        let u = random_fuzzy_number(&mut rng, grid);
        let v = random_fuzzy_number(&mut rng, grid);
        let w = random_fuzzy_number(&mut rng, grid);
        let lambda = rng.gen_range(-3.0..3.0);
        let duv = u.distance(&v)?;
        worst[0] = worst[0].max(u.distance(&u)?);
        worst[1] = worst[1].max((duv - v.distance(&u)?).abs());
        worst[2] = worst[2].max(duv - (u.distance(&w)? + w.distance(&v)?));
        worst[3] = worst[3].max((u.add(&w)?.distance(&v.add(&w)?)? - duv).abs());
        worst[4] = worst[4].max((u.scale(lambda).distance(&v.scale(lambda))? - lambda.abs() * duv).abs());
        let closed = u.add(&v)?.is_valid() && u.scale(lambda).is_valid();
        worst[5] = worst[5].max(if closed { 0.0 } else { 1.0 });
    }
    let names = [
        "D(u,u) = 0",
        "D symmetric",
        "D triangle inequality",
        "D translation invariant",
        "D homogeneous",
        "sum and scaling stay valid",
    ];
    Ok(names
        .iter()
        .zip(worst)
        .map(|(name, w)| PropertyCheck::new(name, samples, w, PROPERTY_TOL))
        .collect())
}

/// The fuzzy modulus computed from D on the tabulation against the
/// slice-wise maximum of classical moduli, over the catalog.
pub fn modulus_agreement(deltas: &[f64], grid: &DomainGrid, alpha: &AlphaGrid) -> Result<PropertyCheck> {
    let mut worst = 0.0_f64;
    let mut samples = 0;
    for f in catalog::all() {
        for &d in deltas {
            let a = modulus_fuzzy(&f, d, grid, alpha)?;
            let b = modulus_via_lemma(&f, d, grid, alpha)?;
            worst = worst.max((a - b).abs());
            samples += 1;
        }
    }
    Ok(PropertyCheck::new("modulus via D = modulus via slices", samples, worst, PROPERTY_TOL))
}

/// Every cut endpoint of `T_n(f; x)` against the base operator applied to
/// the matching endpoint slice of `f`.
pub fn endpoint_consistency(
    family: &FuzzyOperatorFamily,
    functions: &[FuzzyFunction],
    ns: &[usize],
    points: &[f64],
    alpha: &AlphaGrid,
) -> Result<PropertyCheck> {
    let mut worst = 0.0_f64;
    let mut samples = 0;
    for f in functions {
        let slices = alpha
            .levels()
            .iter()
            .map(|&a| Ok([f.slice(a, Side::Lower)?, f.slice(a, Side::Upper)?]))
            .collect::<Result<Vec<_>>>()?;
        for &n in ns {
            for &x in points {
                let out = family.apply(n, f, x, alpha)?;
                for (level, pair) in slices.iter().enumerate() {
                    for (side, s) in Side::BOTH.into_iter().zip(pair) {
                        let direct = family.base().apply(n, s.as_ref(), x)?;
                        worst = worst.max((out.endpoint(level, side) - direct).abs());
                    }
                }
                samples += 1;
            }
        }
    }
    Ok(PropertyCheck::new("lifted endpoints = base on slices", samples, worst, PROPERTY_TOL))
}

/// `q(x) = c0 + c1·x + c2·x²` with random coefficients; `nonneg` keeps all
/// of them nonnegative (so `q ≥ 0` on `[0, 1]`).
fn random_quadratic<R: Rng>(rng: &mut R, nonneg: bool) -> [f64; 3] {
    let lo = if nonneg { 0.0 } else { -2.0 };
    [rng.gen_range(lo..2.0), rng.gen_range(lo..2.0), rng.gen_range(lo..2.0)]
}

fn quad_fn(c: [f64; 3]) -> crate::function::ScalarFn {
    scalar_fn(move |x| c[0] + x * (c[1] + x * c[2]))
}

fn sum3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

/// Random triangular pairs `f ⪯ g` on `[0, 1]`: `T_n(f; x) ⪯ T_n(g; x)` at
/// random `n` and `x`. The defect is the largest amount by which a cut of
/// `T_n(f; x)` exceeds the matching cut of `T_n(g; x)`.
pub fn positivity_transport(
    family: &FuzzyOperatorFamily,
    probes: usize,
    seed: u64,
    alpha: &AlphaGrid,
) -> Result<PropertyCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0_f64;
    for i in 0..probes {
        let lo = random_quadratic(&mut rng, false);
        let peak = sum3(lo, random_quadratic(&mut rng, true));
        let hi = sum3(peak, random_quadratic(&mut rng, true));
        let shift = [
            random_quadratic(&mut rng, true),
            random_quadratic(&mut rng, true),
            random_quadratic(&mut rng, true),
        ];
        // g's components dominate f's and stay ordered.
        let glo = sum3(lo, shift[0]);
        let gpeak = sum3(glo, sum3(sum3(peak, [-lo[0], -lo[1], -lo[2]]), shift[1]));
        let ghi = sum3(gpeak, sum3(sum3(hi, [-peak[0], -peak[1], -peak[2]]), shift[2]));
        let f = FuzzyFunction::triangular(format!("f{i}"), (0.0, 1.0), quad_fn(lo), quad_fn(peak), quad_fn(hi));
        let g = FuzzyFunction::triangular(format!("g{i}"), (0.0, 1.0), quad_fn(glo), quad_fn(gpeak), quad_fn(ghi));
        let n = rng.gen_range(1..=200);
        let x = rng.gen_range(0.0..=1.0);
        let tf = family.apply(n, &f, x, alpha)?;
        let tg = family.apply(n, &g, x, alpha)?;
        for (a, b) in tf.cuts().iter().zip(tg.cuts()) {
            worst = worst.max(a.lo - b.lo).max(a.hi - b.hi);
        }
    }
    Ok(PropertyCheck::new("f <= g implies T(f) <= T(g)", probes, worst, PROPERTY_TOL))
}
