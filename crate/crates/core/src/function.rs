//! Fuzzy-number-valued functions on a compact interval, the sup metric `D*`,
//! and classical/fuzzy first moduli of continuity.
//!
//! A [`FuzzyFunction`] is a small set of scalar component functions plus a
//! [`Shape`] that turns component values at a point into a fuzzy number. The
//! shape is linear in the component values, so a linear operator can be
//! pushed through a fuzzy function by applying it to the components only.

use std::fmt;
use std::io::Write;
use std::sync::Arc;

use crate::error::{invalid, Error, Result};
use crate::fuzzy::{triangular_cut, AlphaGrid, FuzzyNumber, Interval, Side};

/// Shared scalar function on the real line.
pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

pub fn scalar_fn(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> ScalarFn {
    Arc::new(f)
}

/// Default number of domain points.
pub const DEFAULT_DOMAIN_POINTS: usize = 1001;

/// Pairs `(z, x)` with `|z − x| ≤ δ + PAIR_SLACK·(b − a)` are admitted by the
/// moduli, so grid pairs sitting exactly at distance δ are not lost to
/// rounding in the grid coordinates.
const PAIR_SLACK: f64 = 1e-12;

/// Ordered sample points covering `[a, b]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainGrid {
    a: f64,
    b: f64,
    points: Arc<Vec<f64>>,
}

impl DomainGrid {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(invalid("domain grid needs at least two points"));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(invalid("domain grid points must be finite"));
        }
        if points.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(invalid("domain grid must be strictly increasing"));
        }
        Ok(Self {
            a: points[0],
            b: *points.last().unwrap(),
            points: Arc::new(points),
        })
    }

    /// `n` equally spaced points from `a` to `b`, both included.
    pub fn uniform(a: f64, b: f64, n: usize) -> Result<Self> {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(invalid(format!("domain [{a}, {b}] must be a finite interval with a < b")));
        }
        if n < 2 {
            return Err(invalid("domain grid needs at least two points"));
        }
        let m = (n - 1) as f64;
        let mut points: Vec<f64> = (0..n).map(|i| a + (b - a) * (i as f64 / m)).collect();
        points[n - 1] = b;
        Self::new(points)
    }

    pub fn unit(n: usize) -> Result<Self> {
        Self::uniform(0.0, 1.0, n)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// `max{|a|, |b|}`.
    pub fn d(&self) -> f64 {
        self.a.abs().max(self.b.abs())
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// How component values at a point assemble into a fuzzy number.
#[derive(Debug, Clone)]
pub enum Shape {
    /// One component; every cut is the point `[v, v]`.
    Crisp,
    /// Components `(lo, peak, hi)`; cut at α is
    /// `[lo + α(peak − lo), hi − α(hi − peak)]`.
    Triangular,
    /// Two components per level of the grid, `(lo_k, hi_k)` interleaved.
    Levels(AlphaGrid),
}

impl Shape {
    fn arity(&self) -> usize {
        match self {
            Shape::Crisp => 1,
            Shape::Triangular => 3,
            Shape::Levels(g) => 2 * g.len(),
        }
    }
}

/// Continuous map `J → R_F`, represented through its endpoint slices.
#[derive(Clone)]
pub struct FuzzyFunction {
    name: String,
    domain: (f64, f64),
    shape: Shape,
    components: Vec<ScalarFn>,
}

impl fmt::Debug for FuzzyFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FuzzyFunction")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("shape", &self.shape)
            .finish_non_exhaustive()
    }
}

impl FuzzyFunction {
    pub fn crisp(name: impl Into<String>, domain: (f64, f64), g: ScalarFn) -> Self {
        Self {
            name: name.into(),
            domain,
            shape: Shape::Crisp,
            components: vec![g],
        }
    }

    /// Triangular-valued function `x ↦ (lo(x), peak(x), hi(x))`; the caller
    /// guarantees `lo ≤ peak ≤ hi` on the domain (checked on evaluation).
    pub fn triangular(
        name: impl Into<String>,
        domain: (f64, f64),
        lo: ScalarFn,
        peak: ScalarFn,
        hi: ScalarFn,
    ) -> Self {
        Self {
            name: name.into(),
            domain,
            shape: Shape::Triangular,
            components: vec![lo, peak, hi],
        }
    }

    /// General fuzzy function from explicit endpoint slices
    /// `(α, side, x) ↦ f_α^±(x)` sampled on the levels of `grid`.
    pub fn from_slices(
        name: impl Into<String>,
        domain: (f64, f64),
        grid: &AlphaGrid,
        slice: impl Fn(f64, Side, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        let slice = Arc::new(slice);
        let mut components = Vec::with_capacity(2 * grid.len());
        for &alpha in grid.levels() {
            for side in Side::BOTH {
                let s = Arc::clone(&slice);
                components.push(scalar_fn(move |x| s(alpha, side, x)));
            }
        }
        Self {
            name: name.into(),
            domain,
            shape: Shape::Levels(grid.clone()),
            components,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn components(&self) -> &[ScalarFn] {
        &self.components
    }

    pub fn is_crisp(&self) -> bool {
        matches!(self.shape, Shape::Crisp)
    }

    pub(crate) fn check_domain(&self, grid: &DomainGrid) -> Result<()> {
        let (a, b) = self.domain;
        if grid.a() != a || grid.b() != b {
            return Err(invalid(format!(
                "function '{}' lives on [{a}, {b}] but the grid covers [{}, {}]",
                self.name,
                grid.a(),
                grid.b()
            )));
        }
        Ok(())
    }

    fn check_alpha(&self, alpha: &AlphaGrid) -> Result<()> {
        match &self.shape {
            Shape::Levels(own) if !own.same_as(alpha) => Err(invalid(format!(
                "function '{}' is sampled on a different alpha grid",
                self.name
            ))),
            _ => Ok(()),
        }
    }

    pub fn component_values(&self, x: f64) -> Vec<f64> {
        self.components.iter().map(|c| c(x)).collect()
    }

    /// Builds the fuzzy number described by component values.
    ///
    /// Ordering defects up to `repair_tol` (rounding in an operator that is
    /// positive in exact arithmetic) are clamped; larger defects are an
    /// internal-consistency error.
    pub fn assemble(&self, values: &[f64], alpha: &AlphaGrid, repair_tol: f64) -> Result<FuzzyNumber> {
        if values.len() != self.shape.arity() {
            return Err(invalid(format!(
                "expected {} component values, got {}",
                self.shape.arity(),
                values.len()
            )));
        }
        self.check_alpha(alpha)?;
        match &self.shape {
            Shape::Crisp => Ok(FuzzyNumber::crisp(values[0], alpha)),
            Shape::Triangular => {
                let (mut lo, peak, mut hi) = (values[0], values[1], values[2]);
                lo = clamp_order(lo, peak, repair_tol, &self.name)?;
                hi = -clamp_order(-hi, -peak, repair_tol, &self.name)?;
                let cuts = alpha
                    .levels()
                    .iter()
                    .map(|&a| triangular_cut(lo, peak, hi, a))
                    .collect();
                Ok(FuzzyNumber::from_cuts_unchecked(alpha.clone(), cuts))
            }
            Shape::Levels(_) => {
                let cuts = values
                    .chunks_exact(2)
                    .map(|p| Interval { lo: p[0], hi: p[1] })
                    .collect();
                repair_nesting(alpha, cuts, repair_tol)
            }
        }
    }

    /// `f(x)` on the given α-grid.
    pub fn eval(&self, x: f64, alpha: &AlphaGrid) -> Result<FuzzyNumber> {
        self.assemble(&self.component_values(x), alpha, 0.0)
    }

    /// `f_α^±(x)`.
    pub fn endpoint(&self, alpha: f64, side: Side, x: f64) -> Result<f64> {
        endpoint_from_values(&self.shape, &self.component_values(x), alpha, side)
    }

    /// The endpoint slice `x ↦ f_α^±(x)` as a scalar function.
    pub fn slice(&self, alpha: f64, side: Side) -> Result<ScalarFn> {
        // validate α once up front
        endpoint_from_values(&self.shape, &vec![0.0; self.shape.arity()], alpha, side)?;
        let f = self.clone();
        Ok(scalar_fn(move |x| {
            endpoint_from_values(&f.shape, &f.component_values(x), alpha, side)
                .expect("alpha checked at slice construction")
        }))
    }

    /// `f(x)` at every grid point.
    pub fn tabulate(&self, grid: &DomainGrid, alpha: &AlphaGrid) -> Result<Vec<FuzzyNumber>> {
        self.check_domain(grid)?;
        grid.points().iter().map(|&x| self.eval(x, alpha)).collect()
    }

    /// CSV export with columns `x, alpha, lo, hi`.
    pub fn write_csv<W: Write>(&self, grid: &DomainGrid, alpha: &AlphaGrid, out: W) -> Result<()> {
        let table = self.tabulate(grid, alpha)?;
        let mut w = csv::Writer::from_writer(out);
        let to_err = |e: csv::Error| invalid(format!("csv write failed: {e}"));
        w.write_record(["x", "alpha", "lo", "hi"]).map_err(to_err)?;
        for (&x, fx) in grid.points().iter().zip(&table) {
            for (&a, c) in alpha.levels().iter().zip(fx.cuts()) {
                w.serialize((x, a, c.lo, c.hi)).map_err(to_err)?;
            }
        }
        w.flush().map_err(|e| invalid(format!("csv flush failed: {e}")))?;
        Ok(())
    }
}

fn clamp_order(lo: f64, peak: f64, tol: f64, name: &str) -> Result<f64> {
    if lo <= peak {
        Ok(lo)
    } else if lo - peak <= tol {
        Ok(peak)
    } else {
        Err(Error::InternalConsistency(format!(
            "'{name}': lower component {lo} exceeds peak {peak}"
        )))
    }
}

pub(crate) fn endpoint_from_values(shape: &Shape, values: &[f64], alpha: f64, side: Side) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(invalid(format!("alpha {alpha} outside [0, 1]")));
    }
    Ok(match shape {
        Shape::Crisp => values[0],
        Shape::Triangular => {
            let c = triangular_cut(values[0], values[1], values[2], alpha);
            match side {
                Side::Lower => c.lo,
                Side::Upper => c.hi,
            }
        }
        Shape::Levels(grid) => {
            let k = grid
                .index_of(alpha)
                .ok_or_else(|| invalid(format!("alpha {alpha} is not a level of the function's grid")))?;
            match side {
                Side::Lower => values[2 * k],
                Side::Upper => values[2 * k + 1],
            }
        }
    })
}

/// Clamps nesting defects of at most `tol` to the enclosing level.
pub fn repair_nesting(alpha: &AlphaGrid, mut cuts: Vec<Interval>, tol: f64) -> Result<FuzzyNumber> {
    let fail = |what: String| Err(Error::InternalConsistency(what));
    for k in 0..cuts.len() {
        if k > 0 {
            let prev = cuts[k - 1];
            let c = &mut cuts[k];
            if c.lo < prev.lo {
                if prev.lo - c.lo > tol {
                    return fail(format!("level {k}: lower endpoint drops by {}", prev.lo - c.lo));
                }
                c.lo = prev.lo;
            }
            if c.hi > prev.hi {
                if c.hi - prev.hi > tol {
                    return fail(format!("level {k}: upper endpoint rises by {}", c.hi - prev.hi));
                }
                c.hi = prev.hi;
            }
        }
        let c = &mut cuts[k];
        if c.lo > c.hi {
            if c.lo - c.hi > tol {
                return fail(format!("level {k}: inverted cut [{}, {}]", c.lo, c.hi));
            }
            let mid = 0.5 * (c.lo + c.hi);
            c.lo = mid;
            c.hi = mid;
        }
    }
    Ok(FuzzyNumber::from_cuts_unchecked(alpha.clone(), cuts))
}

/// `D*(g, h) = max over grid points of D(g(x), h(x))`.
pub fn metric_dstar(g: &FuzzyFunction, h: &FuzzyFunction, grid: &DomainGrid, alpha: &AlphaGrid) -> Result<f64> {
    if g.domain() != h.domain() {
        return Err(invalid(format!(
            "'{}' and '{}' have different domains",
            g.name(),
            h.name()
        )));
    }
    let gt = g.tabulate(grid, alpha)?;
    let ht = h.tabulate(grid, alpha)?;
    dstar_tables(&gt, &ht)
}

/// `D*` between two tabulations on the same grid.
pub fn dstar_tables(g: &[FuzzyNumber], h: &[FuzzyNumber]) -> Result<f64> {
    if g.len() != h.len() {
        return Err(invalid("tabulations have different lengths"));
    }
    g.iter()
        .zip(h)
        .try_fold(0.0_f64, |acc, (a, b)| Ok(acc.max(a.distance(b)?)))
}

/// Uniform norm over the grid.
pub fn sup_norm(g: &dyn Fn(f64) -> f64, grid: &DomainGrid) -> f64 {
    grid.points().iter().fold(0.0, |acc, &x| acc.max(g(x).abs()))
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(invalid(format!("modulus needs delta > 0, got {delta}")));
    }
    Ok(())
}

/// Banded sweep over all grid pairs `i < j` with `x_j − x_i ≤ δ`.
fn max_over_pairs(grid: &DomainGrid, delta: f64, mut dist: impl FnMut(usize, usize) -> f64) -> f64 {
    let pts = grid.points();
    let reach = delta + PAIR_SLACK * (grid.b() - grid.a());
    let mut best = 0.0_f64;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if pts[j] - pts[i] > reach {
                break;
            }
            best = best.max(dist(i, j));
        }
    }
    best
}

fn modulus_of_samples(grid: &DomainGrid, values: &[f64], delta: f64) -> f64 {
    max_over_pairs(grid, delta, |i, j| (values[j] - values[i]).abs())
}

/// Classical first modulus `ω₁(g; δ)` on the grid.
pub fn modulus_classical(g: &dyn Fn(f64) -> f64, delta: f64, grid: &DomainGrid) -> Result<f64> {
    check_delta(delta)?;
    let values: Vec<f64> = grid.points().iter().map(|&x| g(x)).collect();
    Ok(modulus_of_samples(grid, &values, delta))
}

/// Fuzzy first modulus `ω₁^F(f; δ) = sup_{|z−x|≤δ} D(f(z), f(x))`, swept
/// directly over pairs of fuzzy values.
pub fn modulus_fuzzy(f: &FuzzyFunction, delta: f64, grid: &DomainGrid, alpha: &AlphaGrid) -> Result<f64> {
    check_delta(delta)?;
    let table = f.tabulate(grid, alpha)?;
    Ok(modulus_of_table(&table, delta, grid))
}

/// [`modulus_fuzzy`] on an existing tabulation of `f` over `grid`.
pub fn modulus_of_table(table: &[FuzzyNumber], delta: f64, grid: &DomainGrid) -> f64 {
    max_over_pairs(grid, delta, |i, j| table[i].distance_unchecked(&table[j]))
}

/// `sup_α max{ω₁(f_α⁻; δ), ω₁(f_α⁺; δ)}`, computed slice by slice.
pub fn modulus_via_lemma(f: &FuzzyFunction, delta: f64, grid: &DomainGrid, alpha: &AlphaGrid) -> Result<f64> {
    check_delta(delta)?;
    f.check_domain(grid)?;
    let mut best = 0.0_f64;
    for &a in alpha.levels() {
        for side in Side::BOTH {
            let slice = f.slice(a, side)?;
            let values: Vec<f64> = grid.points().iter().map(|&x| slice(x)).collect();
            best = best.max(modulus_of_samples(grid, &values, delta));
        }
    }
    Ok(best)
}

/// `M_α^± = ‖f_α^±‖`; `alpha` must be one of the grid levels.
pub fn endpoint_sup_norm(
    f: &FuzzyFunction,
    alpha: f64,
    side: Side,
    grid: &DomainGrid,
    alpha_grid: &AlphaGrid,
) -> Result<f64> {
    if alpha_grid.index_of(alpha).is_none() {
        return Err(invalid(format!("alpha {alpha} is not on the alpha grid")));
    }
    f.check_domain(grid)?;
    let slice = f.slice(alpha, side)?;
    Ok(sup_norm(slice.as_ref(), grid))
}

/// `M = sup_α max{M_α⁺, M_α⁻}` by sweeping the levels.
pub fn fuzzy_sup_norm(f: &FuzzyFunction, grid: &DomainGrid, alpha_grid: &AlphaGrid) -> Result<f64> {
    let mut m = 0.0_f64;
    for &a in alpha_grid.levels() {
        for side in Side::BOTH {
            m = m.max(endpoint_sup_norm(f, a, side, grid, alpha_grid)?);
        }
    }
    Ok(m)
}

/// Named test functions on `[0, 1]`.
pub mod catalog {
    use std::f64::consts::PI;

    use super::*;

    pub const NAMES: [&str; 5] = ["e0", "e1", "e2", "f1", "f2"];

    /// Half-width of `f1`.
    pub const F1_WIDTH: f64 = 0.25;

    const UNIT: (f64, f64) = (0.0, 1.0);

    pub fn e0() -> FuzzyFunction {
        FuzzyFunction::crisp("e0", UNIT, scalar_fn(|_| 1.0))
    }

    pub fn e1() -> FuzzyFunction {
        FuzzyFunction::crisp("e1", UNIT, scalar_fn(|x| x))
    }

    pub fn e2() -> FuzzyFunction {
        FuzzyFunction::crisp("e2", UNIT, scalar_fn(|x| x * x))
    }

    /// `triangular(s − w, s, s + w)` with `s(x) = sin(πx)`, `w = 1/4`.
    pub fn f1() -> FuzzyFunction {
        FuzzyFunction::triangular(
            "f1",
            UNIT,
            scalar_fn(|x| (PI * x).sin() - F1_WIDTH),
            scalar_fn(|x| (PI * x).sin()),
            scalar_fn(|x| (PI * x).sin() + F1_WIDTH),
        )
    }

    /// `triangular(x², x² + x(1 − x), x² + 1)`; width varies with x.
    pub fn f2() -> FuzzyFunction {
        FuzzyFunction::triangular(
            "f2",
            UNIT,
            scalar_fn(|x| x * x),
            scalar_fn(|x| x * x + x * (1.0 - x)),
            scalar_fn(|x| x * x + 1.0),
        )
    }

    pub fn all() -> Vec<FuzzyFunction> {
        vec![e0(), e1(), e2(), f1(), f2()]
    }

    pub fn by_name(name: &str) -> Result<FuzzyFunction> {
        match name {
            "e0" => Ok(e0()),
            "e1" => Ok(e1()),
            "e2" => Ok(e2()),
            "f1" => Ok(f1()),
            "f2" => Ok(f2()),
            _ => Err(invalid(format!(
                "unknown function '{name}'; valid names: {}",
                NAMES.join(", ")
            ))),
        }
    }
}
