//! Positive linear operator families on `C[a, b]` and their fuzzy lifts.
//!
//! A classical family `T̄_n` acts on scalar functions. The fuzzy operator
//! `T_n` is defined through its endpoints: `{T_n(f; x)}_α^± = T̄_n(f_α^±; x)`.
//! Because `T̄_n` is linear and every [`FuzzyFunction`] shape is linear in its
//! component functions, the lift applies `T̄_n` to the components and
//! reassembles.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{invalid, Error, Result};
use crate::function::{DomainGrid, FuzzyFunction};
use crate::fuzzy::{AlphaGrid, FuzzyNumber};

/// Ordering defects larger than this in a lifted output mean the base family
/// is not positive.
pub const NESTING_TOL: f64 = 1e-9;

/// Weights relative to the mode below this are dropped.
const WEIGHT_CUTOFF: f64 = 1e-17;

/// Korovkin test functions `e_i(x) = x^i`.
pub fn test_function(i: usize) -> impl Fn(f64) -> f64 {
    move |x: f64| x.powi(i as i32)
}

/// A sequence of positive linear operators, indexed from `n = 1`.
pub trait OperatorFamily: Send + Sync {
    fn name(&self) -> &str;

    /// `T̄_n(g; x)`.
    fn apply(&self, n: usize, g: &dyn Fn(f64) -> f64, x: f64) -> Result<f64>;

    /// Upper bound on the operator norms `‖T̄_n‖ = ‖T̄_n(e₀)‖`, if known.
    fn norm_bound(&self) -> Option<f64> {
        None
    }

    /// Discrete-kernel form, if the family has one. Sweeps use it to share
    /// weights across many functions.
    fn kernel(&self) -> Option<&dyn DiscreteKernel> {
        None
    }
}

impl fmt::Debug for dyn OperatorFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OperatorFamily({})", self.name())
    }
}

/// Families of the form `T̄_n(g; x) = scale · Σ_j w_j(x) g(ξ_{n,j})` with fixed
/// nodes `ξ_{n,j}` and nonnegative weights.
pub trait DiscreteKernel: Send + Sync {
    /// Nodes `ξ_{n,0..}` for index `n`.
    fn nodes(&self, n: usize, out: &mut Vec<f64>);

    /// Weight window at `x`; `scratch` may cache per-`n` tables.
    fn weights(&self, n: usize, x: f64, scratch: &mut KernelScratch, out: &mut KernelWeights) -> Result<()>;
}

/// A window of kernel weights: `w[i]` belongs to node `start + i`, and the
/// operator value is `scale · Σ w[i] g(ξ_{start+i}) / total`.
///
/// `total` is `Σ w` summed in the same order as [`KernelWeights::dot`], so a
/// constant input is reproduced exactly.
#[derive(Debug, Clone, Default)]
pub struct KernelWeights {
    pub start: usize,
    pub w: Vec<f64>,
    pub scale: f64,
    pub total: f64,
}

/// `Σ w[i]·v(i)` with four interleaved accumulators. Every weighted sum in
/// this module goes through here so that a constant input reproduces
/// `total` bit for bit.
#[inline(always)]
fn blocked_sum(w: &[f64], v: impl Fn(usize) -> f64) -> f64 {
    let mut acc = [0.0; 4];
    let mut wc = w.chunks_exact(4);
    let mut i = 0;
    for c in &mut wc {
        acc[0] += c[0] * v(i);
        acc[1] += c[1] * v(i + 1);
        acc[2] += c[2] * v(i + 2);
        acc[3] += c[3] * v(i + 3);
        i += 4;
    }
    let mut tail = 0.0;
    for &wi in wc.remainder() {
        tail += wi * v(i);
        i += 1;
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

#[inline(always)]
fn blocked_dot(w: &[f64], v: &[f64]) -> f64 {
    let mut acc = [0.0; 4];
    let mut wc = w.chunks_exact(4);
    let mut vc = v[..w.len()].chunks_exact(4);
    for (c, d) in (&mut wc).zip(&mut vc) {
        acc[0] += c[0] * d[0];
        acc[1] += c[1] * d[1];
        acc[2] += c[2] * d[2];
        acc[3] += c[3] * d[3];
    }
    let mut tail = 0.0;
    for (&wi, &vi) in wc.remainder().iter().zip(vc.remainder()) {
        tail += wi * vi;
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

impl KernelWeights {
    /// Sets `total` from the current weights.
    pub fn seal(&mut self) {
        self.total = blocked_sum(&self.w, |_| 1.0);
        debug_assert_eq!(self.total, blocked_dot(&self.w, &vec![1.0; self.w.len()]));
    }

    /// `scale · Σ w[i] · node_values[start + i] / total`.
    #[inline]
    pub fn dot(&self, node_values: &[f64]) -> f64 {
        let v = &node_values[self.start..self.start + self.w.len()];
        self.scale * (blocked_dot(&self.w, v) / self.total)
    }

    /// Like [`KernelWeights::dot`] with `g` evaluated on the fly.
    pub fn apply(&self, nodes: &[f64], g: &dyn Fn(f64) -> f64) -> f64 {
        let xs = &nodes[self.start..self.start + self.w.len()];
        self.scale * (blocked_sum(&self.w, |i| g(xs[i])) / self.total)
    }

    /// The operator applied to `z ↦ (z − x)²`.
    #[inline]
    pub fn central_square(&self, nodes: &[f64], x: f64) -> f64 {
        let xs = &nodes[self.start..self.start + self.w.len()];
        let mut acc = [0.0; 4];
        let mut wc = self.w.chunks_exact(4);
        let mut zc = xs.chunks_exact(4);
        for (c, z) in (&mut wc).zip(&mut zc) {
            for k in 0..4 {
                let d = z[k] - x;
                acc[k] += c[k] * (d * d);
            }
        }
        let mut tail = 0.0;
        for (&wi, &z) in wc.remainder().iter().zip(zc.remainder()) {
            tail += wi * ((z - x) * (z - x));
        }
        self.scale * (((acc[0] + acc[1]) + (acc[2] + acc[3]) + tail) / self.total)
    }

    /// Total mass, `scale`.
    pub fn mass(&self) -> f64 {
        self.scale * (blocked_sum(&self.w, |_| 1.0) / self.total)
    }
}

/// Per-`n` ratio tables reused across evaluation points.
#[derive(Debug, Default)]
pub struct KernelScratch {
    n: usize,
    up: Vec<f64>,
    down: Vec<f64>,
    buf: Vec<f64>,
}

impl KernelScratch {
    pub fn new() -> Self {
        Self::default()
    }

    fn prepare(&mut self, n: usize) {
        if self.n == n && !self.up.is_empty() {
            return;
        }
        self.n = n;
        let nf = n as f64;
        // C(n, j+1)/C(n, j) and C(n, j-1)/C(n, j)
        self.up = (0..n).map(|j| (nf - j as f64) / (j as f64 + 1.0)).collect();
        self.down = (0..=n)
            .map(|j| if j == 0 { 0.0 } else { j as f64 / (nf - j as f64 + 1.0) })
            .collect();
        if self.buf.len() < n + 1 {
            self.buf.resize(n + 1, 0.0);
        }
    }
}

/// `true` when `i = m³` for some `m ≥ 1`.
pub fn is_perfect_cube(i: u64) -> bool {
    if i == 0 {
        return false;
    }
    let guess = (i as f64).cbrt().round() as u64;
    (guess.saturating_sub(1)..=guess + 1).any(|m| m.checked_pow(3) == Some(i))
}

/// The cube-indicator perturbation: `x_i = 1` if `i` is a perfect cube,
/// otherwise `0`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PerturbationSequence;

impl PerturbationSequence {
    pub fn value(&self, i: usize) -> f64 {
        if is_perfect_cube(i as u64) {
            1.0
        } else {
            0.0
        }
    }
}

/// Bernstein operators `Σ_j C(n,j) xʲ(1−x)^{n−j} g(j/n)` on `[0, 1]`,
/// optionally multiplied by `1 + x_n` with the cube perturbation.
#[derive(Debug, Clone)]
pub struct Bernstein {
    name: &'static str,
    perturbation: Option<PerturbationSequence>,
}

impl Bernstein {
    pub fn plain() -> Self {
        Self {
            name: "bernstein",
            perturbation: None,
        }
    }

    pub fn perturbed() -> Self {
        Self {
            name: "perturbed-bernstein",
            perturbation: Some(PerturbationSequence),
        }
    }

    /// `1 + x_n` for the perturbed family, `1` otherwise.
    pub fn factor(&self, n: usize) -> f64 {
        1.0 + self.perturbation.map_or(0.0, |p| p.value(n))
    }

    /// Normalized Bernstein weights `C(n,j) xʲ(1−x)^{n−j}` for all `j`,
    /// including the negligible tails (as exact zeros).
    pub fn basis_weights(n: usize, x: f64) -> Result<Vec<f64>> {
        let mut kw = KernelWeights::default();
        bernstein_window(n, x, &mut KernelScratch::new(), &mut kw)?;
        let mut full = vec![0.0; n + 1];
        for (i, w) in kw.w.iter().enumerate() {
            full[kw.start + i] = kw.scale * (w / kw.total);
        }
        Ok(full)
    }
}

fn check_index(n: usize) -> Result<()> {
    if n == 0 {
        return Err(invalid("operator index n starts at 1"));
    }
    Ok(())
}

fn check_unit(x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(invalid(format!("Bernstein operators need x in [0, 1], got {x}")));
    }
    Ok(())
}

/// Fills `out` with the Bernstein weights around the mode, normalized
/// through `out.scale`.
///
/// Weights are generated outward from the mode `⌊(n+1)x⌋` with the ratios
/// `C(n,j±1)/C(n,j)` times `x/(1−x)` or its inverse, so neither factorials
/// nor `xⁿ` ever appear and nothing underflows for large `n`.
fn bernstein_window(n: usize, x: f64, scratch: &mut KernelScratch, out: &mut KernelWeights) -> Result<()> {
    check_index(n)?;
    check_unit(x)?;
    out.w.clear();
    out.scale = 1.0;
    if x == 0.0 || x == 1.0 {
        out.start = if x == 0.0 { 0 } else { n };
        out.w.push(1.0);
        out.seal();
        return Ok(());
    }
    scratch.prepare(n);
    let r = x / (1.0 - x);
    let rinv = (1.0 - x) / x;
    let mode = (((n + 1) as f64 * x).floor() as usize).min(n);

    let KernelScratch { up, down, buf, .. } = scratch;
    buf[mode] = 1.0;
    // Each side is a pair of chains over alternate nodes, stepping two
    // nodes at a time, so consecutive multiplications are independent.
    let r2 = r * r;
    let mut hi = mode;
    if mode < n {
        buf[mode + 1] = up[mode] * r;
        hi = mode + 1;
        let (mut a, mut b) = (1.0, buf[mode + 1]);
        while b >= WEIGHT_CUTOFF && hi + 1 < n {
            let j = hi - 1;
            a *= up[j] * up[j + 1] * r2;
            b *= up[j + 1] * up[j + 2] * r2;
            buf[hi + 1] = a;
            buf[hi + 2] = b;
            hi += 2;
        }
        if b >= WEIGHT_CUTOFF && hi < n {
            buf[hi + 1] = b * up[hi] * r;
            hi += 1;
        }
    }
    let rinv2 = rinv * rinv;
    let mut lo = mode;
    if mode > 0 {
        buf[mode - 1] = down[mode] * rinv;
        lo = mode - 1;
        let (mut a, mut b) = (1.0, buf[mode - 1]);
        while b >= WEIGHT_CUTOFF && lo > 1 {
            let j = lo + 1;
            a *= down[j] * down[j - 1] * rinv2;
            b *= down[j - 1] * down[j - 2] * rinv2;
            buf[lo - 1] = a;
            buf[lo - 2] = b;
            lo -= 2;
        }
        if b >= WEIGHT_CUTOFF && lo > 0 {
            buf[lo - 1] = b * down[lo] * rinv;
            lo -= 1;
        }
    }
    out.start = lo;
    out.w.extend_from_slice(&buf[lo..=hi]);
    out.seal();
    Ok(())
}

impl DiscreteKernel for Bernstein {
    fn nodes(&self, n: usize, out: &mut Vec<f64>) {
        let nf = n as f64;
        out.clear();
        out.extend((0..=n).map(|j| j as f64 / nf));
    }

    fn weights(&self, n: usize, x: f64, scratch: &mut KernelScratch, out: &mut KernelWeights) -> Result<()> {
        bernstein_window(n, x, scratch, out)?;
        out.scale *= self.factor(n);
        Ok(())
    }
}

impl OperatorFamily for Bernstein {
    fn name(&self) -> &str {
        self.name
    }

    fn apply(&self, n: usize, g: &dyn Fn(f64) -> f64, x: f64) -> Result<f64> {
        let mut kw = KernelWeights::default();
        self.weights(n, x, &mut KernelScratch::new(), &mut kw)?;
        let nf = n as f64;
        let s = blocked_sum(&kw.w, |i| g((kw.start + i) as f64 / nf));
        Ok(kw.scale * (s / kw.total))
    }

    fn norm_bound(&self) -> Option<f64> {
        Some(if self.perturbation.is_some() { 2.0 } else { 1.0 })
    }

    fn kernel(&self) -> Option<&dyn DiscreteKernel> {
        Some(self)
    }
}

type ApplyFn = dyn Fn(usize, &dyn Fn(f64) -> f64, f64) -> f64 + Send + Sync;

/// A family given only by a name and its apply function.
pub struct FnFamily {
    name: String,
    apply: Box<ApplyFn>,
}

impl FnFamily {
    pub fn new(
        name: impl Into<String>,
        apply: impl Fn(usize, &dyn Fn(f64) -> f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            apply: Box::new(apply),
        }
    }
}

impl OperatorFamily for FnFamily {
    fn name(&self) -> &str {
        &self.name
    }

    fn apply(&self, n: usize, g: &dyn Fn(f64) -> f64, x: f64) -> Result<f64> {
        check_index(n)?;
        Ok((self.apply)(n, g, x))
    }
}

/// Name → family lookup used by the CLI.
pub struct OperatorRegistry {
    families: BTreeMap<String, Arc<dyn OperatorFamily>>,
}

impl Default for OperatorRegistry {
    fn default() -> Self {
        let mut r = Self {
            families: BTreeMap::new(),
        };
        r.register(Arc::new(Bernstein::plain()));
        r.register(Arc::new(Bernstein::perturbed()));
        r
    }
}

impl OperatorRegistry {
    pub fn register(&mut self, family: Arc<dyn OperatorFamily>) {
        self.families.insert(family.name().to_string(), family);
    }

    pub fn names(&self) -> Vec<&str> {
        self.families.keys().map(String::as_str).collect()
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn OperatorFamily>> {
        self.families.get(name).cloned().ok_or_else(|| {
            invalid(format!(
                "unknown operator '{name}'; valid names: {}",
                self.names().join(", ")
            ))
        })
    }
}

/// Fuzzy operator family obtained from a classical positive linear base by
/// acting on endpoints.
#[derive(Clone)]
pub struct FuzzyOperatorFamily {
    base: Arc<dyn OperatorFamily>,
}

impl fmt::Debug for FuzzyOperatorFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FuzzyOperatorFamily({})", self.base.name())
    }
}

pub fn lift_fuzzy(base: Arc<dyn OperatorFamily>) -> FuzzyOperatorFamily {
    FuzzyOperatorFamily { base }
}

impl FuzzyOperatorFamily {
    pub fn base(&self) -> &Arc<dyn OperatorFamily> {
        &self.base
    }

    pub fn name(&self) -> &str {
        self.base.name()
    }

    /// `T_n(f; x)` on the given α-grid.
    pub fn apply(&self, n: usize, f: &FuzzyFunction, x: f64, alpha: &AlphaGrid) -> Result<FuzzyNumber> {
        let values = f
            .components()
            .iter()
            .map(|c| self.base.apply(n, c.as_ref(), x))
            .collect::<Result<Vec<_>>>()?;
        f.assemble(&values, alpha, NESTING_TOL).map_err(|e| match e {
            Error::InternalConsistency(m) => Error::InternalConsistency(format!(
                "{} output for '{}' at n = {n}, x = {x} is not a fuzzy number ({m}); is the base positive?",
                self.name(),
                f.name()
            )),
            other => other,
        })
    }
}

/// `‖T̄_n(e_i) − e_i‖` on the grid.
pub fn korovkin_norm(base: &dyn OperatorFamily, n: usize, i: usize, grid: &DomainGrid) -> Result<f64> {
    if i > 2 {
        return Err(invalid(format!("Korovkin test functions are e0, e1, e2; got e{i}")));
    }
    approximation_error(base, n, &test_function(i), grid)
}

/// The three Korovkin norms at index `n`.
pub fn korovkin_norms(base: &dyn OperatorFamily, n: usize, grid: &DomainGrid) -> Result<[f64; 3]> {
    Ok([
        korovkin_norm(base, n, 0, grid)?,
        korovkin_norm(base, n, 1, grid)?,
        korovkin_norm(base, n, 2, grid)?,
    ])
}

/// `sup_x |T̄_n(g; x) − g(x)|` for an arbitrary scalar function.
pub fn approximation_error(base: &dyn OperatorFamily, n: usize, g: &dyn Fn(f64) -> f64, grid: &DomainGrid) -> Result<f64> {
    grid.points()
        .iter()
        .try_fold(0.0_f64, |acc, &x| Ok(acc.max((base.apply(n, g, x)? - g(x)).abs())))
}
