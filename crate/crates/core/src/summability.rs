//! Power-series (P-) summability: the weighted mean
//! `(1/p(t)) Σ_{n≥1} a_n p_n t^{n−1}` of a sequence at a fixed `t ∈ (0, 1)`,
//! with certified truncation.
//!
//! Truncation stops at the first `N` with `B · Σ_{n>N} p_n t^{n−1} / p(t) < tol`,
//! where `B` bounds `|a_n|` (from the policy, or `2·max(1, running max)`). The
//! accumulation runs in ascending `n` with Neumaier compensation, so results
//! are deterministic for fixed inputs.

use std::path::Path;

use crate::accum::NeumaierSum;
use crate::error::{invalid, Error, Result};
use crate::function::{DomainGrid, FuzzyFunction};
use crate::fuzzy::{AlphaGrid, FuzzyNumber};
use crate::operators::{FuzzyOperatorFamily, KernelScratch, KernelWeights, OperatorFamily, NESTING_TOL};

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_N_CAP: usize = 2_000_000;

/// Weight sequence `⟨p_n⟩` with `p₁ > 0`, `p_n ≥ 0`, and `p(t) = Σ p_n t^{n−1}`
/// finite on `(0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub enum PowerSeriesMethod {
    /// `p_n = 1`, `p(t) = 1/(1 − t)`.
    Abel,
    /// Finitely many user weights; `p_n = 0` past the end of the list.
    Weights { name: String, weights: Vec<f64> },
}

impl PowerSeriesMethod {
    pub fn from_weights(name: impl Into<String>, weights: Vec<f64>) -> Result<Self> {
        let name = name.into();
        match weights.first() {
            None => return Err(invalid(format!("weight list '{name}' is empty"))),
            Some(&p1) if !(p1 > 0.0) => {
                return Err(invalid(format!("weight list '{name}': first weight must be > 0, got {p1}")))
            }
            _ => {}
        }
        if let Some((i, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !w.is_finite() || **w < 0.0)
        {
            return Err(invalid(format!(
                "weight list '{name}': p_{} = {w} is not a finite nonnegative number",
                i + 1
            )));
        }
        Ok(Self::Weights { name, weights })
    }

    /// Reads one nonnegative weight per line (blank lines and `#` comments
    /// skipped).
    pub fn from_weights_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut weights = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let w: f64 = line.parse().map_err(|e| Error::Format {
                path: path.to_path_buf(),
                message: format!("line {}: '{line}': {e}", lineno + 1),
            })?;
            weights.push(w);
        }
        Self::from_weights(format!("weights:{}", path.display()), weights)
    }

    /// `abel` or `weights:<file>`.
    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "abel" => Ok(Self::Abel),
            s => match s.strip_prefix("weights:") {
                Some(path) if !path.is_empty() => Self::from_weights_file(Path::new(path)),
                _ => Err(invalid(format!(
                    "unknown method '{text}'; valid: abel, weights:<file>"
                ))),
            },
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Self::Abel => "abel",
            Self::Weights { name, .. } => name,
        }
    }

    /// `p_n` for `n ≥ 1`.
    pub fn weight(&self, n: usize) -> f64 {
        match self {
            Self::Abel => 1.0,
            Self::Weights { weights, .. } => weights.get(n - 1).copied().unwrap_or(0.0),
        }
    }

    /// Whether `Σ p_n` diverges. Finite weight lists do not; such methods
    /// still produce means at fixed `t` but say nothing about `t → 1⁻`.
    pub fn partial_sums_diverge(&self) -> bool {
        matches!(self, Self::Abel)
    }

    /// `p(t)`.
    pub fn p_of_t(&self, t: f64) -> Result<f64> {
        check_t(t)?;
        Ok(match self {
            Self::Abel => 1.0 / (1.0 - t),
            Self::Weights { weights, .. } => weighted_powers(weights, t).value(),
        })
    }

    /// Precomputes everything that depends on `t` only.
    pub fn at(&self, t: f64) -> Result<MethodAt> {
        check_t(t)?;
        match self {
            Self::Abel => Ok(MethodAt {
                t,
                inv_p: 1.0 - t,
                tails: None,
                weights: None,
            }),
            Self::Weights { weights, .. } => {
                let p = weighted_powers(weights, t).value();
                // suffix sums Σ_{n>N} p_n t^{n−1}, N = 0..=L
                let mut tails = vec![0.0; weights.len() + 1];
                let mut acc = NeumaierSum::new();
                for n in (1..=weights.len()).rev() {
                    acc.add(weights[n - 1] * t.powi(n as i32 - 1));
                    tails[n - 1] = acc.value() / p;
                }
                Ok(MethodAt {
                    t,
                    inv_p: 1.0 / p,
                    tails: Some(tails),
                    weights: Some(weights.clone()),
                })
            }
        }
    }
}

fn weighted_powers(weights: &[f64], t: f64) -> NeumaierSum {
    weights
        .iter()
        .enumerate()
        .map(|(i, w)| w * t.powi(i as i32))
        .collect()
}

fn check_t(t: f64) -> Result<()> {
    if !(t > 0.0 && t < 1.0) {
        return Err(invalid(format!("t must lie in (0, 1), got {t}")));
    }
    Ok(())
}

/// A method evaluated at a fixed `t`.
#[derive(Debug, Clone)]
pub struct MethodAt {
    t: f64,
    inv_p: f64,
    tails: Option<Vec<f64>>,
    weights: Option<Vec<f64>>,
}

impl MethodAt {
    pub fn t(&self) -> f64 {
        self.t
    }

    /// `p_n t^{n−1} / p(t)`.
    #[inline]
    pub fn term(&self, n: usize) -> f64 {
        let p_n = match &self.weights {
            None => 1.0,
            Some(w) => w.get(n - 1).copied().unwrap_or(0.0),
        };
        p_n * self.t.powi(n as i32 - 1) * self.inv_p
    }

    /// `Σ_{n>N} p_n t^{n−1} / p(t)`.
    #[inline]
    pub fn tail(&self, big_n: usize) -> f64 {
        match &self.tails {
            None => self.t.powi(big_n as i32),
            Some(tails) => tails.get(big_n).copied().unwrap_or(0.0),
        }
    }
}

/// How far to sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    pub tol: f64,
    pub n_cap: usize,
    /// Uniform bound on `|a_n|`; when absent (or exceeded by an observed
    /// term) the bound becomes `2·max(1, running max)`.
    pub bound_hint: Option<f64>,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            n_cap: DEFAULT_N_CAP,
            bound_hint: None,
        }
    }
}

impl TruncationPolicy {
    pub fn new(tol: f64, n_cap: usize) -> Result<Self> {
        let p = Self {
            tol,
            n_cap,
            bound_hint: None,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_bound(mut self, bound: f64) -> Self {
        self.bound_hint = Some(bound);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) || !self.tol.is_finite() {
            return Err(invalid(format!("tol must be > 0, got {}", self.tol)));
        }
        if self.n_cap < 1 {
            return Err(invalid("n_cap must be at least 1"));
        }
        if let Some(b) = self.bound_hint {
            if !(b >= 0.0) || !b.is_finite() {
                return Err(invalid(format!("bound hint must be finite and >= 0, got {b}")));
            }
        }
        Ok(())
    }

    fn bound(&self, running_max: f64) -> f64 {
        match self.bound_hint {
            Some(b) if running_max <= b => b,
            // unit floor: a run of tiny terms must not certify the rest
            _ => 2.0 * running_max.max(1.0),
        }
    }
}

/// A truncated mean with its certificate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transformed {
    pub value: f64,
    pub n_used: usize,
    pub tail_bound: f64,
}

/// `(1/p(t)) Σ_{n=1}^{N} a_n p_n t^{n−1}` with the certified stopping index.
pub fn transform_scalar(
    a: &dyn Fn(usize) -> f64,
    t: f64,
    method: &PowerSeriesMethod,
    policy: &TruncationPolicy,
) -> Result<Transformed> {
    policy.validate()?;
    let m = method.at(t)?;
    let mut acc = NeumaierSum::new();
    let mut running_max = 0.0_f64;
    let mut tail_bound = f64::INFINITY;
    for n in 1..=policy.n_cap {
        let an = a(n);
        if !an.is_finite() {
            return Err(invalid(format!("sequence term a_{n} = {an} is not finite")));
        }
        running_max = running_max.max(an.abs());
        acc.add(m.term(n) * an);
        tail_bound = policy.bound(running_max) * m.tail(n);
        if tail_bound < policy.tol {
            return Ok(Transformed {
                value: acc.value(),
                n_used: n,
                tail_bound,
            });
        }
    }
    Err(Error::TruncationFailure {
        t,
        achieved: tail_bound,
        tol: policy.tol,
        n_cap: policy.n_cap,
    })
}

/// `(1 − t)/t · Σ_{m≥1} t^{m³}`, the Abel mean of the cube indicator,
/// summed until the tail bound `t^{(M+1)³}/(1 − t)` (scaled by the
/// prefactor) drops below `tol`.
pub fn cube_series(t: f64, tol: f64) -> Result<f64> {
    check_t(t)?;
    if !(tol > 0.0) {
        return Err(invalid(format!("tol must be > 0, got {tol}")));
    }
    let pre = (1.0 - t) / t;
    let mut acc = NeumaierSum::new();
    let mut m: u64 = 1;
    loop {
        acc.add(t.powf((m * m * m) as f64));
        let next = ((m + 1) * (m + 1) * (m + 1)) as f64;
        if pre * t.powf(next) / (1.0 - t) < tol {
            break;
        }
        m += 1;
    }
    Ok(pre * acc.value())
}

/// A function evaluated inside an operator sweep.
#[derive(Clone, Copy)]
pub enum Probe<'a> {
    Scalar(&'a dyn Fn(f64) -> f64),
    /// `z ↦ (z − x)²` centred at the evaluation point.
    CentralSquare,
}

impl Probe<'_> {
    fn eval(&self, z: f64, x: f64) -> f64 {
        match self {
            Probe::Scalar(g) => g(z),
            Probe::CentralSquare => (z - x) * (z - x),
        }
    }
}

/// Summed means of several probes over several points, sharing one
/// stopping index.
#[derive(Debug, Clone)]
pub struct SweepResult {
    /// `values[probe][point]`.
    pub values: Vec<Vec<f64>>,
    pub n_used: usize,
    pub tail_bound: f64,
}

/// `x ↦ (1/p(t)) Σ p_n t^{n−1} T̄_n(g; x)` for every probe `g` and point `x`.
///
/// The same `N` serves every probe and point; the stopping rule uses the
/// bound over all of them. Kernel families compute each weight window once
/// per `(n, x)` and reuse it across probes.
pub fn sweep(
    base: &dyn OperatorFamily,
    probes: &[Probe<'_>],
    points: &[f64],
    t: f64,
    method: &PowerSeriesMethod,
    policy: &TruncationPolicy,
) -> Result<SweepResult> {
    policy.validate()?;
    let m = method.at(t)?;
    let np = points.len();
    let mut acc = vec![NeumaierSum::new(); probes.len() * np];
    let mut terms = vec![0.0; probes.len() * np];
    let mut running_max = 0.0_f64;
    let mut tail_bound = f64::INFINITY;

    let mut nodes = Vec::new();
    let mut node_values: Vec<Vec<f64>> = vec![Vec::new(); probes.len()];
    let mut scratch = KernelScratch::new();
    let mut kw = KernelWeights::default();

    for n in 1..=policy.n_cap {
        match base.kernel() {
            Some(kernel) => {
                kernel.nodes(n, &mut nodes);
                for (vals, probe) in node_values.iter_mut().zip(probes) {
                    if let Probe::Scalar(g) = probe {
                        vals.clear();
                        vals.extend(nodes.iter().map(|&z| g(z)));
                    }
                }
                for (ix, &x) in points.iter().enumerate() {
                    kernel.weights(n, x, &mut scratch, &mut kw)?;
                    for (ip, probe) in probes.iter().enumerate() {
                        terms[ip * np + ix] = match probe {
                            Probe::Scalar(_) => kw.dot(&node_values[ip]),
                            Probe::CentralSquare => kw.central_square(&nodes, x),
                        };
                    }
                }
            }
            None => {
                for (ix, &x) in points.iter().enumerate() {
                    for (ip, probe) in probes.iter().enumerate() {
                        terms[ip * np + ix] = base.apply(n, &|z| probe.eval(z, x), x)?;
                    }
                }
            }
        }
        let w = m.term(n);
        for (a, &v) in acc.iter_mut().zip(&terms) {
            if !v.is_finite() {
                return Err(invalid(format!("operator value at n = {n} is not finite")));
            }
            running_max = running_max.max(v.abs());
            a.add(w * v);
        }
        tail_bound = policy.bound(running_max) * m.tail(n);
        if tail_bound < policy.tol {
            let values = acc
                .chunks_exact(np.max(1))
                .take(probes.len())
                .map(|row| row.iter().map(NeumaierSum::value).collect())
                .collect();
            return Ok(SweepResult {
                values,
                n_used: n,
                tail_bound,
            });
        }
    }
    Err(Error::TruncationFailure {
        t,
        achieved: tail_bound,
        tol: policy.tol,
        n_cap: policy.n_cap,
    })
}

/// Tabulated mean of a single function over a grid.
#[derive(Debug, Clone)]
pub struct Tabulation {
    pub values: Vec<f64>,
    pub n_used: usize,
    pub tail_bound: f64,
}

pub fn transform_function(
    base: &dyn OperatorFamily,
    g: &dyn Fn(f64) -> f64,
    t: f64,
    method: &PowerSeriesMethod,
    policy: &TruncationPolicy,
    grid: &DomainGrid,
) -> Result<Tabulation> {
    let r = sweep(base, &[Probe::Scalar(g)], grid.points(), t, method, policy)?;
    Ok(Tabulation {
        values: r.values.into_iter().next().unwrap_or_default(),
        n_used: r.n_used,
        tail_bound: r.tail_bound,
    })
}

/// The summed fuzzy mean `(1/p(t)) Σ p_n t^{n−1} T_n(f; x)` at each point.
pub fn transform_fuzzy_points(
    family: &FuzzyOperatorFamily,
    f: &FuzzyFunction,
    t: f64,
    method: &PowerSeriesMethod,
    policy: &TruncationPolicy,
    points: &[f64],
    alpha: &AlphaGrid,
) -> Result<(Vec<FuzzyNumber>, SweepResult)> {
    let probes: Vec<Probe<'_>> = f.components().iter().map(|c| Probe::Scalar(c.as_ref())).collect();
    let r = sweep(family.base().as_ref(), &probes, points, t, method, policy)?;
    let numbers = (0..points.len())
        .map(|ix| {
            let values: Vec<f64> = r.values.iter().map(|row| row[ix]).collect();
            f.assemble(&values, alpha, NESTING_TOL)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((numbers, r))
}

/// [`transform_fuzzy_points`] at a single point.
pub fn transform_fuzzy(
    family: &FuzzyOperatorFamily,
    f: &FuzzyFunction,
    t: f64,
    method: &PowerSeriesMethod,
    policy: &TruncationPolicy,
    x: f64,
    alpha: &AlphaGrid,
) -> Result<FuzzyNumber> {
    let (mut numbers, _) = transform_fuzzy_points(family, f, t, method, policy, &[x], alpha)?;
    Ok(numbers.remove(0))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::function::catalog;
    use crate::fuzzy::Side;
    use crate::operators::{is_perfect_cube, lift_fuzzy, test_function, Bernstein, FnFamily};

    /// Independent dense summation of the cube-indicator mean over all n,
    /// stopping once `t^{(M+1)³}/(1 − t) < 1e-12`.
    fn cube_oracle(t: f64) -> f64 {
        let mut m = 1u64;
        while t.powf(((m + 1).pow(3)) as f64) / (1.0 - t) >= 1e-12 {
            m += 1;
        }
        let last = (m + 1).pow(3);
        let mut s = 0.0;
        for n in 1..=last {
            if is_perfect_cube(n) {
                s += t.powi(n as i32 - 1);
            }
        }
        (1.0 - t) * s
    }

    fn policy() -> TruncationPolicy {
        TruncationPolicy::default()
    }

    #[test]
    fn abel_mean_of_constant() {
        for t in [0.1, 0.5, 0.9, 0.999] {
            let r = transform_scalar(&|_| 3.5, t, &PowerSeriesMethod::Abel, &policy()).unwrap();
            assert!((r.value - 3.5).abs() < 1e-8);
            assert!(r.tail_bound < 1e-8);
        }
    }

    #[test]
    fn abel_mean_of_cube_indicator() {
        let x = |n: usize| if is_perfect_cube(n as u64) { 1.0 } else { 0.0 };
        let r = transform_scalar(&x, 0.99, &PowerSeriesMethod::Abel, &policy().with_bound(1.0)).unwrap();
        let oracle = cube_oracle(0.99);
        assert!((r.value - oracle).abs() < 1e-8);
        assert!((r.value - 0.0368).abs() < 1e-4, "{}", r.value);
        assert!((cube_series(0.99, 1e-12).unwrap() - oracle).abs() < 1e-10);
    }

    #[test]
    fn alternating_sequence_and_grandi_partial_sums() {
        // a_n = (−1)^{n+1}: mean is (1 − t)/(1 + t), tending to 0
        let alt = |n: usize| if n % 2 == 1 { 1.0 } else { -1.0 };
        // partial sums of 1 − 1 + 1 − …: mean is 1/(1 + t), tending to 1/2
        let grandi = |n: usize| if n % 2 == 1 { 1.0 } else { 0.0 };
        let mut prev_gap = f64::INFINITY;
        for t in [0.9, 0.99, 0.999] {
            let a = transform_scalar(&alt, t, &PowerSeriesMethod::Abel, &policy()).unwrap();
            assert!((a.value - (1.0 - t) / (1.0 + t)).abs() < 1e-8);
            let g = transform_scalar(&grandi, t, &PowerSeriesMethod::Abel, &policy()).unwrap();
            assert!((g.value - 1.0 / (1.0 + t)).abs() < 1e-8);
            let gap = (g.value - 0.5).abs();
            assert!(gap < prev_gap);
            prev_gap = gap;
        }
    }

    #[test]
    fn regularity_on_convergent_sequence() {
        let l = -0.7;
        let mut prev = f64::INFINITY;
        for t in [0.9, 0.99, 0.999] {
            let r = transform_scalar(&|n| l + 1.0 / n as f64, t, &PowerSeriesMethod::Abel, &policy()).unwrap();
            // oracle: L + (1 − t)/t · (−ln(1 − t))
            let oracle = l + (1.0 - t) / t * -(1.0 - t).ln();
            assert!((r.value - oracle).abs() < 1e-8);
            let dev = (r.value - l).abs();
            assert!(dev < prev);
            prev = dev;
        }
    }

    #[test]
    fn truncation_is_certified() {
        let a = |n: usize| (n as f64).sin();
        for t in [0.9, 0.99, 0.999] {
            let coarse = transform_scalar(&a, t, &PowerSeriesMethod::Abel, &policy().with_bound(1.0)).unwrap();
            let fine = transform_scalar(
                &a,
                t,
                &PowerSeriesMethod::Abel,
                &TruncationPolicy {
                    tol: 1e-9,
                    ..policy().with_bound(1.0)
                },
            )
            .unwrap();
            assert!((coarse.value - fine.value).abs() < 1e-8);
            assert!(fine.n_used > coarse.n_used);
        }
    }

    #[test]
    fn truncation_failure_reports_bound() {
        let tight = TruncationPolicy {
            tol: 1e-8,
            n_cap: 100,
            bound_hint: Some(1.0),
        };
        match transform_scalar(&|_| 1.0, 0.999, &PowerSeriesMethod::Abel, &tight) {
            Err(Error::TruncationFailure { achieved, n_cap, .. }) => {
                assert_eq!(n_cap, 100);
                assert!((achieved - 0.999_f64.powi(100)).abs() < 1e-12);
            }
            other => panic!("expected truncation failure, got {other:?}"),
        }
    }

    #[test]
    fn rejects_t_outside_unit_interval() {
        for t in [0.0, 1.0, -0.5, 1.5, f64::NAN] {
            assert!(transform_scalar(&|_| 1.0, t, &PowerSeriesMethod::Abel, &policy()).is_err());
            assert!(cube_series(t, 1e-8).is_err());
        }
    }

    #[test]
    fn zero_prefix_is_not_certified_early() {
        let a = |n: usize| if n < 50 { 0.0 } else { 1.0 };
        let r = transform_scalar(&a, 0.9, &PowerSeriesMethod::Abel, &policy()).unwrap();
        assert!((r.value - 0.9_f64.powi(49)).abs() < 1e-8);
    }

    #[test]
    fn abel_closed_form_matches_truncated_sum() {
        for t in [0.5, 0.9, 0.99, 0.999, 0.9999] {
            let closed = PowerSeriesMethod::Abel.p_of_t(t).unwrap();
            let tol = 1e-8 * closed;
            let mut acc = NeumaierSum::new();
            let mut n = 0;
            while t.powi(n) / (1.0 - t) >= tol {
                acc.add(t.powi(n));
                n += 1;
            }
            assert!((acc.value() - closed).abs() < tol);
        }
    }

    #[test]
    fn weights_method() {
        let m = PowerSeriesMethod::from_weights("w", vec![1.0, 2.0, 0.0, 4.0]).unwrap();
        assert!(!m.partial_sums_diverge());
        let t = 0.5;
        assert!((m.p_of_t(t).unwrap() - (1.0 + 1.0 + 0.5)).abs() < 1e-15);
        let r = transform_scalar(&|n| n as f64, t, &m, &policy()).unwrap();
        assert!((r.value - (1.0 + 2.0 + 2.0) / 2.5).abs() < 1e-12);
        assert_eq!(r.n_used, 4);

        assert!(PowerSeriesMethod::from_weights("w", vec![0.0, 1.0]).is_err());
        assert!(PowerSeriesMethod::from_weights("w", vec![1.0, -1.0]).is_err());
        assert!(PowerSeriesMethod::from_weights("w", vec![]).is_err());
        assert!(PowerSeriesMethod::parse("borel").is_err());
        assert_eq!(PowerSeriesMethod::parse("abel").unwrap(), PowerSeriesMethod::Abel);
    }

    #[test]
    fn weights_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("w.txt");
        std::fs::write(&path, "# constant\n1\n1\n\n1\n").unwrap();
        let m = PowerSeriesMethod::parse(&format!("weights:{}", path.display())).unwrap();
        assert_eq!(m.weight(3), 1.0);
        assert_eq!(m.weight(4), 0.0);
        std::fs::write(&path, "1\nfoo\n").unwrap();
        assert!(matches!(
            PowerSeriesMethod::from_weights_file(&path),
            Err(Error::Format { .. })
        ));
        assert!(matches!(
            PowerSeriesMethod::from_weights_file(&dir.path().join("missing")),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn linearity_and_positivity() {
        let a = |n: usize| (n as f64 * 0.37).cos();
        let b = |n: usize| 1.0 / (n as f64).sqrt();
        let (ca, cb) = (2.5, -1.25);
        let p = policy().with_bound(4.0);
        for t in [0.9, 0.99] {
            let ta = transform_scalar(&a, t, &PowerSeriesMethod::Abel, &p).unwrap();
            let tb = transform_scalar(&b, t, &PowerSeriesMethod::Abel, &p).unwrap();
            let tc = transform_scalar(&|n| ca * a(n) + cb * b(n), t, &PowerSeriesMethod::Abel, &p).unwrap();
            assert!((tc.value - (ca * ta.value + cb * tb.value)).abs() < 1e-10);
            let pos = transform_scalar(&|n| (n as f64).sin().abs(), t, &PowerSeriesMethod::Abel, &p).unwrap();
            assert!(pos.value >= -p.tol);
        }
    }

    #[test]
    fn cube_series_values() {
        let v = cube_series(0.5, 1e-14).unwrap();
        assert!((v - (0.5 + 0.5_f64.powi(8) + 0.5_f64.powi(27))).abs() < 1e-14);
        assert!((v - 0.50391).abs() < 1e-5);
        let (a, b, c) = (
            cube_series(0.9, 1e-12).unwrap(),
            cube_series(0.99, 1e-12).unwrap(),
            cube_series(0.999, 1e-12).unwrap(),
        );
        assert!(a > b && b > c);
        assert!((c - cube_oracle(0.999)).abs() < 1e-8);
    }

    #[test]
    fn function_transform_of_constants_and_moments() {
        let grid = DomainGrid::unit(101).unwrap();
        let p = policy().with_bound(2.0);
        let e0 = test_function(0);
        let plain = transform_function(&Bernstein::plain(), &e0, 0.9, &PowerSeriesMethod::Abel, &p, &grid).unwrap();
        assert!(plain.values.iter().all(|v| (v - 1.0).abs() < 1e-8));

        let t = 0.99;
        let pert = transform_function(&Bernstein::perturbed(), &e0, t, &PowerSeriesMethod::Abel, &p, &grid).unwrap();
        let expected = 1.0 + cube_oracle(t);
        assert!(pert.values.iter().all(|v| (v - expected).abs() < 1e-8));

        // e2: x² + x(1 − x)·S(t) with S the Abel mean of 1/n, summed directly
        let mut s = NeumaierSum::new();
        for n in 1..200_000 {
            s.add(t.powi(n - 1) / n as f64);
        }
        let s_t = (1.0 - t) * s.value();
        let e2 = test_function(2);
        let tab = transform_function(&Bernstein::plain(), &e2, t, &PowerSeriesMethod::Abel, &p, &grid).unwrap();
        for (&x, v) in grid.points().iter().zip(&tab.values) {
            assert!((v - (x * x + x * (1.0 - x) * s_t)).abs() < 1e-8);
        }
    }

    #[test]
    fn kernel_and_generic_paths_agree() {
        // same operator, once through the kernel and once through apply only
        let bern = Arc::new(Bernstein::perturbed());
        let b2 = Arc::clone(&bern);
        let generic = FnFamily::new("generic", move |n, g, x| b2.apply(n, g, x).unwrap());
        let points = [0.0, 0.13, 0.5, 0.91, 1.0];
        let g = |z: f64| (2.0 * z).exp();
        let probes = [Probe::Scalar(&g), Probe::CentralSquare];
        let p = policy().with_bound(2.0 * 8.0);
        let fast = sweep(bern.as_ref(), &probes, &points, 0.9, &PowerSeriesMethod::Abel, &p).unwrap();
        let slow = sweep(&generic, &probes, &points, 0.9, &PowerSeriesMethod::Abel, &p).unwrap();
        assert_eq!(fast.n_used, slow.n_used);
        for (r1, r2) in fast.values.iter().zip(&slow.values) {
            for (a, b) in r1.iter().zip(r2) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn fuzzy_transform_matches_slice_transforms() {
        let alpha = AlphaGrid::uniform(10).unwrap();
        let fam = lift_fuzzy(Arc::new(Bernstein::perturbed()));
        let f = catalog::f1();
        let p = policy().with_bound(2.0 * 1.25);
        let x = 0.37;
        let out = transform_fuzzy(&fam, &f, 0.9, &PowerSeriesMethod::Abel, &p, x, &alpha).unwrap();
        assert!(out.is_valid());
        let base = Bernstein::perturbed();
        for (k, &al) in alpha.levels().iter().enumerate() {
            for side in Side::BOTH {
                let slice = f.slice(al, side).unwrap();
                let seq = |n: usize| base.apply(n, slice.as_ref(), x).unwrap();
                let r = transform_scalar(&seq, 0.9, &PowerSeriesMethod::Abel, &p).unwrap();
                assert!((out.endpoint(k, side) - r.value).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn fuzzy_transform_of_constant() {
        let alpha = AlphaGrid::default();
        let fam = lift_fuzzy(Arc::new(Bernstein::plain()));
        let c = FuzzyFunction::crisp("c", (0.0, 1.0), crate::function::scalar_fn(|_| -2.0));
        let out = transform_fuzzy(&fam, &c, 0.99, &PowerSeriesMethod::Abel, &policy().with_bound(2.0), 0.4, &alpha).unwrap();
        assert!(out.is_crisp());
        assert!((out.core().lo + 2.0).abs() < 1e-8);
    }
}
