//! Fuzzy real numbers stored as families of nested closed intervals on a
//! shared α-grid.
//!
//! A fuzzy number is determined by its level sets `[x]_α = [x_α⁻, x_α⁺]`.
//! Normality, fuzzy convexity and upper semicontinuity show up at this layer
//! as a single nesting condition: lower endpoints nondecreasing in α, upper
//! endpoints nonincreasing, and every cut a proper interval. The sup over
//! α ∈ [0, 1] in the metric `D` becomes a max over the grid levels.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Default number of α-intervals, i.e. 101 levels.
pub const DEFAULT_ALPHA_INTERVALS: usize = 100;

/// Closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(invalid(format!("interval endpoints must be finite, got [{lo}, {hi}]")));
        }
        if lo > hi {
            return Err(invalid(format!("interval [{lo}, {hi}] has lo > hi")));
        }
        Ok(Self { lo, hi })
    }

    pub const fn point(v: f64) -> Self {
        Self { lo: v, hi: v }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Hausdorff distance between two closed intervals,
/// `max{|I.lo − J.lo|, |I.hi − J.hi|}`.
pub fn hausdorff(a: &Interval, b: &Interval) -> f64 {
    (a.lo - b.lo).abs().max((a.hi - b.hi).abs())
}

/// Strictly increasing α-levels from 0 to 1.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct AlphaGrid {
    levels: Arc<Vec<f64>>,
}

impl AlphaGrid {
    pub fn new(levels: Vec<f64>) -> Result<Self> {
        if levels.len() < 2 {
            return Err(invalid("alpha grid needs at least the levels 0 and 1"));
        }
        if levels[0] != 0.0 || *levels.last().unwrap() != 1.0 {
            return Err(invalid("alpha grid must start at 0 and end at 1"));
        }
        if levels.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(invalid("alpha grid must be strictly increasing"));
        }
        Ok(Self {
            levels: Arc::new(levels),
        })
    }

    /// `intervals + 1` equally spaced levels on [0, 1].
    pub fn uniform(intervals: usize) -> Result<Self> {
        if intervals == 0 {
            return Err(invalid("alpha grid needs at least one interval"));
        }
        let k = intervals as f64;
        let levels = (0..=intervals).map(|i| i as f64 / k).collect();
        Self::new(levels)
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Index of the last level (`K`).
    pub fn k(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn index_of(&self, alpha: f64) -> Option<usize> {
        self.levels.iter().position(|&a| a == alpha)
    }

    pub fn same_as(&self, other: &AlphaGrid) -> bool {
        Arc::ptr_eq(&self.levels, &other.levels) || self.levels == other.levels
    }
}

impl Default for AlphaGrid {
    fn default() -> Self {
        Self::uniform(DEFAULT_ALPHA_INTERVALS).expect("default grid is valid")
    }
}

impl PartialEq for AlphaGrid {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl TryFrom<Vec<f64>> for AlphaGrid {
    type Error = Error;

    fn try_from(levels: Vec<f64>) -> Result<Self> {
        Self::new(levels)
    }
}

impl From<AlphaGrid> for Vec<f64> {
    fn from(grid: AlphaGrid) -> Self {
        grid.levels.as_ref().clone()
    }
}

/// Which endpoint of a level set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Lower,
    Upper,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Lower, Side::Upper];
}

/// A broken invariant, reported by [`FuzzyNumber::validate`].
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NonFinite { level: usize },
    /// `lo > hi` at this level.
    Inverted { level: usize, lo: f64, hi: f64 },
    /// `lo` decreased going from `level - 1` to `level`.
    LowerDecreasing { level: usize, prev: f64, current: f64 },
    /// `hi` increased going from `level - 1` to `level`.
    UpperIncreasing { level: usize, prev: f64, current: f64 },
    CutCount { expected: usize, found: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonFinite { level } => write!(f, "level {level}: non-finite endpoint"),
            Violation::Inverted { level, lo, hi } => {
                write!(f, "level {level}: lo {lo} > hi {hi}")
            }
            Violation::LowerDecreasing { level, prev, current } => {
                write!(f, "level {level}: lower endpoint {current} below previous {prev}")
            }
            Violation::UpperIncreasing { level, prev, current } => {
                write!(f, "level {level}: upper endpoint {current} above previous {prev}")
            }
            Violation::CutCount { expected, found } => {
                write!(f, "expected {expected} cuts, found {found}")
            }
        }
    }
}

/// A fuzzy real number given by one cut per α-level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FlatRecord", into = "FlatRecord")]
pub struct FuzzyNumber {
    grid: AlphaGrid,
    cuts: Vec<Interval>,
}

impl FuzzyNumber {
    /// Builds a fuzzy number without checking the nesting invariants; use
    /// [`FuzzyNumber::validate`] to inspect the result.
    pub fn from_cuts_unchecked(grid: AlphaGrid, cuts: Vec<Interval>) -> Self {
        Self { grid, cuts }
    }

    pub fn from_cuts(grid: AlphaGrid, cuts: Vec<Interval>) -> Result<Self> {
        let x = Self { grid, cuts };
        let violations = x.validate();
        if let Some(v) = violations.first() {
            return Err(invalid(format!(
                "not a fuzzy number ({} violation(s)); first: {v}",
                violations.len()
            )));
        }
        Ok(x)
    }

    pub fn crisp(value: f64, grid: &AlphaGrid) -> Self {
        Self {
            grid: grid.clone(),
            cuts: vec![Interval::point(value); grid.len()],
        }
    }

    /// Triangular number with support `[a, c]` and peak `b`; the cut at α is
    /// `[a + α(b − a), c − α(c − b)]`.
    pub fn triangular(a: f64, b: f64, c: f64, grid: &AlphaGrid) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(invalid("triangular parameters must be finite"));
        }
        if !(a <= b && b <= c) {
            return Err(invalid(format!("triangular needs a <= b <= c, got ({a}, {b}, {c})")));
        }
        let cuts = grid
            .levels()
            .iter()
            .map(|&alpha| triangular_cut(a, b, c, alpha))
            .collect();
        Ok(Self {
            grid: grid.clone(),
            cuts,
        })
    }

    pub fn grid(&self) -> &AlphaGrid {
        &self.grid
    }

    pub fn cuts(&self) -> &[Interval] {
        &self.cuts
    }

    pub fn cut(&self, level: usize) -> Interval {
        self.cuts[level]
    }

    pub fn endpoint(&self, level: usize, side: Side) -> f64 {
        match side {
            Side::Lower => self.cuts[level].lo,
            Side::Upper => self.cuts[level].hi,
        }
    }

    /// The 0-cut, i.e. the closure of the support.
    pub fn support(&self) -> Interval {
        self.cuts[0]
    }

    pub fn core(&self) -> Interval {
        *self.cuts.last().unwrap()
    }

    /// Largest endpoint magnitude over all levels.
    pub fn magnitude(&self) -> f64 {
        let s = self.support();
        s.lo.abs().max(s.hi.abs())
    }

    pub fn is_crisp(&self) -> bool {
        self.cuts.iter().all(|c| c.lo == c.hi)
    }

    fn check_grid(&self, other: &FuzzyNumber) -> Result<()> {
        if self.grid.same_as(&other.grid) {
            Ok(())
        } else {
            Err(invalid("fuzzy numbers live on different alpha grids; resample first"))
        }
    }

    /// Level-wise Minkowski sum.
    pub fn add(&self, other: &FuzzyNumber) -> Result<FuzzyNumber> {
        self.check_grid(other)?;
        let cuts = self
            .cuts
            .iter()
            .zip(&other.cuts)
            .map(|(a, b)| Interval {
                lo: a.lo + b.lo,
                hi: a.hi + b.hi,
            })
            .collect();
        Ok(Self {
            grid: self.grid.clone(),
            cuts,
        })
    }

    /// `λ ⊙ x`; a negative scalar swaps the endpoints.
    pub fn scale(&self, lambda: f64) -> FuzzyNumber {
        let cuts = self
            .cuts
            .iter()
            .map(|c| {
                let (p, q) = (lambda * c.lo, lambda * c.hi);
                if lambda >= 0.0 {
                    Interval { lo: p, hi: q }
                } else {
                    Interval { lo: q, hi: p }
                }
            })
            .collect();
        Self {
            grid: self.grid.clone(),
            cuts,
        }
    }

    /// `D(x, y) = max over levels of the Hausdorff distance between cuts`.
    pub fn distance(&self, other: &FuzzyNumber) -> Result<f64> {
        self.check_grid(other)?;
        Ok(self.distance_unchecked(other))
    }

    pub(crate) fn distance_unchecked(&self, other: &FuzzyNumber) -> f64 {
        self.cuts
            .iter()
            .zip(&other.cuts)
            .fold(0.0, |acc, (a, b)| acc.max(hausdorff(a, b)))
    }

    /// The level-wise partial order `x ⪯ y`.
    pub fn partial_leq(&self, other: &FuzzyNumber) -> Result<bool> {
        self.check_grid(other)?;
        Ok(self
            .cuts
            .iter()
            .zip(&other.cuts)
            .all(|(a, b)| a.lo <= b.lo && a.hi <= b.hi))
    }

    /// Every broken invariant, in level order. Empty iff `self` is a valid
    /// fuzzy number on its grid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.cuts.len() != self.grid.len() {
            out.push(Violation::CutCount {
                expected: self.grid.len(),
                found: self.cuts.len(),
            });
            return out;
        }
        for (level, c) in self.cuts.iter().enumerate() {
            if !(c.lo.is_finite() && c.hi.is_finite()) {
                out.push(Violation::NonFinite { level });
                continue;
            }
            if c.lo > c.hi {
                out.push(Violation::Inverted {
                    level,
                    lo: c.lo,
                    hi: c.hi,
                });
            }
            if level > 0 {
                let prev = self.cuts[level - 1];
                if c.lo < prev.lo {
                    out.push(Violation::LowerDecreasing {
                        level,
                        prev: prev.lo,
                        current: c.lo,
                    });
                }
                if c.hi > prev.hi {
                    out.push(Violation::UpperIncreasing {
                        level,
                        prev: prev.hi,
                        current: c.hi,
                    });
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Re-expresses `self` on another α-grid by linear interpolation of the
    /// endpoints in α.
    pub fn resample(&self, grid: &AlphaGrid) -> FuzzyNumber {
        let src = self.grid.levels();
        let cuts = grid
            .levels()
            .iter()
            .map(|&alpha| {
                let i = match src.binary_search_by(|a| a.total_cmp(&alpha)) {
                    Ok(i) => return self.cuts[i],
                    Err(i) => i,
                };
                let (a0, a1) = (src[i - 1], src[i]);
                let w = (alpha - a0) / (a1 - a0);
                let (c0, c1) = (self.cuts[i - 1], self.cuts[i]);
                Interval {
                    lo: c0.lo + w * (c1.lo - c0.lo),
                    hi: c0.hi + w * (c1.hi - c0.hi),
                }
            })
            .collect();
        Self {
            grid: grid.clone(),
            cuts,
        }
    }

    /// Line-oriented form: `K` on the first line, then one `α lo hi` line per
    /// level.
    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.grid.k());
        for (alpha, c) in self.grid.levels().iter().zip(&self.cuts) {
            s.push_str(&format!("{alpha} {} {}\n", c.lo, c.hi));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let k: usize = lines
            .next()
            .ok_or_else(|| invalid("empty fuzzy number record"))?
            .parse()
            .map_err(|e| invalid(format!("bad level count: {e}")))?;
        let mut triples = Vec::with_capacity(k + 1);
        for line in lines {
            let fields: Vec<f64> = line
                .split_whitespace()
                .map(str::parse)
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| invalid(format!("bad number in '{line}': {e}")))?;
            match fields[..] {
                [a, lo, hi] => triples.push([a, lo, hi]),
                _ => return Err(invalid(format!("expected 'alpha lo hi', got '{line}'"))),
            }
        }
        FlatRecord { k, levels: triples }.try_into()
    }
}

impl fmt::Display for FuzzyNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.support();
        let c = self.core();
        write!(f, "support {s}, core {c}")
    }
}

pub(crate) fn triangular_cut(a: f64, b: f64, c: f64, alpha: f64) -> Interval {
    // clamp to the peak so rounding cannot cross the endpoints near α = 1
    Interval {
        lo: (a + alpha * (b - a)).min(b),
        hi: (c - alpha * (c - b)).max(b),
    }
}

/// Serialized form of a fuzzy number: `K`, then `(α, lo, hi)` per level.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FlatRecord {
    pub k: usize,
    pub levels: Vec<[f64; 3]>,
}

impl From<FuzzyNumber> for FlatRecord {
    fn from(x: FuzzyNumber) -> Self {
        let levels = x
            .grid
            .levels()
            .iter()
            .zip(&x.cuts)
            .map(|(&a, c)| [a, c.lo, c.hi])
            .collect();
        FlatRecord {
            k: x.grid.k(),
            levels,
        }
    }
}

impl TryFrom<FlatRecord> for FuzzyNumber {
    type Error = Error;

    fn try_from(rec: FlatRecord) -> Result<Self> {
        if rec.levels.len() != rec.k + 1 {
            return Err(invalid(format!(
                "record declares K = {} but has {} levels",
                rec.k,
                rec.levels.len()
            )));
        }
        let grid = AlphaGrid::new(rec.levels.iter().map(|t| t[0]).collect())?;
        let cuts = rec
            .levels
            .iter()
            .map(|t| Interval { lo: t[1], hi: t[2] })
            .collect();
        Ok(FuzzyNumber { grid, cuts })
    }
}
