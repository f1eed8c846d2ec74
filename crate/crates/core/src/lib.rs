//! Fuzzy-number arithmetic, fuzzy positive linear operators and power-series
//! summability, with experiments for Korovkin-type approximation.
//!
//! * [`fuzzy`] – fuzzy numbers as α-level interval families, the metric `D`.
//! * [`function`] – fuzzy-valued functions, `D*`, moduli of continuity.
//! * [`operators`] – Bernstein families and the fuzzy lift.
//! * [`summability`] – power-series means with certified truncation.
//! * [`harness`] – classical and summability Korovkin experiments, rate bounds.
//! * [`report`] – CSV/JSON reports.
//! * [`validate`] – randomized invariant checks.

pub mod accum;
pub mod error;
pub mod function;
pub mod fuzzy;
pub mod harness;
pub mod operators;
pub mod report;
pub mod summability;
pub mod validate;

pub use error::{Error, Result};
pub use function::{DomainGrid, FuzzyFunction};
pub use fuzzy::{AlphaGrid, FuzzyNumber, Interval, Side};
pub use harness::{KorovkinReport, RateBundle, Setup};
pub use operators::{Bernstein, FuzzyOperatorFamily, OperatorFamily};
pub use summability::{PowerSeriesMethod, TruncationPolicy};
