//! Neumaier-compensated accumulation.

use std::ops::AddAssign;

/// Running sum with a separate compensation term (Kahan–Babuška / Neumaier).
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let s = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.comp += (self.sum - s) + value;
        } else {
            self.comp += (value - s) + self.sum;
        }
        self.sum = s;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl AddAssign<f64> for NeumaierSum {
    fn add_assign(&mut self, rhs: f64) {
        self.add(rhs);
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = NeumaierSum::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}
