//! Compensated floating-point accumulation.
//!
//! National aggregation sums hundreds of thousands of cell values per hour;
//! a plain running sum would make the result depend on accumulation order.
//! The accumulator here is the Kahan–Babuška (Neumaier) variant, which also
//! handles addends larger than the running sum.

use crate::float::Float;

/// Compensated accumulator for one scalar sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum<F> {
    sum: F,
    compensation: F,
}

impl<F: Float> KahanSum<F> {
    pub fn new() -> Self {
        Self {
            sum: F::zero(),
            compensation: F::zero(),
        }
    }

    #[inline]
    pub fn add(&mut self, value: F) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation = self.compensation + ((self.sum - t) + value);
        } else {
            self.compensation = self.compensation + ((value - t) + self.sum);
        }
        self.sum = t;
    }

    /// Current compensated total.
    #[inline]
    pub fn value(&self) -> F {
        self.sum + self.compensation
    }

    /// Sum an iterator with compensation.
    pub fn sum_iter<I: IntoIterator<Item = F>>(iter: I) -> F {
        let mut acc = Self::new();
        for v in iter {
            acc.add(v);
        }
        acc.value()
    }
}
