//! Log-domain probability arithmetic.
//!
//! [`LogProb`] stores a natural-log probability as a signed fixed-point
//! integer with 64 fractional bits. Sums of fixed-point values are exact and
//! associative, so the probability of an assignment does not depend on the
//! order its events are accumulated in, and incremental updates
//! (`best - old + new`) agree bit-for-bit with a fresh summation. The
//! quantisation error per term is below 2^-65.

use core::fmt;
use core::ops::{Add, AddAssign, Neg, Sub, SubAssign};

const SCALE: f64 = 18_446_744_073_709_551_616.0; // 2^64

/// Natural-log probability in 64.64 fixed point.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LogProb(i128);

impl LogProb {
    /// `ln 1`.
    pub const ONE: LogProb = LogProb(0);

    pub fn from_prob(p: f64) -> Self {
        Self::from_ln(libm::log(p))
    }

    pub fn from_ln(ln: f64) -> Self {
        LogProb(libm::round(ln * SCALE) as i128)
    }

    pub const fn from_raw(raw: i128) -> Self {
        LogProb(raw)
    }

    pub const fn raw(self) -> i128 {
        self.0
    }

    /// Natural logarithm as a float.
    pub fn ln(self) -> f64 {
        self.0 as f64 / SCALE
    }

    pub fn log10(self) -> f64 {
        self.ln() / core::f64::consts::LN_10
    }

    /// Linear-domain probability; underflows to 0 for very small values.
    pub fn prob(self) -> f64 {
        libm::exp(self.ln())
    }
}

impl fmt::Debug for LogProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LogProb({})", self.ln())
    }
}

impl fmt::Display for LogProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.ln(), f)
    }
}

impl Add for LogProb {
    type Output = LogProb;
    fn add(self, rhs: LogProb) -> LogProb {
        LogProb(self.0 + rhs.0)
    }
}

impl Sub for LogProb {
    type Output = LogProb;
    fn sub(self, rhs: LogProb) -> LogProb {
        LogProb(self.0 - rhs.0)
    }
}

impl Neg for LogProb {
    type Output = LogProb;
    fn neg(self) -> LogProb {
        LogProb(-self.0)
    }
}

impl AddAssign for LogProb {
    fn add_assign(&mut self, rhs: LogProb) {
        self.0 += rhs.0;
    }
}

impl SubAssign for LogProb {
    fn sub_assign(&mut self, rhs: LogProb) {
        self.0 -= rhs.0;
    }
}

impl core::iter::Sum for LogProb {
    fn sum<I: Iterator<Item = LogProb>>(iter: I) -> LogProb {
        iter.fold(LogProb::ONE, Add::add)
    }
}

/// Streaming `ln(Σ exp(x))` accumulator.
#[derive(Clone, Copy, Debug)]
pub struct LogSumExp {
    max: f64,
    // Σ exp(x - max)
    scaled: f64,
}

impl Default for LogSumExp {
    fn default() -> Self {
        Self::new()
    }
}

impl LogSumExp {
    pub const fn new() -> Self {
        LogSumExp { max: f64::NEG_INFINITY, scaled: 0.0 }
    }

    pub fn push(&mut self, x: f64) {
        if x == f64::NEG_INFINITY {
            return;
        }
        if x > self.max {
            self.scaled = self.scaled * libm::exp(self.max - x) + 1.0;
            self.max = x;
        } else {
            self.scaled += libm::exp(x - self.max);
        }
    }

    /// Current `ln Σ exp(x)`; `-inf` when nothing was pushed.
    pub fn value(&self) -> f64 {
        if self.scaled == 0.0 {
            f64::NEG_INFINITY
        } else {
            self.max + libm::log(self.scaled)
        }
    }
}

/// `ln Σ exp(x)` over a slice.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let mut acc = LogSumExp::new();
    for &v in values {
        acc.push(v);
    }
    acc.value()
}
