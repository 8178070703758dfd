use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::Result;
use crate::exactnum::{root_2k, Rational};

/// Certified two-sided estimate `lower <= max |f| <= upper` obtained from an
/// exact 2k-th moment and a factor F with `max |f|^{2k} <= F * moment`.
#[derive(Clone, Debug, PartialEq)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
    /// The exact moment, i.e. `lower^{2k}`.
    pub lower_exact: Rational,
    /// `factor * lower_exact`, i.e. `upper^{2k}`.
    pub upper_exact: Rational,
    pub factor: BigInt,
    pub k_used: u32,
    /// Set when the moment vanishes, so f is identically zero.
    pub degenerate: bool,
}

impl Interval {
    pub fn from_moment(moment: Rational, factor: BigInt, k: u32) -> Result<Self> {
        let upper_exact = &moment * Rational::from_integer(factor.clone());
        let lower = root_2k(&moment, k)?;
        let upper = root_2k(&upper_exact, k)?.max(lower);
        Ok(Interval {
            lower,
            upper,
            degenerate: moment.is_zero(),
            lower_exact: moment,
            upper_exact,
            factor,
            k_used: k,
        })
    }

    /// Exact membership of `|value|` in the interval, compared at the 2k-th power.
    pub fn contains(&self, value: &Rational) -> bool {
        let p = value.abs().pow(2 * self.k_used as i32);
        self.lower_exact <= p && p <= self.upper_exact
    }

    /// `upper / lower`, or 1 for the degenerate interval.
    pub fn ratio(&self) -> f64 {
        if self.degenerate {
            1.0
        } else {
            self.upper / self.lower
        }
    }
}
