//! Real-solvability screening for systems of homogeneous equations.
//!
//! With q = sum p_i^2 and gamma > max q on the sphere, the form
//! p = gamma |x|^{2d} - q satisfies max |p| = gamma - min q, so a certified
//! upper bound on max |p| well below gamma certifies min q > 0, i.e. that the
//! system has no real solution x != 0.

use num_traits::{One, Zero};

use super::moments::sup_bounds_budgeted;
use super::poly::SparsePoly;
use crate::bounds::Interval;
use crate::error::{Error, Result};
use crate::exactnum::Rational;

pub const DEFAULT_DELTA: f64 = 0.01;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    PossiblySolvable,
    CertifiedGap,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::PossiblySolvable => "possibly solvable",
            Verdict::CertifiedGap => "certified gap",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SystemReport {
    pub gamma: f64,
    pub gamma_exact: Rational,
    pub q: SparsePoly,
    pub q_bounds: Interval,
    pub p: SparsePoly,
    pub p_bounds: Interval,
    pub verdict: Verdict,
    /// Certified lower bound on min q over the sphere, only for a gap verdict.
    pub min_q_lower_bound: Option<f64>,
}

pub fn system_reduce(system: &[SparsePoly], k: u32, delta: f64, budget: u64) -> Result<SystemReport> {
    let first = system
        .first()
        .ok_or_else(|| Error::Invalid("empty polynomial system".into()))?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Invalid(format!("delta must lie in (0, 1), got {delta}")));
    }
    let (n, d) = (first.n(), first.degree());
    for (i, p) in system.iter().enumerate() {
        if p.n() != n || p.degree() != d {
            return Err(Error::Invalid(format!(
                "equation {i} has (n, d) = ({}, {}), expected ({n}, {d})",
                p.n(),
                p.degree()
            )));
        }
    }

    let mut q = SparsePoly::zero(n, 2 * d)?;
    for p in system {
        q = q.add(&p.pow_collect(2))?;
    }
    let q_bounds = sup_bounds_budgeted(&q, k, budget)?;

    let delta_exact = Rational::from_float(delta).expect("finite delta");
    let gamma = (1.0 + delta) * q_bounds.upper;
    let gamma_exact = Rational::from_float(gamma).ok_or_else(|| Error::Invalid("non-finite gamma".into()))?;
    let p = SparsePoly::squared_norm_power(n, d)?.scale(&gamma_exact).sub(&q)?;
    let p_bounds = sup_bounds_budgeted(&p, k, budget)?;

    // upper < gamma (1 - delta), compared at the 2k-th power
    let threshold = &gamma_exact * (Rational::one() - &delta_exact);
    let gap = !threshold.is_zero() && p_bounds.upper_exact < threshold.pow(2 * k as i32);
    let (verdict, min_q_lower_bound) = if gap {
        // widen the float root by its error allowance so the bound stays certified
        let upper = p_bounds.upper * (1.0 + 4.0 * f64::EPSILON);
        (Verdict::CertifiedGap, Some(gamma - upper))
    } else {
        (Verdict::PossiblySolvable, None)
    };

    Ok(SystemReport {
        gamma,
        gamma_exact,
        q,
        q_bounds,
        p,
        p_bounds,
        verdict,
        min_q_lower_bound,
    })
}
