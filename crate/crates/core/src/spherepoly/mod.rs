//! Homogeneous polynomials on the unit sphere: exact L^{2k} moments and the
//! sup-norm sandwich they certify.

mod moments;
mod poly;
mod system;

pub use moments::{
    choose_k, fewnomial_sup, fewnomial_sup_budgeted, integrate_on_sphere, moment_2k, moment_2k_budgeted, norm_2k,
    sample_lower_bound, sphere_factor, sup_bounds, sup_bounds_budgeted, DEFAULT_TERM_BUDGET,
};
pub use poly::SparsePoly;
pub use system::{system_reduce, SystemReport, Verdict, DEFAULT_DELTA};
