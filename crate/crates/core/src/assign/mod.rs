//! The d-dimensional assignment objective f(g) = <B, gA> on the symmetric group.

mod greedy;
mod moments;
mod tensor;

pub use greedy::{
    brute_max, brute_max_capped, greedy_extract, greedy_extract_budgeted, BruteMax, GreedyResult, DEFAULT_BRUTE_CAP,
};
pub use moments::{
    assignment_factor, coset_moment, coset_moment_budgeted, moment_2k, moment_2k_budgeted, sup_bounds,
    sup_bounds_budgeted, visit_count, DEFAULT_VISIT_BUDGET,
};
pub use tensor::{apply_perm, matrix_element, DenseTensor, PartialAssignment, Permutation};
