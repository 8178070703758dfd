use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::moments::{pattern_sums, prepare, to_f64_abs, DEFAULT_VISIT_BUDGET};
use super::tensor::{check_same_shape, DenseTensor, PartialAssignment, Permutation};
use crate::error::{Error, Result};
use crate::exactnum::Rational;

/// Largest n for which exhaustive search over S_n is allowed by default.
pub const DEFAULT_BRUTE_CAP: usize = 9;

#[derive(Clone, Debug, PartialEq)]
pub struct GreedyResult {
    pub permutation: Permutation,
    /// f(g), exactly.
    pub value: Rational,
    pub abs_value: f64,
    /// Mean of f^{2k} over the chosen coset after each step; entry 0 is the
    /// full-group moment, entry t the coset fixing g(0..t).
    pub coset_moments: Vec<Rational>,
}

/// Fixes g(0), g(1), ... in turn, each time moving into the coset with the
/// largest mean of f^{2k} (smallest image on ties). The mean never drops, so
/// |f(g)|^{2k} ends at or above the group moment.
pub fn greedy_extract(a: &DenseTensor, b: &DenseTensor, k: u32) -> Result<GreedyResult> {
    greedy_extract_budgeted(a, b, k, DEFAULT_VISIT_BUDGET)
}

pub fn greedy_extract_budgeted(a: &DenseTensor, b: &DenseTensor, k: u32, budget: u64) -> Result<GreedyResult> {
    let prep = prepare(a, b, k, budget)?;
    let n = a.n();
    let mut prefix = PartialAssignment::empty(n);
    let mut current = prep.coset(&prefix);
    let mut coset_moments = vec![current.clone()];

    for position in 0..n {
        let candidates = prefix.unused_images();
        if candidates.len() == 1 {
            // a single child coset has the parent's mean
            prefix.push(position, candidates[0])?;
            coset_moments.push(current.clone());
            continue;
        }
        let mut domain = prefix.clone();
        domain.push(position, candidates[0])?;
        // the A side only sees which positions are fixed, not their images
        let x = pattern_sums(&prep.a, &prep.layout, &prep.position_labels(&domain));
        let mut best: Option<(usize, Rational)> = None;
        for &image in &candidates {
            let child = prefix.with(position, image)?;
            let value = if x.is_zero() {
                Rational::zero()
            } else {
                prep.coset_with_x(&x, &child)
            };
            if best.as_ref().is_none_or(|(_, v)| value > *v) {
                best = Some((image, value));
            }
        }
        let (image, value) = best.expect("at least two candidates");
        prefix.push(position, image)?;
        current = value;
        coset_moments.push(current.clone());
    }

    let permutation = prefix.to_permutation().expect("every position fixed");
    let value = super::tensor::matrix_element(a, b, &permutation)?;
    Ok(GreedyResult {
        abs_value: to_f64_abs(&value),
        permutation,
        value,
        coset_moments,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BruteMax {
    pub permutation: Permutation,
    /// f(g) at the maximizer.
    pub value: Rational,
    /// max |f|.
    pub max_abs: Rational,
}

/// Exhaustive argmax of |f(g)| over S_n; the lexicographically smallest image
/// list wins ties.
pub fn brute_max(a: &DenseTensor, b: &DenseTensor) -> Result<BruteMax> {
    brute_max_capped(a, b, DEFAULT_BRUTE_CAP)
}

pub fn brute_max_capped(a: &DenseTensor, b: &DenseTensor, cap: usize) -> Result<BruteMax> {
    check_same_shape(a, b)?;
    let n = a.n();
    if n > cap {
        return Err(Error::Cap { n, cap });
    }
    let (ai, bi) = (a.integer_form(), b.integer_form());
    let support: Vec<(Vec<usize>, &BigInt)> = ai
        .entries
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(off, v)| (a.index_of(off), v))
        .collect();

    let mut best: Option<(Permutation, BigInt)> = None;
    for g in Permutation::all(n) {
        let mut f = BigInt::zero();
        for (index, v) in &support {
            let moved = index.iter().fold(0, |acc, &i| acc * n + g.apply(i));
            let w = &bi.entries[moved];
            if !w.is_zero() {
                f += *v * w;
            }
        }
        if best.as_ref().is_none_or(|(_, cur)| f.abs() > cur.abs()) {
            best = Some((g, f));
        }
    }
    let (permutation, f) = best.expect("S_n is non-empty");
    let value = Rational::new(f, &ai.den * &bi.den);
    Ok(BruteMax {
        permutation,
        max_abs: value.abs(),
        value,
    })
}
