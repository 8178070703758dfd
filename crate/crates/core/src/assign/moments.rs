//! Exact averages of f(g)^{2k} for f(g) = <B, gA>, over S_n or over a coset
//! of permutations with some images fixed.
//!
//! f(g)^{2k} = <Y, gX> for the virtual tensor powers X = A^{⊗2k},
//! Y = B^{⊗2k} of order l = 2kd, whose entries are products of 2k entries of
//! A (resp. B) and are never stored. Index sequences of length l fall into
//! S_n-orbits according to their equality pattern, a set partition of the l
//! positions with r <= n blocks; the orbit of a sequence with r blocks has
//! n!/(n-r)! elements. Averaging over the group therefore collapses to
//!
//!   sum over partitions  S_X(type) * S_Y(type) * (n - r)! / n!,
//!
//! with S_X(type) the sum of x_J over all sequences J of that exact type.
//!
//! Over a coset {g : g(p_i) = q_i} the orbits are finer: a block whose value
//! is a fixed position p_i must map to q_i, and only the remaining "free"
//! blocks are spread uniformly over the unfixed images. Types are then
//! refined by which blocks carry which fixed pair.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::tensor::{check_same_shape, DenseTensor, IntTensor, PartialAssignment};
use crate::bounds::Interval;
use crate::error::{Error, Result};
use crate::exactnum::{binomial, falling_factorial, Rational};
use crate::partition::RestrictedGrowth;

/// Largest number of length-2kd index sequences one side of a moment may visit.
pub const DEFAULT_VISIT_BUDGET: u64 = 100_000_000;

/// The index-sequence layout shared by both sides of one moment computation.
pub(crate) struct Layout {
    n: usize,
    d: usize,
    k: u32,
    /// Every restricted growth string of length 2kd with at most n blocks.
    types: Vec<Vec<u32>>,
    /// For each type and each partition block c, the factors of the tensor
    /// power whose indices are fully known once blocks 0..=c have values.
    ready: Vec<Vec<Vec<usize>>>,
}

impl Layout {
    pub(crate) fn new(n: usize, d: usize, k: u32, budget: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::Invalid("k must be at least 1".into()));
        }
        let l = 2 * k as usize * d;
        let visits = (n as u128).checked_pow(l as u32).unwrap_or(u128::MAX);
        if visits > u128::from(budget) {
            return Err(Error::VisitBudget { visits, budget });
        }
        let types: Vec<Vec<u32>> = RestrictedGrowth::new(l, n).collect();
        let ready = types
            .iter()
            .map(|rgs| {
                let blocks = rgs.iter().max().map_or(0, |&m| m as usize + 1);
                let mut ready = vec![Vec::new(); blocks];
                for (factor, chunk) in rgs.chunks(d).enumerate() {
                    let last = *chunk.iter().max().expect("d >= 1") as usize;
                    ready[last].push(factor);
                }
                ready
            })
            .collect();
        Ok(Layout { n, d, k, types, ready })
    }
}

/// Per type, the sums of x_J keyed by the labelling of the type's blocks.
///
/// A labelling code lists, block by block, 0 for a free block or 1 + i for a
/// block whose value is the i-th fixed value, in base `labels + 1`.
pub(crate) struct PatternSums {
    per_type: Vec<HashMap<u128, BigInt>>,
    base: u128,
}

impl PatternSums {
    pub(crate) fn is_zero(&self) -> bool {
        self.per_type.iter().all(HashMap::is_empty)
    }

    fn labelled_blocks(&self, mut code: u128) -> usize {
        let mut count = 0;
        while code > 0 {
            if !code.is_multiple_of(self.base) {
                count += 1;
            }
            code /= self.base;
        }
        count
    }
}

/// Sums x_J over index sequences, grouped by type and labelling, where
/// `label_of[v]` names the fixed pair that value `v` belongs to, if any.
pub(crate) fn pattern_sums(t: &IntTensor, layout: &Layout, label_of: &[Option<usize>]) -> PatternSums {
    let base = label_of.iter().flatten().count() as u128 + 1;
    let per_type = layout
        .types
        .iter()
        .zip(&layout.ready)
        .map(|(rgs, ready)| {
            let mut out = HashMap::new();
            let mut walk = Walk {
                t,
                rgs,
                ready,
                d: layout.d,
                label_of,
                base,
                values: vec![0; ready.len()],
                used: vec![false; layout.n],
                out: &mut out,
            };
            walk.go(0, &num_traits::One::one(), 0);
            out
        })
        .collect();
    PatternSums { per_type, base }
}

struct Walk<'a> {
    t: &'a IntTensor,
    rgs: &'a [u32],
    ready: &'a [Vec<usize>],
    d: usize,
    label_of: &'a [Option<usize>],
    base: u128,
    values: Vec<usize>,
    used: Vec<bool>,
    out: &'a mut HashMap<u128, BigInt>,
}

impl Walk<'_> {
    fn factor_offset(&self, factor: usize) -> usize {
        self.rgs[factor * self.d..(factor + 1) * self.d]
            .iter()
            .fold(0, |acc, &b| acc * self.t.n + self.values[b as usize])
    }

    fn go(&mut self, block: usize, prod: &BigInt, code: u128) {
        if block == self.values.len() {
            *self.out.entry(code).or_insert_with(BigInt::zero) += prod;
            return;
        }
        for v in 0..self.t.n {
            if self.used[v] {
                continue;
            }
            self.values[block] = v;
            let next = if self.ready[block].is_empty() {
                None
            } else {
                let mut p = prod.clone();
                for &f in &self.ready[block] {
                    let e = &self.t.entries[self.factor_offset(f)];
                    if e.is_zero() {
                        p.set_zero();
                        break;
                    }
                    p *= e;
                }
                if p.is_zero() {
                    continue;
                }
                Some(p)
            };
            let digit = self.label_of[v].map_or(0, |i| i as u128 + 1);
            self.used[v] = true;
            self.go(block + 1, next.as_ref().unwrap_or(prod), code * self.base + digit);
            self.used[v] = false;
        }
    }
}

/// Pairs up the two sides: each matching (type, labelling) contributes
/// S_X S_Y / (pool)_s, where s is the number of free blocks and `pool` the
/// number of unfixed images.
pub(crate) fn combine(layout: &Layout, x: &PatternSums, y: &PatternSums, pool: usize, den: &BigInt) -> Rational {
    let mut by_free: Vec<BigInt> = Vec::new();
    for ((rgs_x, rgs_y), rgs) in x.per_type.iter().zip(&y.per_type).zip(&layout.types) {
        let blocks = rgs.iter().max().map_or(0, |&m| m as usize + 1);
        for (code, sx) in rgs_x {
            if let Some(sy) = rgs_y.get(code) {
                let free = blocks - x.labelled_blocks(*code);
                if by_free.len() <= free {
                    by_free.resize(free + 1, BigInt::zero());
                }
                by_free[free] += sx * sy;
            }
        }
    }
    let total: Rational = by_free
        .into_iter()
        .enumerate()
        .filter(|(_, s)| !s.is_zero())
        .map(|(free, s)| {
            let orbit = falling_factorial(pool as u64, free as u64).expect("free blocks fit in the pool");
            Rational::new(s, orbit)
        })
        .sum();
    let scale = den.pow(2 * layout.k);
    total / Rational::from_integer(scale)
}

pub(crate) struct Prepared {
    pub a: IntTensor,
    pub b: IntTensor,
    pub layout: Layout,
    pub den: BigInt,
}

pub(crate) fn prepare(a: &DenseTensor, b: &DenseTensor, k: u32, budget: u64) -> Result<Prepared> {
    check_same_shape(a, b)?;
    let layout = Layout::new(a.n(), a.order(), k, budget)?;
    let (a, b) = (a.integer_form(), b.integer_form());
    let den = &a.den * &b.den;
    Ok(Prepared { a, b, layout, den })
}

impl Prepared {
    /// Value labels for the A side: fixed positions carry their pair index.
    pub(crate) fn position_labels(&self, prefix: &PartialAssignment) -> Vec<Option<usize>> {
        let mut labels = vec![None; self.layout.n];
        for (idx, &(pos, _)) in prefix.pairs().iter().enumerate() {
            labels[pos] = Some(idx);
        }
        labels
    }

    /// Value labels for the B side: fixed images carry their pair index.
    pub(crate) fn image_labels(&self, prefix: &PartialAssignment) -> Vec<Option<usize>> {
        let mut labels = vec![None; self.layout.n];
        for (idx, &(_, img)) in prefix.pairs().iter().enumerate() {
            labels[img] = Some(idx);
        }
        labels
    }

    pub(crate) fn coset(&self, prefix: &PartialAssignment) -> Rational {
        let x = pattern_sums(&self.a, &self.layout, &self.position_labels(prefix));
        if x.is_zero() {
            return Rational::zero();
        }
        self.coset_with_x(&x, prefix)
    }

    pub(crate) fn coset_with_x(&self, x: &PatternSums, prefix: &PartialAssignment) -> Rational {
        let y = pattern_sums(&self.b, &self.layout, &self.image_labels(prefix));
        combine(&self.layout, x, &y, self.layout.n - prefix.len(), &self.den)
    }
}

/// (1/n!) sum over S_n of f(g)^{2k}, exactly.
pub fn moment_2k(a: &DenseTensor, b: &DenseTensor, k: u32) -> Result<Rational> {
    moment_2k_budgeted(a, b, k, DEFAULT_VISIT_BUDGET)
}

pub fn moment_2k_budgeted(a: &DenseTensor, b: &DenseTensor, k: u32, budget: u64) -> Result<Rational> {
    let prep = prepare(a, b, k, budget)?;
    Ok(prep.coset(&PartialAssignment::empty(a.n())))
}

/// Mean of f(g)^{2k} over the permutations extending `prefix`.
pub fn coset_moment(a: &DenseTensor, b: &DenseTensor, k: u32, prefix: &PartialAssignment) -> Result<Rational> {
    coset_moment_budgeted(a, b, k, prefix, DEFAULT_VISIT_BUDGET)
}

pub fn coset_moment_budgeted(
    a: &DenseTensor,
    b: &DenseTensor,
    k: u32,
    prefix: &PartialAssignment,
    budget: u64,
) -> Result<Rational> {
    let prep = prepare(a, b, k, budget)?;
    if prefix.n() != a.n() {
        return Err(Error::Shape(format!(
            "partial assignment on {} points, tensors have n = {}",
            prefix.n(),
            a.n()
        )));
    }
    Ok(prep.coset(prefix))
}

/// The factor F with max |f|^{2k} <= F * moment: sum_{j=1}^{k} C(n^d, j) when
/// one side is 0/1-valued, C(n^d + k - 1, k) otherwise.
pub fn assignment_factor(n: usize, d: usize, k: u32, zero_one: bool) -> BigInt {
    let dim = (n as u64).pow(d as u32);
    let k = u64::from(k);
    if zero_one {
        (1..=k).map(|j| binomial(dim, j)).sum()
    } else {
        binomial(dim + k - 1, k)
    }
}

pub fn sup_bounds(a: &DenseTensor, b: &DenseTensor, k: u32) -> Result<Interval> {
    sup_bounds_budgeted(a, b, k, DEFAULT_VISIT_BUDGET)
}

pub fn sup_bounds_budgeted(a: &DenseTensor, b: &DenseTensor, k: u32, budget: u64) -> Result<Interval> {
    let moment = moment_2k_budgeted(a, b, k, budget)?;
    let factor = assignment_factor(a.n(), a.order(), k, a.is_zero_one() || b.is_zero_one());
    Interval::from_moment(moment, factor, k)
}

/// Number of index sequences one side of a moment visits, n^{2kd}.
pub fn visit_count(n: usize, d: usize, k: u32) -> u128 {
    (n as u128).checked_pow(2 * k * d as u32).unwrap_or(u128::MAX)
}

pub(crate) fn to_f64_abs(v: &Rational) -> f64 {
    v.to_f64().map_or(f64::NAN, f64::abs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assign::tensor::{matrix_element, Permutation};
    use crate::exactnum::{int, ratio};

    fn brute_average(a: &DenseTensor, b: &DenseTensor, k: u32, prefix: &PartialAssignment) -> Rational {
        let vals: Vec<Rational> = Permutation::all(a.n())
            .filter(|g| prefix.contains(g))
            .map(|g| matrix_element(a, b, &g).unwrap().pow(2 * k as i32))
            .collect();
        let count = vals.len() as i64;
        vals.into_iter().sum::<Rational>() / int(count)
    }

    #[test]
    fn moment_examples() {
        let e1 = DenseTensor::from_integers(2, 1, &[1, 0]).unwrap();
        assert_eq!(moment_2k(&e1, &e1, 1).unwrap(), ratio(1, 2));
        let z = DenseTensor::zeros(2, 1).unwrap();
        assert_eq!(moment_2k(&z, &e1, 3).unwrap(), int(0));
        let ones = DenseTensor::from_integers(3, 1, &[1, 1, 1]).unwrap();
        assert_eq!(moment_2k(&ones, &ones, 1).unwrap(), int(9));
    }

    #[test]
    fn moment_matches_enumeration_order_two() {
        let a = DenseTensor::from_entries(
            3,
            2,
            vec![
                int(1),
                ratio(-1, 2),
                int(0),
                int(2),
                int(0),
                int(3),
                ratio(1, 3),
                int(0),
                int(-1),
            ],
        )
        .unwrap();
        let b = DenseTensor::from_integers(3, 2, &[0, 1, 1, 2, -1, 0, 0, 3, 1]).unwrap();
        let empty = PartialAssignment::empty(3);
        for k in 1..=2 {
            assert_eq!(moment_2k(&a, &b, k).unwrap(), brute_average(&a, &b, k, &empty));
        }
    }

    #[test]
    fn coset_examples() {
        let e1 = DenseTensor::from_integers(2, 1, &[1, 0]).unwrap();
        let fix = |j| PartialAssignment::new(2, vec![(0, j)]).unwrap();
        assert_eq!(coset_moment(&e1, &e1, 1, &fix(0)).unwrap(), int(1));
        assert_eq!(coset_moment(&e1, &e1, 1, &fix(1)).unwrap(), int(0));
        assert_eq!(
            coset_moment(&e1, &e1, 1, &PartialAssignment::empty(2)).unwrap(),
            ratio(1, 2)
        );
    }

    #[test]
    fn coset_matches_enumeration() {
        let a = DenseTensor::from_integers(4, 2, &[1, 0, 2, -1, 0, 0, 1, 3, 2, 1, 0, 0, -2, 0, 1, 1]).unwrap();
        let b = DenseTensor::from_integers(4, 2, &[0, 1, 1, 0, 2, 0, 0, 1, 1, -1, 0, 2, 0, 0, 3, 1]).unwrap();
        let prefixes = [
            vec![],
            vec![(0, 2)],
            vec![(1, 0)],
            vec![(3, 3), (0, 1)],
            vec![(0, 1), (1, 2), (2, 3)],
            vec![(0, 1), (1, 2), (2, 3), (3, 0)],
        ];
        for pairs in prefixes {
            let prefix = PartialAssignment::new(4, pairs).unwrap();
            for k in 1..=2 {
                assert_eq!(
                    coset_moment(&a, &b, k, &prefix).unwrap(),
                    brute_average(&a, &b, k, &prefix),
                    "prefix {prefix:?}, k = {k}"
                );
            }
        }
    }

    #[test]
    fn full_prefix_is_a_point_value() {
        let a = DenseTensor::from_integers(3, 1, &[2, -1, 5]).unwrap();
        let b = DenseTensor::from_integers(3, 1, &[1, 4, -3]).unwrap();
        for g in Permutation::all(3) {
            let prefix = PartialAssignment::prefix_of(&g, 3);
            let f = matrix_element(&a, &b, &g).unwrap();
            assert_eq!(coset_moment(&a, &b, 2, &prefix).unwrap(), f.pow(4));
        }
    }

    #[test]
    fn sup_bound_examples() {
        let e1 = DenseTensor::from_integers(2, 1, &[1, 0]).unwrap();
        let iv = sup_bounds(&e1, &e1, 1).unwrap();
        assert!((iv.lower - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(iv.factor, BigInt::from(2));
        assert_eq!(iv.upper, 1.0);
        assert!(iv.contains(&int(1)));

        for n in 1..5 {
            for d in 1..3 {
                assert_eq!(assignment_factor(n, d, 1, true), assignment_factor(n, d, 1, false));
            }
        }

        let ones = DenseTensor::from_integers(2, 2, &[1, 1, 1, 1]).unwrap();
        let iv = sup_bounds(&ones, &ones, 2).unwrap();
        assert_eq!(iv.lower_exact, int(256));
        assert!(iv.contains(&int(4)));
    }

    #[test]
    fn shape_and_budget_errors() {
        let a = DenseTensor::from_integers(2, 1, &[1, 0]).unwrap();
        let b = DenseTensor::from_integers(3, 1, &[1, 0, 0]).unwrap();
        assert!(matches!(moment_2k(&a, &b, 1), Err(Error::Shape(_))));
        let big = DenseTensor::zeros(10, 2).unwrap();
        assert!(matches!(
            moment_2k_budgeted(&big, &big, 2, 1000),
            Err(Error::VisitBudget { .. })
        ));
        assert!(moment_2k(&a, &a, 0).is_err());
        let wrong = PartialAssignment::empty(3);
        assert!(coset_moment(&a, &a, 1, &wrong).is_err());
    }
}
