//! Exhaustive checks of the L^{2k} / L^∞ sandwich for matrix elements of the
//! permutation representation of S_n on R^n.
//!
//! For f(g) = <ell, gv>, with D_k the dimension of the span of the orbit of
//! v^{⊗k}:
//!
//!   ||f||_{2k}^{2k} <= ||f||_∞^{2k} <= D_k ||f||_{2k}^{2k}
//!
//! and D_k <= C(n + k - 1, k). Every comparison here is exact.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{binomial, common_denominator, factorial, scaled_integer, Rational};

/// Largest n for which orbits are enumerated by default.
pub const DEFAULT_ORBIT_CAP: usize = 7;

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::Cap { n, cap });
    }
    if n == 0 {
        return Err(Error::Invalid("vector must have at least one coordinate".into()));
    }
    Ok(())
}

/// All images gv for g in S_n, where (gv)_{g(i)} = v_i, without repeats.
fn orbit<T: Clone + Ord>(v: &[T]) -> BTreeSet<Vec<T>> {
    crate::assign::Permutation::all(v.len())
        .map(|g| {
            let mut w = v.to_vec();
            for (i, x) in v.iter().enumerate() {
                w[g.apply(i)] = x.clone();
            }
            w
        })
        .collect()
}

/// Sorted k-multisets of {0..n}; equal columns of the flattened tensor power
/// belong to the same multiset.
fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i, n, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Rank over Q of integer rows by fraction-free elimination, stopping early
/// once the rank equals the column count.
fn integer_rank(rows: impl IntoIterator<Item = Vec<BigInt>>, columns: usize) -> usize {
    let mut basis: Vec<(usize, Vec<BigInt>)> = Vec::new();
    for mut row in rows {
        for (pivot, b) in &basis {
            if row[*pivot].is_zero() {
                continue;
            }
            let (scale_row, scale_b) = (b[*pivot].clone(), row[*pivot].clone());
            for (r, bv) in row.iter_mut().zip(b) {
                *r = &*r * &scale_row - &scale_b * bv;
            }
            let content = row.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
            if content > BigInt::one() {
                row.iter_mut().for_each(|v| *v /= &content);
            }
        }
        if let Some(pivot) = row.iter().position(|v| !v.is_zero()) {
            basis.push((pivot, row));
            if basis.len() == columns {
                break;
            }
        }
    }
    basis.len()
}

/// D_k = dim span { (gv)^{⊗k} : g in S_n }, exactly.
pub fn orbit_span_dim(v: &[Rational], k: u32) -> Result<usize> {
    orbit_span_dim_capped(v, k, DEFAULT_ORBIT_CAP)
}

pub fn orbit_span_dim_capped(v: &[Rational], k: u32, cap: usize) -> Result<usize> {
    check_cap(v.len(), cap)?;
    if k == 0 {
        return Err(Error::Invalid("k must be at least 1".into()));
    }
    if v.iter().all(Zero::is_zero) {
        return Err(Error::Invalid("orbit span of the zero vector".into()));
    }
    let den = common_denominator(v);
    let scaled: Vec<BigInt> = v.iter().map(|x| scaled_integer(x, &den)).collect();
    let columns = multisets(v.len(), k as usize);
    let rows = orbit(&scaled).into_iter().map(|w| {
        columns
            .iter()
            .map(|idx| idx.iter().fold(BigInt::one(), |acc, &i| acc * &w[i]))
            .collect::<Vec<_>>()
    });
    Ok(integer_rank(rows, columns.len()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct InequalityCheck {
    pub inequality: String,
    pub lhs: Rational,
    pub rhs: Rational,
    pub holds: bool,
    pub tight: bool,
}

impl InequalityCheck {
    fn new(inequality: &str, lhs: Rational, rhs: Rational) -> Self {
        InequalityCheck {
            inequality: inequality.to_string(),
            holds: lhs <= rhs,
            tight: lhs == rhs,
            lhs,
            rhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SandwichReport {
    pub n: usize,
    pub k: u32,
    /// max |f| over S_n.
    pub sup_abs: Rational,
    /// Mean of f^{2k} over S_n.
    pub moment_2k: Rational,
    /// Mean of f^2 over S_n.
    pub moment_2: Rational,
    pub orbit_span_dim: usize,
    pub checks: Vec<InequalityCheck>,
}

impl SandwichReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// f(g) = <ell, gv> for every g in S_n, in lexicographic order of g.
pub fn orbit_values(v: &[Rational], ell: &[Rational]) -> Result<Vec<Rational>> {
    if v.len() != ell.len() {
        return Err(Error::Shape(format!("vectors of length {} and {}", v.len(), ell.len())));
    }
    Ok(crate::assign::Permutation::all(v.len())
        .map(|g| v.iter().enumerate().map(|(i, x)| x * &ell[g.apply(i)]).sum())
        .collect())
}

/// Checks, exactly and at the 2k-th power:
/// moment <= sup, sup <= D_k^{1/2k} moment, sup <= C(n+k-1,k)^{1/2k} moment,
/// and the k = 1 bound sup <= sqrt(n) ||f||_2, plus D_k <= C(n+k-1,k).
pub fn verify_sandwich(v: &[Rational], ell: &[Rational], k: u32) -> Result<SandwichReport> {
    verify_sandwich_capped(v, ell, k, DEFAULT_ORBIT_CAP)
}

pub fn verify_sandwich_capped(v: &[Rational], ell: &[Rational], k: u32, cap: usize) -> Result<SandwichReport> {
    check_cap(v.len(), cap)?;
    let n = v.len();
    let values = orbit_values(v, ell)?;
    let order = Rational::from_integer(factorial(n as u64));
    let mean_power = |p: i32| values.iter().map(|f| f.pow(p)).sum::<Rational>() / &order;
    let moment_2k = mean_power(2 * k as i32);
    let moment_2 = mean_power(2);
    let sup_abs = values.iter().map(Signed::abs).max().expect("S_n is non-empty");
    let dk = orbit_span_dim_capped(v, k, cap)?;
    let sym = Rational::from_integer(binomial((n + k as usize - 1) as u64, u64::from(k)));
    let sup_2k = sup_abs.pow(2 * k as i32);
    let int = |x: usize| Rational::from_integer(BigInt::from(x));

    let checks = vec![
        InequalityCheck::new("moment_2k <= sup^2k", moment_2k.clone(), sup_2k.clone()),
        InequalityCheck::new("sup^2k <= D_k * moment_2k", sup_2k.clone(), int(dk) * &moment_2k),
        InequalityCheck::new("sup^2k <= C(n+k-1,k) * moment_2k", sup_2k, &sym * &moment_2k),
        InequalityCheck::new("sup^2 <= n * moment_2", sup_abs.pow(2), int(n) * &moment_2),
        InequalityCheck::new("D_k <= C(n+k-1,k)", int(dk), sym),
    ];
    Ok(SandwichReport {
        n,
        k,
        sup_abs,
        moment_2k,
        moment_2,
        orbit_span_dim: dk,
        checks,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct FactorCheck {
    pub dim: u64,
    /// C(dim + k0 - 1, k0)^{1/(2 k0)}.
    pub factor: f64,
    /// eps sqrt(dim).
    pub limit: f64,
    /// Exact: C(dim + k0 - 1, k0) <= eps^{2 k0} dim^{k0}.
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FactorReport {
    pub eps: f64,
    pub k0: u32,
    pub checks: Vec<FactorCheck>,
}

impl FactorReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

fn eps_exact(eps: f64) -> Result<Rational> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::Invalid(format!("eps must be positive and finite, got {eps}")));
    }
    Ok(Rational::from_float(eps).expect("finite"))
}

/// Smallest k with (k!)^{1/k} > 2 / eps^2, i.e. k! eps^{2k} > 2^k.
///
/// (k!)^{1/k} increases with k, so every larger k qualifies too, and for
/// dim >= k the factor C(dim + k - 1, k)^{1/(2k)} is then below eps sqrt(dim).
pub fn k_zero(eps: f64) -> Result<u32> {
    let e2 = eps_exact(eps)?.pow(2);
    let two = Rational::from_integer(BigInt::from(2));
    let mut k = 1u32;
    let mut fact = Rational::one();
    loop {
        fact *= Rational::from_integer(BigInt::from(k));
        if &fact * e2.pow(k as i32) > two.pow(k as i32) {
            return Ok(k);
        }
        k = k
            .checked_add(1)
            .ok_or_else(|| Error::Invalid("no admissible k below u32::MAX".into()))?;
    }
}

/// Finds k0 for `eps` and checks the factor bound at dim = k0, 2 k0, 10 k0
/// and at every entry of `extra_dims` that is at least k0.
pub fn factor_check(eps: f64, extra_dims: &[u64]) -> Result<FactorReport> {
    let k0 = k_zero(eps)?;
    let e = eps_exact(eps)?;
    let base = u64::from(k0);
    let mut dims = vec![base, 2 * base, 10 * base];
    for &d in extra_dims {
        if d >= base && !dims.contains(&d) {
            dims.push(d);
        }
    }
    let checks = dims
        .into_iter()
        .map(|dim| {
            let lhs = Rational::from_integer(binomial(dim + base - 1, base));
            let rhs = e.pow(2 * k0 as i32) * Rational::from_integer(BigInt::from(dim).pow(k0));
            FactorCheck {
                dim,
                factor: crate::exactnum::bound_factor(dim, k0),
                limit: eps * (dim as f64).sqrt(),
                holds: lhs <= rhs,
            }
        })
        .collect();
    Ok(FactorReport { eps, k0, checks })
}

/// `count` seeded pairs (v, ell) of nonzero rational vectors of length n,
/// entries p/q with |p| <= 9 and 1 <= q <= 4.
pub fn random_pairs(n: usize, count: usize, seed: u64) -> Vec<(Vec<Rational>, Vec<Rational>)> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let vector = |rng: &mut rand_chacha::ChaCha8Rng| loop {
        let v: Vec<Rational> = (0..n)
            .map(|_| Rational::new(rng.random_range(-9i64..=9).into(), rng.random_range(1i64..=4).into()))
            .collect();
        if n == 0 || v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    };
    (0..count).map(|_| (vector(&mut rng), vector(&mut rng))).collect()
}
