use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::poly::SparsePoly;
use crate::bounds::Interval;
use crate::error::{Error, Result};
use crate::exactnum::{binomial, odd_double_factorials, sphere_monomial_moment, Rational};

/// Largest number of collected monomials of p^{2k} we agree to build.
pub const DEFAULT_TERM_BUDGET: u64 = 5_000_000;

fn check_k(k: u32) -> Result<()> {
    if k == 0 {
        return Err(Error::Invalid("k must be at least 1".into()));
    }
    Ok(())
}

/// Exact mean of `p` over the unit sphere, monomial by monomial.
pub fn integrate_on_sphere(p: &SparsePoly) -> Rational {
    p.terms()
        .map(|(e, c)| c * sphere_monomial_moment(e, p.n()).expect("exponent length matches n"))
        .sum()
}

/// Exact mean of p^{2k} over the unit sphere.
pub fn moment_2k(p: &SparsePoly, k: u32) -> Result<Rational> {
    moment_2k_budgeted(p, k, DEFAULT_TERM_BUDGET)
}

/// Upper bound on the number of monomials of p^{2k}: the number of
/// compositions of 2k over the monomials of p, capped by the number of
/// degree-2kd monomials in n variables.
fn term_estimates(p: &SparsePoly, k: u32) -> (BigInt, BigInt) {
    let e = 2 * u64::from(k);
    let m = p.len() as u64;
    let compositions = binomial(e + m - 1, m - 1);
    let monomials = binomial(e * u64::from(p.degree()) + p.n() as u64 - 1, p.n() as u64 - 1);
    (compositions, monomials)
}

pub fn moment_2k_budgeted(p: &SparsePoly, k: u32, budget: u64) -> Result<Rational> {
    check_k(k)?;
    if p.is_zero() {
        return Ok(Rational::zero());
    }
    let (compositions, monomials) = term_estimates(p, k);
    let budget_big = BigInt::from(budget);
    if compositions <= budget_big {
        return Ok(moment_by_multinomial(p, k));
    }
    if monomials > budget_big {
        let terms = compositions.min(monomials).to_u128().unwrap_or(u128::MAX);
        return Err(Error::TermBudget { k, terms, budget });
    }
    let power = p.pow_collect_within(2 * k, budget, k)?;
    Ok(integrate_on_sphere(&power))
}

/// Streams the multinomial expansion of p^{2k} without collecting it.
///
/// With p = P / L for integer coefficients, the sphere mean of an even
/// monomial x^{2 beta} of degree 2kd is prod (2 beta_i - 1)!! divided by
/// n (n + 2) ... (n + 2kd - 2), so everything below the final division is
/// integer arithmetic.
fn moment_by_multinomial(p: &SparsePoly, k: u32) -> Rational {
    let (terms, l) = p.integer_form();
    let exponent = 2 * k as usize;
    let n = p.n();
    let half_degree = k as usize * p.degree() as usize;
    let dfact = odd_double_factorials(half_degree);

    let powers: Vec<Vec<BigInt>> = terms
        .iter()
        .map(|(_, g)| {
            let mut row = vec![BigInt::one()];
            for r in 1..=exponent {
                let next = &row[r - 1] * g;
                row.push(next);
            }
            row
        })
        .collect();
    let mut pascal = vec![vec![BigInt::one()]];
    for a in 1..=exponent {
        let prev = &pascal[a - 1];
        let mut row = vec![BigInt::one(); a + 1];
        for b in 1..a {
            row[b] = &prev[b - 1] + &prev[b];
        }
        pascal.push(row);
    }

    struct Walk<'a> {
        exps: Vec<&'a [u32]>,
        powers: &'a [Vec<BigInt>],
        pascal: &'a [Vec<BigInt>],
        dfact: &'a [BigInt],
        acc: Vec<u32>,
        sum: BigInt,
    }

    impl Walk<'_> {
        fn go(&mut self, i: usize, remaining: usize, coef: &BigInt) {
            let last = i + 1 == self.exps.len();
            let choices: Vec<usize> = if last {
                vec![remaining]
            } else {
                (0..=remaining).collect()
            };
            for r in choices {
                let c = coef * &self.pascal[remaining][r] * &self.powers[i][r];
                if r > 0 {
                    for (a, &e) in self.acc.iter_mut().zip(self.exps[i]) {
                        *a += r as u32 * e;
                    }
                }
                if last {
                    if self.acc.iter().all(|a| a % 2 == 0) {
                        let gauss = self.acc.iter().fold(c, |v, &a| v * &self.dfact[(a / 2) as usize]);
                        self.sum += gauss;
                    }
                } else {
                    self.go(i + 1, remaining - r, &c);
                }
                if r > 0 {
                    for (a, &e) in self.acc.iter_mut().zip(self.exps[i]) {
                        *a -= r as u32 * e;
                    }
                }
            }
        }
    }

    let mut walk = Walk {
        exps: terms.iter().map(|(e, _)| *e).collect(),
        powers: &powers,
        pascal: &pascal,
        dfact: &dfact,
        acc: vec![0; n],
        sum: BigInt::zero(),
    };
    walk.go(0, exponent, &BigInt::one());

    let sphere_norm: BigInt = (0..half_degree).fold(BigInt::one(), |acc, j| acc * (n + 2 * j));
    let denom = sphere_norm * l.pow(exponent as u32);
    Rational::new(walk.sum, denom)
}

pub fn norm_2k(p: &SparsePoly, k: u32) -> Result<f64> {
    crate::exactnum::root_2k(&moment_2k(p, k)?, k)
}

/// C(kd + n - 1, kd): the dimension of degree-kd forms in n variables.
pub fn sphere_factor(n: usize, d: u32, k: u32) -> BigInt {
    let kd = u64::from(k) * u64::from(d);
    binomial(kd + n as u64 - 1, kd)
}

/// `norm_2k(p) <= max |p| <= C(kd + n - 1, kd)^{1/(2k)} norm_2k(p)` on the sphere.
pub fn sup_bounds(p: &SparsePoly, k: u32) -> Result<Interval> {
    sup_bounds_budgeted(p, k, DEFAULT_TERM_BUDGET)
}

pub fn sup_bounds_budgeted(p: &SparsePoly, k: u32, budget: u64) -> Result<Interval> {
    let moment = moment_2k_budgeted(p, k, budget)?;
    Interval::from_moment(moment, sphere_factor(p.n(), p.degree(), k), k)
}

/// Smallest k >= 1 with (n - 1) / (2k) ln(kd + 1) < ln(1 + eps).
///
/// Since C(kd + n - 1, n - 1) <= (kd + 1)^{n-1}, the resulting sandwich
/// has ratio below 1 + eps.
pub fn choose_k(n: usize, d: u32, eps: f64) -> Result<u32> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::Invalid(format!("eps must be positive and finite, got {eps}")));
    }
    if n == 0 || d == 0 {
        return Err(Error::Invalid("n and d must be at least 1".into()));
    }
    let target = eps.ln_1p();
    let spread = (n - 1) as f64;
    let mut k: u32 = 1;
    loop {
        let lhs = spread / (2.0 * f64::from(k)) * (f64::from(k) * f64::from(d) + 1.0).ln();
        if lhs < target {
            return Ok(k);
        }
        k = k
            .checked_add(1)
            .ok_or_else(|| Error::Invalid("no admissible k below u32::MAX".into()))?;
    }
}

/// Interval on max |p| with ratio at most 1 + eps, at the k picked by [`choose_k`].
pub fn fewnomial_sup(p: &SparsePoly, eps: f64) -> Result<Interval> {
    fewnomial_sup_budgeted(p, eps, DEFAULT_TERM_BUDGET)
}

pub fn fewnomial_sup_budgeted(p: &SparsePoly, eps: f64, budget: u64) -> Result<Interval> {
    let k = choose_k(p.n(), p.degree(), eps)?;
    sup_bounds_budgeted(p, k, budget)
}

/// max |p(x)| over `trials` random points of the sphere (normalized Gaussians).
pub fn sample_lower_bound(p: &SparsePoly, trials: u64, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = vec![0.0f64; p.n()];
    let mut best = 0.0f64;
    for _ in 0..trials {
        for xi in x.iter_mut() {
            *xi = StandardNormal.sample(&mut rng);
        }
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        x.iter_mut().for_each(|v| *v /= norm);
        best = best.max(p.eval_f64(&x).abs());
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, ratio};

    fn var(n: usize, i: usize, d: u32) -> SparsePoly {
        SparsePoly::power_of_variable(n, i, d, int(1)).unwrap()
    }

    #[test]
    fn moment_examples() {
        assert_eq!(moment_2k(&var(3, 0, 1), 1).unwrap(), ratio(1, 3));
        assert_eq!(moment_2k(&var(2, 0, 1), 2).unwrap(), ratio(3, 8));
        assert_eq!(moment_2k(&SparsePoly::zero(4, 3).unwrap(), 2).unwrap(), int(0));
        assert!(moment_2k(&var(2, 0, 1), 0).is_err());
    }

    #[test]
    fn norm_examples() {
        let v = norm_2k(&var(3, 0, 1), 1).unwrap();
        assert!((v - 0.5773502692).abs() < 1e-10);
        assert_eq!(norm_2k(&SparsePoly::zero(2, 2).unwrap(), 3).unwrap(), 0.0);
        for d in 1..6 {
            assert_eq!(norm_2k(&var(1, 0, d), 3).unwrap(), 1.0);
        }
    }

    #[test]
    fn both_moment_paths_agree() {
        let sparse = SparsePoly::from_terms(
            3,
            2,
            vec![
                (vec![2, 0, 0], ratio(1, 2)),
                (vec![0, 1, 1], int(-3)),
                (vec![1, 0, 1], ratio(2, 7)),
                (vec![0, 2, 0], ratio(-5, 3)),
            ],
        )
        .unwrap();
        let dense = SparsePoly::from_terms(
            2,
            2,
            vec![(vec![2, 0], int(3)), (vec![1, 1], ratio(-1, 2)), (vec![0, 2], int(2))],
        )
        .unwrap();
        let mut collected_route = 0;
        for p in [&sparse, &dense] {
            for k in 1..=4 {
                let streamed = moment_2k(p, k).unwrap();
                let collected = integrate_on_sphere(&p.pow_collect(2 * k));
                assert_eq!(streamed, collected, "k = {k}");
                // a budget between the two estimates forces the collected route
                let (comps, mons) = term_estimates(p, k);
                if mons < comps {
                    let budget = mons.to_u64().unwrap();
                    assert_eq!(moment_2k_budgeted(p, k, budget).unwrap(), collected);
                    collected_route += 1;
                }
            }
        }
        assert!(collected_route > 0);
    }

    #[test]
    fn sup_bounds_examples() {
        let one = SparsePoly::from_terms(2, 2, vec![(vec![2, 0], int(1)), (vec![0, 2], int(1))]).unwrap();
        for k in 1..5 {
            let iv = sup_bounds(&one, k).unwrap();
            assert_eq!(iv.lower, 1.0);
            assert!(iv.contains(&int(1)));
        }
        let lone = sup_bounds(&var(1, 0, 1), 3).unwrap();
        assert_eq!((lone.lower, lone.upper), (1.0, 1.0));
        let z = sup_bounds(&SparsePoly::zero(3, 2).unwrap(), 2).unwrap();
        assert!(z.degenerate);
        assert_eq!((z.lower, z.upper), (0.0, 0.0));
    }

    #[test]
    fn linear_power_ratio_below_two_to_half_degree() {
        for n in 1..=6 {
            for d in 1..=4 {
                for k in 1..=4 {
                    let iv = sup_bounds(&var(n, 0, d), k).unwrap();
                    // (upper / 1)^{2k} <= 2^{kd}
                    let limit = Rational::from_integer(BigInt::from(2).pow(k * d));
                    assert!(iv.upper_exact <= limit, "n={n} d={d} k={k}");
                    assert!(iv.contains(&int(1)));
                }
            }
        }
    }

    #[test]
    fn choose_k_scan() {
        assert_eq!(choose_k(1, 7, 0.01).unwrap(), 1);
        assert_eq!(choose_k(3, 4, 0.5).unwrap(), 9);
        assert_eq!(choose_k(5, 3, 1e6).unwrap(), 1);
        assert!(choose_k(3, 2, 0.0).is_err());
        assert!(choose_k(3, 2, f64::NAN).is_err());
    }

    #[test]
    fn fewnomial_examples() {
        for n in 1..=4 {
            for d in 1..=3 {
                let iv = fewnomial_sup(&var(n, 0, d), 0.25).unwrap();
                assert!(iv.contains(&int(1)));
                assert!(iv.upper <= 1.25 * iv.lower);
            }
        }
        let xy = SparsePoly::from_terms(2, 2, vec![(vec![1, 1], int(1))]).unwrap();
        let iv = fewnomial_sup(&xy, 0.1).unwrap();
        assert!(iv.contains(&ratio(1, 2)));
        assert!(iv.upper <= 1.1 * iv.lower);

        let three = SparsePoly::power_of_variable(3, 0, 2, int(3)).unwrap();
        let iv = fewnomial_sup(&three, 0.01).unwrap();
        assert!(iv.contains(&int(3)));
        assert!(iv.upper <= 1.01 * iv.lower);
    }

    #[test]
    fn fewnomial_budget_names_k() {
        let p = SparsePoly::from_terms(
            4,
            2,
            vec![
                (vec![2, 0, 0, 0], int(1)),
                (vec![0, 1, 1, 0], int(2)),
                (vec![0, 0, 1, 1], int(3)),
                (vec![1, 0, 0, 1], int(-1)),
            ],
        )
        .unwrap();
        let k = choose_k(4, 2, 0.05).unwrap();
        match fewnomial_sup_budgeted(&p, 0.05, 1000) {
            Err(Error::TermBudget { k: got, .. }) => assert_eq!(got, k),
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn sampling_examples() {
        let one = SparsePoly::from_terms(2, 2, vec![(vec![2, 0], int(1)), (vec![0, 2], int(1))]).unwrap();
        let s = sample_lower_bound(&one, 100, 7);
        assert!((s - 1.0).abs() < 1e-12);
        assert_eq!(sample_lower_bound(&SparsePoly::zero(3, 1).unwrap(), 100, 1), 0.0);
        let x1 = var(3, 0, 1);
        let s = sample_lower_bound(&x1, 100_000, 42);
        assert!((0.9..=1.0).contains(&s));
        assert_eq!(s, sample_lower_bound(&x1, 100_000, 42));
    }
}
