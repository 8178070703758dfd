use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{common_denominator, scaled_integer, Rational};

/// Homogeneous polynomial in `n` variables of total degree `d`, stored as a
/// collected map from exponent vectors to non-zero rational coefficients.
///
/// Iteration order is lexicographic in the exponent vectors, which is also
/// the canonical serialization order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsePoly {
    n: usize,
    d: u32,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl SparsePoly {
    pub fn zero(n: usize, d: u32) -> Result<Self> {
        Self::validate(n, d, Vec::<(Vec<i64>, Rational)>::new())
    }

    /// Collects raw terms into canonical form, rejecting anything that is not
    /// a homogeneous polynomial of degree `d` in `n` variables.
    pub fn validate<E>(n: usize, d: u32, terms: impl IntoIterator<Item = (E, Rational)>) -> Result<Self>
    where
        E: AsRef<[i64]>,
    {
        if n == 0 {
            return Err(Error::Invalid("polynomial needs at least one variable".into()));
        }
        if d == 0 {
            return Err(Error::Invalid("homogeneous degree must be at least 1".into()));
        }
        let mut collected: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (exps, coef) in terms {
            let exps = exps.as_ref();
            if exps.len() != n {
                return Err(Error::Invalid(format!(
                    "exponent vector {exps:?} has length {} but n = {n}",
                    exps.len()
                )));
            }
            if exps.iter().any(|&e| e < 0) {
                return Err(Error::Invalid(format!("negative exponent in {exps:?}")));
            }
            let total: i64 = exps.iter().sum();
            if total != i64::from(d) {
                return Err(Error::Invalid(format!(
                    "monomial {exps:?} has degree {total}, polynomial is declared homogeneous of degree {d}"
                )));
            }
            let key: Vec<u32> = exps.iter().map(|&e| e as u32).collect();
            *collected.entry(key).or_insert_with(Rational::zero) += coef;
        }
        collected.retain(|_, c| !c.is_zero());
        Ok(SparsePoly { n, d, terms: collected })
    }

    pub fn from_terms(n: usize, d: u32, terms: Vec<(Vec<u32>, Rational)>) -> Result<Self> {
        Self::validate(
            n,
            d,
            terms
                .into_iter()
                .map(|(e, c)| (e.into_iter().map(i64::from).collect::<Vec<_>>(), c)),
        )
    }

    /// The monomial `coef * x_i^d` (0-based `i`).
    pub fn power_of_variable(n: usize, i: usize, d: u32, coef: Rational) -> Result<Self> {
        let mut e = vec![0u32; n];
        if i >= n {
            return Err(Error::Invalid(format!("variable index {i} out of range for n = {n}")));
        }
        e[i] = d;
        Self::from_terms(n, d, vec![(e, coef)])
    }

    /// (x_1^2 + ... + x_n^2)^m, identically 1 on the unit sphere.
    pub fn squared_norm_power(n: usize, m: u32) -> Result<Self> {
        let sq = Self::from_terms(
            n,
            2,
            (0..n)
                .map(|i| {
                    let mut e = vec![0; n];
                    e[i] = 2;
                    (e, Rational::one())
                })
                .collect(),
        )?;
        Ok(sq.pow_collect(m))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn coefficient(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    fn check_compatible(&self, other: &SparsePoly) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Shape(format!(
                "polynomials in {} and {} variables",
                self.n, other.n
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.check_compatible(other)?;
        if self.d != other.d && !self.is_zero() && !other.is_zero() {
            return Err(Error::Invalid(format!(
                "sum of degree {} and degree {} polynomials is not homogeneous",
                self.d, other.d
            )));
        }
        let d = if self.is_zero() { other.d } else { self.d };
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            *terms.entry(e.clone()).or_insert_with(Rational::zero) += c;
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(SparsePoly { n: self.n, d, terms })
    }

    pub fn sub(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> SparsePoly {
        let terms = if c.is_zero() {
            BTreeMap::new()
        } else {
            self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect()
        };
        SparsePoly {
            n: self.n,
            d: self.d,
            terms,
        }
    }

    pub fn mul(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.check_compatible(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &SparsePoly) -> SparsePoly {
        let mut acc: HashMap<Vec<u32>, Rational> = HashMap::with_capacity(self.len() * other.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        SparsePoly {
            n: self.n,
            d: self.d + other.d,
            terms,
        }
    }

    /// p^m with terms collected, by repeated squaring.
    pub fn pow_collect(&self, m: u32) -> SparsePoly {
        self.pow_collect_within(m, u64::MAX, m)
            .expect("unbounded budget cannot be exceeded")
    }

    /// Like [`pow_collect`](Self::pow_collect) but fails once any collected
    /// intermediate holds more than `budget` terms; `k_label` names the
    /// offending moment order in the error.
    pub(crate) fn pow_collect_within(&self, m: u32, budget: u64, k_label: u32) -> Result<SparsePoly> {
        let check = |p: &SparsePoly| {
            if p.len() as u64 > budget {
                Err(Error::TermBudget {
                    k: k_label,
                    terms: p.len() as u128,
                    budget,
                })
            } else {
                Ok(())
            }
        };
        let mut result = SparsePoly {
            n: self.n,
            d: 0,
            terms: BTreeMap::from([(vec![0; self.n], Rational::one())]),
        };
        if self.is_zero() && m > 0 {
            return Ok(SparsePoly {
                n: self.n,
                d: self.d * m,
                terms: BTreeMap::new(),
            });
        }
        let mut base = self.clone();
        let mut e = m;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_unchecked(&base);
                check(&result)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
                check(&base)?;
            }
        }
        Ok(result)
    }

    /// Polynomial in the permuted variables: `x_i` is replaced by `x_{perm[i]}`.
    pub fn permute_variables(&self, perm: &[usize]) -> Result<SparsePoly> {
        if perm.len() != self.n {
            return Err(Error::Shape("permutation length differs from n".into()));
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut out = vec![0; self.n];
                for (i, &v) in e.iter().enumerate() {
                    out[perm[i]] = v;
                }
                (out, c.clone())
            })
            .collect();
        Ok(SparsePoly {
            n: self.n,
            d: self.d,
            terms,
        })
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let c = c.to_f64().unwrap_or(f64::NAN);
                e.iter().zip(x).fold(c, |acc, (&p, &xi)| acc * xi.powi(p as i32))
            })
            .sum()
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        self.terms
            .iter()
            .map(|(e, c)| e.iter().zip(x).fold(c.clone(), |acc, (&p, xi)| acc * xi.pow(p as i32)))
            .sum()
    }

    /// Integer coefficients `P` and a positive `L` with `self = P / L`.
    pub(crate) fn integer_form(&self) -> (Vec<(&[u32], BigInt)>, BigInt) {
        let l = common_denominator(self.terms.values());
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.as_slice(), scaled_integer(c, &l)))
            .collect();
        (terms, l)
    }
}
