//! Exact scalars and the closed-form quantities built from them.
//!
//! Every moment in this crate is an exact [`Rational`]. Floating point only
//! appears when a 2k-th root is extracted, see [`root_2k`] and
//! [`bound_factor`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn checked_div(a: &Rational, b: &Rational) -> Result<Rational> {
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(a / b)
}

/// Parses `"num/den"` or a bare integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Invalid(format!("not a rational number: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(Rational::new(num, den))
}

/// Canonical `"num/den"` rendering; the denominator is always present.
pub fn format_rational(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// C(a, b), zero when b > a.
pub fn binomial(a: u64, b: u64) -> BigInt {
    if b > a {
        return BigInt::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigInt::one();
    for i in 0..b {
        acc *= a - i;
        acc /= i + 1;
    }
    acc
}

/// n (n-1) ... (n-r+1): the number of injective maps from r labels into n values.
pub fn falling_factorial(n: u64, r: u64) -> Result<BigInt> {
    if r > n {
        return Err(Error::Invalid(format!("falling factorial ({n})_{r} with r > n")));
    }
    Ok((n - r + 1..=n).fold(BigInt::one(), |acc, v| acc * v))
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, v| acc * v)
}

/// A value `coef * sqrt(pi)^sqrt_pi_exp`. Gamma at half-integers lives here.
#[derive(Clone, Debug)]
struct PiMultiple {
    coef: Rational,
    sqrt_pi_exp: i64,
}

impl PiMultiple {
    fn mul(self, other: PiMultiple) -> PiMultiple {
        PiMultiple {
            coef: self.coef * other.coef,
            sqrt_pi_exp: self.sqrt_pi_exp + other.sqrt_pi_exp,
        }
    }

    fn div(self, other: PiMultiple) -> PiMultiple {
        PiMultiple {
            coef: self.coef / other.coef,
            sqrt_pi_exp: self.sqrt_pi_exp - other.sqrt_pi_exp,
        }
    }
}

/// Gamma(m/2) for m >= 1, from Gamma(1) = 1 and Gamma(1/2) = sqrt(pi) via
/// Gamma(x + 1) = x Gamma(x).
fn gamma_half(m: u64) -> PiMultiple {
    debug_assert!(m >= 1);
    let (mut coef, sqrt_pi_exp, mut twice_x) = if m.is_multiple_of(2) {
        (Rational::one(), 0, 2)
    } else {
        (Rational::one(), 1, 1)
    };
    while twice_x < m {
        coef *= ratio(twice_x as i64, 2);
        twice_x += 2;
    }
    PiMultiple { coef, sqrt_pi_exp }
}

/// Mean of the monomial x^alpha over the unit sphere S^{n-1} under the
/// rotation-invariant probability measure.
///
/// Zero when any exponent is odd. Otherwise, with beta = alpha / 2, the value
/// is Gamma(n/2) prod Gamma(beta_i + 1/2) / (pi^{n/2} Gamma(|beta| + n/2)); all
/// powers of sqrt(pi) cancel, leaving a rational.
pub fn sphere_monomial_moment(alpha: &[u32], n: usize) -> Result<Rational> {
    if n == 0 {
        return Err(Error::Invalid("sphere dimension n must be at least 1".into()));
    }
    if alpha.len() != n {
        return Err(Error::Shape(format!(
            "exponent vector has length {} but n = {n}",
            alpha.len()
        )));
    }
    if alpha.iter().any(|a| a % 2 == 1) {
        return Ok(Rational::zero());
    }
    let n = n as u64;
    let half_sum: u64 = alpha.iter().map(|&a| u64::from(a) / 2).sum();
    let numer = alpha
        .iter()
        .map(|&a| gamma_half(u64::from(a) + 1))
        .fold(gamma_half(n), PiMultiple::mul);
    let denom = PiMultiple {
        coef: Rational::one(),
        sqrt_pi_exp: n as i64,
    }
    .mul(gamma_half(2 * half_sum + n));
    let value = numer.div(denom);
    assert_eq!(value.sqrt_pi_exp, 0, "powers of pi must cancel");
    Ok(value.coef)
}

/// (2j - 1)!! for j = 0..=max_half, i.e. the Gaussian moments E[z^{2j}].
pub(crate) fn odd_double_factorials(max_half: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(max_half + 1);
    out.push(BigInt::one());
    for j in 1..=max_half {
        let next = &out[j - 1] * (2 * j as u64 - 1);
        out.push(next);
    }
    out
}

/// x^{1/(2k)} for exact non-negative x, with a few ulp of relative error.
pub fn root_2k(x: &Rational, k: u32) -> Result<f64> {
    if k == 0 {
        return Err(Error::Invalid("k must be at least 1".into()));
    }
    if x.is_negative() {
        return Err(Error::Invalid(format!(
            "2k-th root of negative value {}",
            format_rational(x)
        )));
    }
    if x.is_zero() {
        return Ok(0.0);
    }
    // x = q * 2^-shift with q holding ~96 significant bits.
    let (num, den) = (x.numer().magnitude(), x.denom().magnitude());
    let shift = 96 - (num.bits() as i64 - den.bits() as i64);
    let q = if shift >= 0 {
        (num << shift as usize) / den
    } else {
        num / (den << (-shift) as usize)
    };
    let q_bits = q.bits() as i64;
    // mantissa in [1, 2), exponent such that x ~= mantissa * 2^exp
    let drop = q_bits - 60;
    let top = if drop > 0 { &q >> drop as usize } else { q.clone() };
    let mantissa = top.to_f64().expect("60-bit integer fits in f64") / 2f64.powi(59);
    let exp = drop.max(0) + 59 - shift;

    let t = 2 * i64::from(k);
    let (whole, rem) = (exp.div_euclid(t), exp.rem_euclid(t));
    let y = mantissa * 2f64.powi(rem as i32);
    let root = match k {
        1 => y.sqrt(),
        2 => y.sqrt().sqrt(),
        _ => y.powf(1.0 / t as f64),
    };
    Ok(scale_pow2(root, whole))
}

fn scale_pow2(v: f64, e: i64) -> f64 {
    // split so each factor stays a finite power of two
    let mut v = v;
    let mut e = e;
    while e > 1000 {
        v *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        v *= 2f64.powi(-1000);
        e += 1000;
    }
    v * 2f64.powi(e as i32)
}

/// C(dim + k - 1, k)^{1/(2k)}: the sup-to-L^{2k} factor for a representation
/// of dimension `dim`, since the orbit of v^{⊗k} spans at most Sym^k.
pub fn bound_factor(dim: u64, k: u32) -> f64 {
    let f = binomial(dim + u64::from(k) - 1, u64::from(k));
    root_2k(&Rational::from_integer(f), k.max(1)).expect("binomial is non-negative")
}

/// Least common multiple of the denominators, so that `x * lcm` is integral.
pub(crate) fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// `x * scale`, which the caller guarantees is an integer.
pub(crate) fn scaled_integer(x: &Rational, scale: &BigInt) -> BigInt {
    let v = x * Rational::from_integer(scale.clone());
    debug_assert!(v.is_integer());
    v.to_integer()
}
