use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{common_denominator, scaled_integer, Rational};

/// Order-`d` array with side `n`, stored row-major. Indices are 0-based
/// tuples `(i_1, ..., i_d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseTensor {
    n: usize,
    d: usize,
    entries: Vec<Rational>,
}

fn checked_len(n: usize, d: usize) -> Result<usize> {
    if n == 0 || d == 0 {
        return Err(Error::Invalid(format!(
            "tensor needs n >= 1 and d >= 1, got n = {n}, d = {d}"
        )));
    }
    u32::try_from(d)
        .ok()
        .and_then(|d| n.checked_pow(d))
        .filter(|&len| len <= 1 << 28)
        .ok_or_else(|| Error::Invalid(format!("tensor with n = {n}, d = {d} is too large to store")))
}

impl DenseTensor {
    pub fn zeros(n: usize, d: usize) -> Result<Self> {
        let len = checked_len(n, d)?;
        Ok(DenseTensor {
            n,
            d,
            entries: vec![Rational::zero(); len],
        })
    }

    /// Row-major entries; the length must be exactly n^d.
    pub fn from_entries(n: usize, d: usize, entries: Vec<Rational>) -> Result<Self> {
        let len = checked_len(n, d)?;
        if entries.len() != len {
            return Err(Error::Invalid(format!(
                "expected {len} entries for n = {n}, d = {d}, got {}",
                entries.len()
            )));
        }
        Ok(DenseTensor { n, d, entries })
    }

    pub fn from_integers(n: usize, d: usize, values: &[i64]) -> Result<Self> {
        Self::from_entries(n, d, values.iter().map(|&v| Rational::from_integer(v.into())).collect())
    }

    /// Tensor with the listed entries, zero elsewhere. Repeated indices are an error.
    pub fn from_sparse(n: usize, d: usize, entries: impl IntoIterator<Item = (Vec<usize>, Rational)>) -> Result<Self> {
        let mut t = Self::zeros(n, d)?;
        let mut seen = vec![false; t.entries.len()];
        for (index, value) in entries {
            let off = t.offset(&index)?;
            if std::mem::replace(&mut seen[off], true) {
                return Err(Error::Invalid(format!("index {index:?} listed twice")));
            }
            t.entries[off] = value;
        }
        Ok(t)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.d
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn offset(&self, index: &[usize]) -> Result<usize> {
        if index.len() != self.d {
            return Err(Error::Shape(format!(
                "index {index:?} has length {}, order is {}",
                index.len(),
                self.d
            )));
        }
        if index.iter().any(|&i| i >= self.n) {
            return Err(Error::Invalid(format!(
                "index {index:?} out of range for n = {}",
                self.n
            )));
        }
        Ok(index.iter().fold(0, |acc, &i| acc * self.n + i))
    }

    pub fn index_of(&self, mut offset: usize) -> Vec<usize> {
        let mut index = vec![0; self.d];
        for slot in index.iter_mut().rev() {
            *slot = offset % self.n;
            offset /= self.n;
        }
        index
    }

    pub fn get(&self, index: &[usize]) -> Result<&Rational> {
        Ok(&self.entries[self.offset(index)?])
    }

    pub fn set(&mut self, index: &[usize], value: Rational) -> Result<()> {
        let off = self.offset(index)?;
        self.entries[off] = value;
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// True when every entry is 0 or 1.
    pub fn is_zero_one(&self) -> bool {
        self.entries.iter().all(|v| v.is_zero() || v.is_one())
    }

    /// Non-zero entries as (offset, value).
    pub fn support(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.entries.iter().enumerate().filter(|(_, v)| !v.is_zero())
    }

    pub fn dot(&self, other: &DenseTensor) -> Result<Rational> {
        check_same_shape(self, other)?;
        Ok(self.entries.iter().zip(&other.entries).map(|(a, b)| a * b).sum())
    }

    pub(crate) fn integer_form(&self) -> IntTensor {
        let den = common_denominator(&self.entries);
        IntTensor {
            n: self.n,
            entries: self.entries.iter().map(|v| scaled_integer(v, &den)).collect(),
            den,
        }
    }
}

pub(crate) fn check_same_shape(a: &DenseTensor, b: &DenseTensor) -> Result<()> {
    if a.n != b.n || a.d != b.d {
        return Err(Error::Shape(format!(
            "tensors of shape (n = {}, d = {}) and (n = {}, d = {})",
            a.n, a.d, b.n, b.d
        )));
    }
    Ok(())
}

/// `entries / den` with integer entries.
#[derive(Clone, Debug)]
pub(crate) struct IntTensor {
    pub n: usize,
    pub entries: Vec<BigInt>,
    pub den: BigInt,
}

/// A bijection of {0..n}, stored as its list of images.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut hit = vec![false; n];
        for &j in &images {
            if j >= n || std::mem::replace(&mut hit[j], true) {
                return Err(Error::Invalid(format!("{images:?} is not a permutation of 0..{n}")));
            }
        }
        Ok(Permutation { images })
    }

    /// Swaps `a` and `b`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        if a >= n || b >= n {
            return Err(Error::Invalid(format!(
                "transposition ({a} {b}) out of range for n = {n}"
            )));
        }
        images.swap(a, b);
        Ok(Permutation { images })
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.n() != other.n() {
            return Err(Error::Shape("composing permutations of different degree".into()));
        }
        Ok(Permutation {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.n()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Permutation { images }
    }

    /// Every permutation of {0..n} in lexicographic order of the image lists.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        let mut next = Some((0..n).collect::<Vec<_>>());
        std::iter::from_fn(move || {
            let current = next.take()?;
            let mut succ = current.clone();
            if next_lexicographic(&mut succ) {
                next = Some(succ);
            }
            Some(Permutation { images: current })
        })
    }
}

fn next_lexicographic(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let Some(i) = (0..v.len() - 1).rev().find(|&i| v[i] < v[i + 1]) else {
        return false;
    };
    let j = (i + 1..v.len())
        .rev()
        .find(|&j| v[j] > v[i])
        .expect("exists by choice of i");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

/// Injective list of fixed pairs `g(position) = image` on {0..n}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialAssignment {
    n: usize,
    pairs: Vec<(usize, usize)>,
}

impl PartialAssignment {
    pub fn empty(n: usize) -> Self {
        PartialAssignment { n, pairs: Vec::new() }
    }

    pub fn new(n: usize, pairs: Vec<(usize, usize)>) -> Result<Self> {
        let mut out = Self::empty(n);
        for (i, j) in pairs {
            out.push(i, j)?;
        }
        Ok(out)
    }

    /// The first `t` images of `g`, i.e. g(0), ..., g(t - 1).
    pub fn prefix_of(g: &Permutation, t: usize) -> Self {
        PartialAssignment {
            n: g.n(),
            pairs: (0..t.min(g.n())).map(|i| (i, g.apply(i))).collect(),
        }
    }

    pub fn push(&mut self, position: usize, image: usize) -> Result<()> {
        if position >= self.n || image >= self.n {
            return Err(Error::Invalid(format!(
                "pair ({position}, {image}) out of range for n = {}",
                self.n
            )));
        }
        if self.pairs.iter().any(|&(i, j)| i == position || j == image) {
            return Err(Error::Invalid(format!(
                "pair ({position}, {image}) clashes with an existing assignment"
            )));
        }
        self.pairs.push((position, image));
        Ok(())
    }

    pub fn with(&self, position: usize, image: usize) -> Result<Self> {
        let mut out = self.clone();
        out.push(position, image)?;
        Ok(out)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn unused_images(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|j| self.pairs.iter().all(|&(_, im)| im != *j))
            .collect()
    }

    pub fn unused_positions(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|i| self.pairs.iter().all(|&(p, _)| p != *i))
            .collect()
    }

    /// The permutation, once every position is fixed.
    pub fn to_permutation(&self) -> Option<Permutation> {
        if self.len() != self.n {
            return None;
        }
        let mut images = vec![0; self.n];
        for &(i, j) in &self.pairs {
            images[i] = j;
        }
        Some(Permutation { images })
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        g.n() == self.n && self.pairs.iter().all(|&(i, j)| g.apply(i) == j)
    }
}

/// gX, defined by (gX)_{gI} = x_I with g acting on every coordinate of I.
pub fn apply_perm(g: &Permutation, x: &DenseTensor) -> Result<DenseTensor> {
    if g.n() != x.n {
        return Err(Error::Shape(format!(
            "permutation of degree {} on tensor with n = {}",
            g.n(),
            x.n
        )));
    }
    let mut out = DenseTensor::zeros(x.n, x.d)?;
    for (off, v) in x.support() {
        let moved: Vec<usize> = x.index_of(off).into_iter().map(|i| g.apply(i)).collect();
        let target = out.offset(&moved)?;
        out.entries[target] = v.clone();
    }
    Ok(out)
}

/// f(g) = <B, gA> = sum_I a_I b_{gI}.
pub fn matrix_element(a: &DenseTensor, b: &DenseTensor, g: &Permutation) -> Result<Rational> {
    check_same_shape(a, b)?;
    if g.n() != a.n {
        return Err(Error::Shape(format!(
            "permutation of degree {} on tensors with n = {}",
            g.n(),
            a.n
        )));
    }
    let mut total = Rational::zero();
    for (off, v) in a.support() {
        let moved = a.index_of(off).into_iter().fold(0, |acc, i| acc * a.n + g.apply(i));
        let w = &b.entries[moved];
        if !w.is_zero() {
            total += v * w;
        }
    }
    Ok(total)
}
