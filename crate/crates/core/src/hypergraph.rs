//! Hypergraph alignment as a d-dimensional assignment problem.
//!
//! A permutation g is read as a vertex bijection from `h1` onto `h2`; an edge
//! E of `h1` is matched when g(E) is an edge of `h2`. With A the 0/1
//! adjacency tensor of `h1` and B the adjacency tensor of `h2` weighted by
//! k_1! ... k_r! / d! (k_i the vertex multiplicities of the edge), every
//! matched edge contributes exactly 1 to f(g) = <B, gA>.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::assign::{
    greedy_extract_budgeted, matrix_element, sup_bounds_budgeted, DenseTensor, Permutation, DEFAULT_VISIT_BUDGET,
};
use crate::bounds::Interval;
use crate::error::{Error, Result};
use crate::exactnum::{factorial, Rational};

/// Edges are multisets of exactly `d` vertices in {0..n}; an edge with fewer
/// distinct vertices is written with repeats. Each edge carries a rational
/// weight, 1 unless given.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    d: usize,
    edges: Vec<Vec<usize>>,
    weights: Vec<Rational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Source,
    Target,
}

impl Hypergraph {
    pub fn new(n: usize, d: usize, edges: Vec<Vec<usize>>, weights: Option<Vec<Rational>>) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::Invalid("hypergraph needs n >= 1 and d >= 1".into()));
        }
        let weights = match weights {
            Some(w) if w.len() != edges.len() => {
                return Err(Error::Invalid(format!("{} weights for {} edges", w.len(), edges.len())))
            }
            Some(w) => w,
            None => vec![Rational::one(); edges.len()],
        };
        let mut seen = BTreeSet::new();
        let mut canonical = Vec::with_capacity(edges.len());
        for mut edge in edges {
            if edge.len() != d {
                return Err(Error::Invalid(format!(
                    "edge {edge:?} has {} vertices; pad it with repeated vertices to exactly d = {d}",
                    edge.len()
                )));
            }
            if let Some(v) = edge.iter().find(|&&v| v >= n) {
                return Err(Error::Invalid(format!("vertex {v} out of range for n = {n}")));
            }
            edge.sort_unstable();
            if !seen.insert(edge.clone()) {
                return Err(Error::Invalid(format!("duplicate edge {edge:?}")));
            }
            canonical.push(edge);
        }
        Ok(Hypergraph {
            n,
            d,
            edges: canonical,
            weights,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Edges as sorted vertex multisets, in input order.
    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    /// True when no edge repeats a vertex.
    pub fn is_uniform(&self) -> bool {
        self.edges.iter().all(|e| e.windows(2).all(|w| w[0] != w[1]))
    }

    fn edge_weight(&self, edge: &[usize]) -> Option<&Rational> {
        self.edges.iter().position(|e| e == edge).map(|i| &self.weights[i])
    }
}

/// Every distinct ordering of a sorted multiset.
fn orderings(sorted: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = sorted.to_vec();
    loop {
        out.push(current.clone());
        // next multiset permutation in lexicographic order
        let Some(i) = (0..current.len().saturating_sub(1))
            .rev()
            .find(|&i| current[i] < current[i + 1])
        else {
            return out;
        };
        let j = (i + 1..current.len())
            .rev()
            .find(|&j| current[j] > current[i])
            .expect("exists");
        current.swap(i, j);
        current[i + 1..].reverse();
    }
}

fn multiplicity_weight(sorted: &[usize]) -> Rational {
    let mut num = num_bigint::BigInt::one();
    for run in sorted.chunk_by(|a, b| a == b) {
        num *= factorial(run.len() as u64);
    }
    Rational::new(num, factorial(sorted.len() as u64))
}

/// Source role: weight on every ordering of each edge. Target role: weight
/// times k_1! ... k_r! / d!, so the orderings of one edge sum to its weight.
pub fn adjacency_tensor(h: &Hypergraph, role: Role) -> Result<DenseTensor> {
    let mut t = DenseTensor::zeros(h.n, h.d)?;
    for (edge, w) in h.edges.iter().zip(&h.weights) {
        let value = match role {
            Role::Source => w.clone(),
            Role::Target => w * multiplicity_weight(edge),
        };
        for index in orderings(edge) {
            t.set(&index, value.clone())?;
        }
    }
    Ok(t)
}

fn check_pair(h1: &Hypergraph, h2: &Hypergraph) -> Result<()> {
    if h1.n != h2.n || h1.d != h2.d {
        return Err(Error::Shape(format!(
            "hypergraphs with (n, d) = ({}, {}) and ({}, {})",
            h1.n, h1.d, h2.n, h2.d
        )));
    }
    Ok(())
}

/// Weighted number of edges of `h1` that g maps onto edges of `h2`, computed
/// as the matrix element of the adjacency tensors.
pub fn matched_edges(h1: &Hypergraph, h2: &Hypergraph, g: &Permutation) -> Result<Rational> {
    check_pair(h1, h2)?;
    let a = adjacency_tensor(h1, Role::Source)?;
    let b = adjacency_tensor(h2, Role::Target)?;
    matrix_element(&a, &b, g)
}

/// The same count by mapping each edge of `h1` through g and looking it up in `h2`.
pub fn matched_edges_direct(h1: &Hypergraph, h2: &Hypergraph, g: &Permutation) -> Result<Rational> {
    check_pair(h1, h2)?;
    if g.n() != h1.n {
        return Err(Error::Shape("permutation degree differs from vertex count".into()));
    }
    let mut total = Rational::zero();
    for (edge, w1) in h1.edges.iter().zip(&h1.weights) {
        let mut image: Vec<usize> = edge.iter().map(|&v| g.apply(v)).collect();
        image.sort_unstable();
        if let Some(w2) = h2.edge_weight(&image) {
            total += w1 * w2;
        }
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Alignment {
    pub permutation: Permutation,
    pub matched: Rational,
    /// Certified bounds on the best achievable matched count.
    pub bounds: Interval,
}

pub fn align(h1: &Hypergraph, h2: &Hypergraph, k: u32) -> Result<Alignment> {
    align_budgeted(h1, h2, k, DEFAULT_VISIT_BUDGET)
}

pub fn align_budgeted(h1: &Hypergraph, h2: &Hypergraph, k: u32, budget: u64) -> Result<Alignment> {
    check_pair(h1, h2)?;
    let a = adjacency_tensor(h1, Role::Source)?;
    let b = adjacency_tensor(h2, Role::Target)?;
    let bounds = sup_bounds_budgeted(&a, &b, k, budget)?;
    let greedy = greedy_extract_budgeted(&a, &b, k, budget)?;
    Ok(Alignment {
        permutation: greedy.permutation,
        matched: greedy.value,
        bounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, ratio};

    pub(crate) fn triangle() -> Hypergraph {
        Hypergraph::new(3, 2, vec![vec![0, 1], vec![1, 2], vec![0, 2]], None).unwrap()
    }

    fn path() -> Hypergraph {
        Hypergraph::new(3, 2, vec![vec![0, 1], vec![1, 2]], None).unwrap()
    }

    #[test]
    fn triangle_tensors() {
        let a = adjacency_tensor(&triangle(), Role::Source).unwrap();
        assert_eq!(a.entries().iter().filter(|v| **v == int(1)).count(), 6);
        assert_eq!(a.get(&[1, 0]).unwrap(), &int(1));
        assert_eq!(a.get(&[1, 1]).unwrap(), &int(0));
        let b = adjacency_tensor(&triangle(), Role::Target).unwrap();
        assert_eq!(b.entries().iter().filter(|v| **v == ratio(1, 2)).count(), 6);
    }

    #[test]
    fn multiset_edge_weight() {
        let h = Hypergraph::new(2, 2, vec![vec![0, 0]], None).unwrap();
        assert!(!h.is_uniform());
        let b = adjacency_tensor(&h, Role::Target).unwrap();
        assert_eq!(b.get(&[0, 0]).unwrap(), &int(1));
        let h = Hypergraph::new(3, 3, vec![vec![2, 0, 2]], None).unwrap();
        let b = adjacency_tensor(&h, Role::Target).unwrap();
        // 2! 1! / 3! on the three orderings of {0, 2, 2}
        assert_eq!(b.entries().iter().filter(|v| **v == ratio(1, 3)).count(), 3);
    }

    #[test]
    fn matched_examples() {
        let id = Permutation::identity(3);
        assert_eq!(matched_edges(&triangle(), &triangle(), &id).unwrap(), int(3));
        assert_eq!(matched_edges(&triangle(), &path(), &id).unwrap(), int(2));
        let a = Hypergraph::new(4, 2, vec![vec![0, 1]], None).unwrap();
        let b = Hypergraph::new(4, 2, vec![vec![2, 3]], None).unwrap();
        assert_eq!(matched_edges(&a, &b, &Permutation::identity(4)).unwrap(), int(0));
    }

    #[test]
    fn weighted_edges() {
        let h1 = Hypergraph::new(3, 2, vec![vec![0, 1], vec![1, 2]], Some(vec![int(2), ratio(1, 3)])).unwrap();
        let h2 = Hypergraph::new(3, 2, vec![vec![0, 1], vec![1, 2]], Some(vec![int(5), int(7)])).unwrap();
        let id = Permutation::identity(3);
        let expected = int(10) + ratio(7, 3);
        assert_eq!(matched_edges(&h1, &h2, &id).unwrap(), expected);
        assert_eq!(matched_edges_direct(&h1, &h2, &id).unwrap(), expected);
    }

    #[test]
    fn align_examples() {
        let r = align(&triangle(), &triangle(), 1).unwrap();
        assert_eq!(r.matched, int(3));
        assert!(r.bounds.contains(&int(3)));

        let r = align(&triangle(), &path(), 2).unwrap();
        assert_eq!(r.matched, int(2));
        assert!(r.bounds.contains(&int(2)));

        let empty = Hypergraph::new(3, 2, vec![], None).unwrap();
        let r = align(&triangle(), &empty, 1).unwrap();
        assert_eq!(r.matched, int(0));
        assert!(r.bounds.degenerate);
        assert_eq!((r.bounds.lower, r.bounds.upper), (0.0, 0.0));
    }

    #[test]
    fn validation() {
        assert!(Hypergraph::new(3, 2, vec![vec![0, 1], vec![1, 0]], None).is_err());
        assert!(Hypergraph::new(3, 2, vec![vec![0, 3]], None).is_err());
        assert!(Hypergraph::new(3, 2, vec![vec![0]], None).is_err());
        assert!(Hypergraph::new(3, 2, vec![vec![0, 1]], Some(vec![])).is_err());
        let other = Hypergraph::new(4, 2, vec![], None).unwrap();
        assert!(align(&triangle(), &other, 1).is_err());
    }

    #[test]
    fn orderings_of_multisets() {
        assert_eq!(orderings(&[0, 1, 2]).len(), 6);
        assert_eq!(orderings(&[1, 1, 2]).len(), 3);
        assert_eq!(orderings(&[4, 4]).len(), 1);
    }
}
