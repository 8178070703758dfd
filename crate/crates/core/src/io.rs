//! JSON file formats. Indices, vertices and permutation images are 1-based
//! on disk and 0-based in memory. Exact values travel as `"num/den"` strings
//! (bare integers are accepted on input). Output objects are built from
//! `serde_json::Value`, whose maps keep keys sorted, so identical values
//! always serialize to identical bytes.

use serde::Deserialize;
use serde_json::{json, Value};

use crate::assign::{BruteMax, DenseTensor, GreedyResult, Permutation};
use crate::bounds::Interval;
use crate::error::{Error, Result};
use crate::exactnum::{format_rational, parse_rational, Rational};
use crate::hypergraph::{Alignment, Hypergraph};
use crate::spherepoly::{SparsePoly, SystemReport};
use crate::theory::{FactorReport, SandwichReport};

#[derive(Deserialize)]
#[serde(untagged)]
enum Number {
    Text(String),
    Int(i64),
}

impl Number {
    fn exact(&self) -> Result<Rational> {
        match self {
            Number::Text(s) => parse_rational(s),
            Number::Int(v) => Ok(Rational::from_integer((*v).into())),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TermDoc {
    exps: Vec<i64>,
    coef: Number,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyDoc {
    n: usize,
    d: u32,
    terms: Vec<TermDoc>,
}

impl PolyDoc {
    fn build(self) -> Result<SparsePoly> {
        let terms = self
            .terms
            .into_iter()
            .map(|t| Ok((t.exps, t.coef.exact()?)))
            .collect::<Result<Vec<_>>>()?;
        SparsePoly::validate(self.n, self.d, terms)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SystemDoc {
    List(Vec<PolyDoc>),
    Wrapped { polys: Vec<PolyDoc> },
}

pub fn parse_poly(text: &str) -> Result<SparsePoly> {
    serde_json::from_str::<PolyDoc>(text)?.build()
}

/// A system is either a JSON array of polynomials or `{"polys": [...]}`.
pub fn parse_system(text: &str) -> Result<Vec<SparsePoly>> {
    let docs = match serde_json::from_str::<SystemDoc>(text)? {
        SystemDoc::List(v) | SystemDoc::Wrapped { polys: v } => v,
    };
    docs.into_iter().map(PolyDoc::build).collect()
}

pub fn poly_to_json(p: &SparsePoly) -> Value {
    json!({
        "n": p.n(),
        "d": p.degree(),
        "terms": p.terms().map(|(e, c)| json!({"exps": e, "coef": format_rational(c)})).collect::<Vec<_>>(),
    })
}

fn one_based(values: &[i64], n: usize, what: &str) -> Result<Vec<usize>> {
    values
        .iter()
        .map(|&v| {
            if v >= 1 && (v as u64) <= n as u64 {
                Ok(v as usize - 1)
            } else {
                Err(Error::Invalid(format!("{what} {v} outside 1..={n}")))
            }
        })
        .collect()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryDoc {
    index: Vec<i64>,
    value: Number,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TensorDoc {
    n: usize,
    d: usize,
    entries: Vec<EntryDoc>,
}

pub fn parse_tensor(text: &str) -> Result<DenseTensor> {
    let doc: TensorDoc = serde_json::from_str(text)?;
    let entries = doc
        .entries
        .into_iter()
        .map(|e| Ok((one_based(&e.index, doc.n, "index")?, e.value.exact()?)))
        .collect::<Result<Vec<_>>>()?;
    DenseTensor::from_sparse(doc.n, doc.d, entries)
}

pub fn tensor_to_json(t: &DenseTensor) -> Value {
    let entries: Vec<Value> = t
        .support()
        .map(|(off, v)| {
            let index: Vec<usize> = t.index_of(off).into_iter().map(|i| i + 1).collect();
            json!({"index": index, "value": format_rational(v)})
        })
        .collect();
    json!({"n": t.n(), "d": t.order(), "entries": entries})
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PermutationDoc {
    images: Vec<i64>,
}

pub fn parse_permutation(text: &str) -> Result<Permutation> {
    let doc: PermutationDoc = serde_json::from_str(text)?;
    let n = doc.images.len();
    Permutation::from_images(one_based(&doc.images, n, "image")?)
}

pub fn permutation_to_json(g: &Permutation) -> Value {
    json!({"images": g.images().iter().map(|i| i + 1).collect::<Vec<_>>()})
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HypergraphDoc {
    n: usize,
    d: usize,
    edges: Vec<Vec<i64>>,
    #[serde(default)]
    weights: Option<Vec<Number>>,
}

pub fn parse_hypergraph(text: &str) -> Result<Hypergraph> {
    let doc: HypergraphDoc = serde_json::from_str(text)?;
    let edges = doc
        .edges
        .iter()
        .map(|e| one_based(e, doc.n, "vertex"))
        .collect::<Result<Vec<_>>>()?;
    let weights = doc
        .weights
        .map(|w| w.iter().map(Number::exact).collect::<Result<Vec<_>>>())
        .transpose()?;
    Hypergraph::new(doc.n, doc.d, edges, weights)
}

/// Float ends of the interval with the exact 2k-th powers they come from.
pub fn interval_to_json(iv: &Interval) -> Value {
    json!({
        "lower": iv.lower,
        "upper": iv.upper,
        "lower_pow_2k": format_rational(&iv.lower_exact),
        "upper_pow_2k": format_rational(&iv.upper_exact),
        "factor": iv.factor.to_string(),
        "k": iv.k_used,
        "ratio": iv.ratio(),
        "degenerate": iv.degenerate,
    })
}

pub fn system_report_to_json(r: &SystemReport) -> Value {
    json!({
        "gamma": r.gamma,
        "gamma_exact": format_rational(&r.gamma_exact),
        "q_bounds": interval_to_json(&r.q_bounds),
        "p_bounds": interval_to_json(&r.p_bounds),
        "p": poly_to_json(&r.p),
        "verdict": r.verdict.as_str(),
        "min_q_lower_bound": r.min_q_lower_bound,
    })
}

pub fn greedy_to_json(r: &GreedyResult) -> Value {
    json!({
        "permutation": permutation_to_json(&r.permutation),
        "value": format_rational(&r.value),
        "abs_value": r.abs_value,
        "coset_moments": r.coset_moments.iter().map(format_rational).collect::<Vec<_>>(),
    })
}

pub fn brute_to_json(r: &BruteMax) -> Value {
    json!({
        "permutation": permutation_to_json(&r.permutation),
        "value": format_rational(&r.value),
        "max_abs": format_rational(&r.max_abs),
    })
}

pub fn alignment_to_json(a: &Alignment) -> Value {
    json!({
        "permutation": permutation_to_json(&a.permutation),
        "matched": format_rational(&a.matched),
        "bounds": interval_to_json(&a.bounds),
    })
}

pub fn sandwich_to_json(r: &SandwichReport) -> Value {
    let checks: Vec<Value> = r
        .checks
        .iter()
        .map(|c| {
            json!({
                "inequality": c.inequality,
                "lhs": format_rational(&c.lhs),
                "rhs": format_rational(&c.rhs),
                "holds": c.holds,
                "tight": c.tight,
            })
        })
        .collect();
    json!({
        "n": r.n,
        "k": r.k,
        "sup_abs": format_rational(&r.sup_abs),
        "moment_2k": format_rational(&r.moment_2k),
        "moment_2": format_rational(&r.moment_2),
        "orbit_span_dim": r.orbit_span_dim,
        "checks": checks,
    })
}

pub fn factor_report_to_json(r: &FactorReport) -> Value {
    let checks: Vec<Value> = r
        .checks
        .iter()
        .map(|c| json!({"dim": c.dim, "factor": c.factor, "limit": c.limit, "holds": c.holds}))
        .collect();
    json!({"eps": r.eps, "k0": r.k0, "checks": checks})
}

pub fn vector_to_json(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(format_rational(x))).collect())
}
