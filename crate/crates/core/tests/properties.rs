use num_traits::{Signed, Zero};
use proptest::prelude::*;

use orbmom::assign::{self, apply_perm, coset_moment, matrix_element, DenseTensor, PartialAssignment, Permutation};
use orbmom::exactnum::{binomial, int, ratio, Rational};
use orbmom::hypergraph::{matched_edges, matched_edges_direct, Hypergraph};
use orbmom::spherepoly::{self, integrate_on_sphere, SparsePoly};
use orbmom::theory::{orbit_span_dim, verify_sandwich};

fn small_ratio() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=3).prop_map(|(p, q)| ratio(p, q))
}

fn nonzero_vector(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(small_ratio(), n).prop_filter("nonzero", |v| v.iter().any(|x| !x.is_zero()))
}

/// (n, d, terms) with up to four monomials of degree d in n variables.
fn fewnomial() -> impl Strategy<Value = SparsePoly> {
    (1usize..=4, 1u32..=3).prop_flat_map(|(n, d)| {
        let monomial = prop::collection::vec(0u32..=d, n).prop_filter_map("degree d", move |mut e| {
            let s: u32 = e.iter().sum();
            if s > d {
                return None;
            }
            e[0] += d - s;
            Some(e)
        });
        prop::collection::vec((monomial, small_ratio()), 1..=4)
            .prop_map(move |terms| SparsePoly::from_terms(n, d, terms).unwrap())
    })
}

fn tensor(n: usize, d: usize) -> impl Strategy<Value = DenseTensor> {
    prop::collection::vec(-2i64..=2, n.pow(d as u32)).prop_map(move |v| DenseTensor::from_integers(n, d, &v).unwrap())
}

fn tensor_pair() -> impl Strategy<Value = (DenseTensor, DenseTensor)> {
    (1usize..=4, 1usize..=2).prop_flat_map(|(n, d)| (tensor(n, d), tensor(n, d)))
}

fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|images| Permutation::from_images(images).unwrap())
}

fn brute_moment(a: &DenseTensor, b: &DenseTensor, k: u32) -> Rational {
    let mut total = Rational::zero();
    let mut count = 0i64;
    for g in Permutation::all(a.n()) {
        total += matrix_element(a, b, &g).unwrap().pow(2 * k as i32);
        count += 1;
    }
    total / int(count)
}

fn hypergraph(n: usize, d: usize) -> impl Strategy<Value = Hypergraph> {
    prop::collection::btree_set(
        prop::collection::vec(0..n, d).prop_map(|mut e| {
            e.sort_unstable();
            e
        }),
        0..6,
    )
    .prop_map(move |edges| Hypergraph::new(n, d, edges.into_iter().collect(), None).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sphere_moment_paths_agree(p in fewnomial(), k in 1u32..=3) {
        let streamed = spherepoly::moment_2k(&p, k).unwrap();
        prop_assert_eq!(streamed, integrate_on_sphere(&p.pow_collect(2 * k)));
    }

    #[test]
    fn sphere_moment_ignores_variable_order(p in fewnomial(), k in 1u32..=2) {
        let reversed: Vec<usize> = (0..p.n()).rev().collect();
        let q = p.permute_variables(&reversed).unwrap();
        prop_assert_eq!(spherepoly::moment_2k(&p, k).unwrap(), spherepoly::moment_2k(&q, k).unwrap());
    }

    #[test]
    fn sphere_norm_grows_with_k(p in fewnomial()) {
        let norms: Vec<f64> = (1..=4).map(|k| spherepoly::norm_2k(&p, k).unwrap()).collect();
        // exact power-mean check: M_k^{1/k} <= M_{k+1}^{1/(k+1)}
        for k in 1..4u32 {
            let lo = spherepoly::moment_2k(&p, k).unwrap();
            let hi = spherepoly::moment_2k(&p, k + 1).unwrap();
            prop_assert!(lo.pow(k as i32 + 1) <= hi.pow(k as i32), "norms {:?}", norms);
        }
    }

    #[test]
    fn sphere_moment_scales_by_c_to_the_2k(p in fewnomial(), k in 1u32..=3, c in small_ratio()) {
        let scaled = spherepoly::moment_2k(&p.scale(&c), k).unwrap();
        prop_assert_eq!(scaled, c.pow(2 * k as i32) * spherepoly::moment_2k(&p, k).unwrap());
    }

    #[test]
    fn sampling_never_beats_the_upper_bound(p in fewnomial(), k in 1u32..=3, seed in 0u64..1000) {
        let iv = spherepoly::sup_bounds(&p, k).unwrap();
        prop_assert!(spherepoly::sample_lower_bound(&p, 500, seed) <= iv.upper * (1.0 + 1e-12));
        prop_assert!(iv.lower <= iv.upper);
    }

    #[test]
    fn assignment_moment_is_the_group_average((a, b) in tensor_pair(), k in 1u32..=2) {
        prop_assert_eq!(assign::moment_2k(&a, &b, k).unwrap(), brute_moment(&a, &b, k));
    }

    #[test]
    fn coset_moments_average_to_the_parent((a, b) in tensor_pair(), k in 1u32..=2, pick in 0usize..24) {
        let n = a.n();
        let g = Permutation::all(n).nth(pick % (1..=n).product::<usize>()).unwrap();
        for t in 0..n {
            let parent = PartialAssignment::prefix_of(&g, t);
            let children: Vec<Rational> = parent
                .unused_images()
                .into_iter()
                .map(|j| coset_moment(&a, &b, k, &parent.with(t, j).unwrap()).unwrap())
                .collect();
            let mean = children.iter().sum::<Rational>() / int(children.len() as i64);
            prop_assert_eq!(coset_moment(&a, &b, k, &parent).unwrap(), mean);
        }
    }

    #[test]
    fn moment_is_invariant_under_relabeling(
        (a, b, h) in (1usize..=4, 1usize..=2).prop_flat_map(|(n, d)| (tensor(n, d), tensor(n, d), permutation(n))),
        k in 1u32..=2,
    ) {
        let m = assign::moment_2k(&a, &b, k).unwrap();
        prop_assert_eq!(&assign::moment_2k(&apply_perm(&h, &a).unwrap(), &b, k).unwrap(), &m);
        prop_assert_eq!(&assign::moment_2k(&a, &apply_perm(&h, &b).unwrap(), k).unwrap(), &m);
    }

    #[test]
    fn greedy_sits_between_moment_and_maximum((a, b) in tensor_pair(), k in 1u32..=2) {
        let r = assign::greedy_extract(&a, &b, k).unwrap();
        let best = assign::brute_max(&a, &b).unwrap();
        let power = 2 * k as i32;
        prop_assert!(r.value.pow(power) >= assign::moment_2k(&a, &b, k).unwrap());
        prop_assert!(r.value.abs() <= best.max_abs);
        prop_assert!(assign::sup_bounds(&a, &b, k).unwrap().contains(&best.max_abs));
    }

    #[test]
    fn matched_edges_paths_agree(
        (h1, h2, g) in (1usize..=5, 1usize..=3).prop_flat_map(|(n, d)| (hypergraph(n, d), hypergraph(n, d), permutation(n))),
    ) {
        let tensor_count = matched_edges(&h1, &h2, &g).unwrap();
        prop_assert_eq!(&tensor_count, &matched_edges_direct(&h1, &h2, &g).unwrap());
        prop_assert!(tensor_count.is_integer() && !tensor_count.is_negative());
        prop_assert!(tensor_count <= int(h1.edges().len().min(h2.edges().len()) as i64));
    }

    #[test]
    fn sandwich_holds((v, ell) in (1usize..=4).prop_flat_map(|n| (nonzero_vector(n), nonzero_vector(n))), k in 1u32..=3) {
        let r = verify_sandwich(&v, &ell, k).unwrap();
        prop_assert!(r.all_hold(), "{:?}", r.checks);
        let a = DenseTensor::from_entries(v.len(), 1, v.clone()).unwrap();
        let b = DenseTensor::from_entries(ell.len(), 1, ell.clone()).unwrap();
        prop_assert_eq!(&r.moment_2k, &assign::moment_2k(&a, &b, k).unwrap());
    }

    #[test]
    fn span_dimension_invariances(
        (v, h) in (1usize..=4).prop_flat_map(|n| (nonzero_vector(n), permutation(n))),
        k in 1u32..=3,
        scale in small_ratio().prop_filter("nonzero", |c| !c.is_zero()),
    ) {
        let dim = orbit_span_dim(&v, k).unwrap();
        let n = v.len();
        prop_assert!(num_bigint::BigInt::from(dim) <= binomial((n + k as usize - 1) as u64, u64::from(k)));
        let moved: Vec<Rational> = (0..n).map(|i| v[h.apply(i)].clone()).collect();
        prop_assert_eq!(orbit_span_dim(&moved, k).unwrap(), dim);
        let scaled: Vec<Rational> = v.iter().map(|x| x * &scale).collect();
        prop_assert_eq!(orbit_span_dim(&scaled, k).unwrap(), dim);
    }
}
