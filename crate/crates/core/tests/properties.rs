mod common;

use common::*;
use hk_core::corpus::graph_from_pair_mask;
use hk_core::{
    canonical_decode, check_sparsity, class_membership, d_closure, free_amalgam_shared, is_strong, ClassSpec, Graph, Orientation,
    Structure, StrongKind, VertexSet,
};
use proptest::prelude::*;

/// A 2-sparse graph on `1..=8` vertices.
fn sparse_graph() -> impl Strategy<Value = Graph> {
    (1u32..=8, any::<u64>())
        .prop_map(|(n, bits)| graph_from_pair_mask(n, bits & ((1u64 << (n * (n - 1) / 2)) - 1)))
        .prop_filter("2-sparse", |g| sparse_bf(g, 2))
}

fn with_masks() -> impl Strategy<Value = (Graph, u32, u32)> {
    sparse_graph().prop_flat_map(|g| {
        let full = (1u32 << g.vertex_count()) - 1;
        (Just(g), 0..=full, 0..=full)
    })
}

fn strong(g: &Graph, m: u32, kind: StrongKind) -> bool {
    is_strong(g, &set_of(g.vertices(), m), kind, 2).unwrap().strong
}

/// Strongness of `a` inside the induced subgraph on `b`.
fn strong_in(g: &Graph, a: u32, b: u32, kind: StrongKind) -> bool {
    let vs = g.vertices();
    let sub = g.induced_subgraph(&set_of(vs, b)).unwrap();
    is_strong(&sub, &set_of(vs, a), kind, 2).unwrap().strong
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn strong_restricts_to_subsets((g, a, x) in with_masks()) {
        for kind in [StrongKind::S, StrongKind::D] {
            if strong(&g, a, kind) {
                prop_assert!(strong_in(&g, a & x, x, kind));
            }
        }
    }

    #[test]
    fn strong_is_transitive((g, a, b) in with_masks()) {
        let a = a & b;
        let full = (1u32 << g.vertex_count()) - 1;
        for kind in [StrongKind::S, StrongKind::D] {
            if strong_in(&g, a, b, kind) && strong_in(&g, b, full, kind) {
                prop_assert!(strong(&g, a, kind));
            }
        }
    }

    #[test]
    fn strong_sets_are_closed_under_intersection((g, a, b) in with_masks()) {
        for kind in [StrongKind::S, StrongKind::D] {
            if strong(&g, a, kind) && strong(&g, b, kind) {
                prop_assert!(strong(&g, a & b, kind));
            }
        }
    }

    #[test]
    fn predimension_is_submodular((g, b, c) in with_masks()) {
        let d = all_deltas(&g, 2);
        let at = |m: u32| d[m as usize];
        prop_assert!(at(b | c) <= at(b) + at(c) - at(b & c));
    }

    #[test]
    fn d_closure_does_not_raise_predimension((g, a, _b) in with_masks()) {
        let vs = g.vertices();
        let cl = d_closure(&g, &set_of(vs, a), 2).unwrap().closure;
        let d = all_deltas(&g, 2);
        prop_assert!(d[a as usize] >= d[mask_of(vs, &cl) as usize]);
        prop_assert_eq!(&d_closure(&g, &cl, 2).unwrap().closure, &cl);
    }

    #[test]
    fn witness_orientations_orient_the_graph(g in sparse_graph()) {
        let o = check_sparsity(&g, 2).unwrap().witness_orientation.unwrap();
        prop_assert_eq!(o.undirected_reduct(), g);
    }

    #[test]
    fn encodings_round_trip(g in sparse_graph()) {
        let s = Structure::Graph(g.clone());
        prop_assert_eq!(canonical_decode(&s.canonical_encode()).unwrap(), s.clone());
        let json = serde_json::to_string(&s).unwrap();
        prop_assert_eq!(serde_json::from_str::<Structure>(&json).unwrap(), s);
        let o = Structure::Oriented(check_sparsity(&g, 2).unwrap().witness_orientation.unwrap());
        prop_assert_eq!(canonical_decode(&o.canonical_encode()).unwrap(), o.clone());
        let json = serde_json::to_string(&o).unwrap();
        prop_assert_eq!(serde_json::from_str::<Structure>(&json).unwrap(), o);
    }

    #[test]
    fn inducing_twice_is_inducing_once((g, c, d) in with_masks()) {
        let vs = g.vertices();
        let once = g.induced_subgraph(&set_of(vs, c & d)).unwrap();
        let twice = g.induced_subgraph(&set_of(vs, c)).unwrap().induced_subgraph(&set_of(vs, c & d)).unwrap();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn free_amalgams_of_strong_pairs_stay_sparse((g, a, _b) in with_masks()) {
        // amalgamate g with a shifted copy of itself over a strong set
        let vs = g.vertices();
        prop_assume!(strong(&g, a, StrongKind::S));
        let shared: VertexSet = set_of(vs, a);
        let shift = vs.len() as u32;
        let map = vs.iter().map(|&v| (v, if shared.contains(&v) { v } else { hk_core::VertexId(v.0 + shift) })).collect();
        let copy = g.relabel(&map).unwrap();
        let r = free_amalgam_shared(&Structure::Graph(g.clone()), &Structure::Graph(copy), &shared, Some(&ClassSpec::c0(2))).unwrap();
        prop_assert!(r.in_class);
        prop_assert!(class_membership(&r.amalgam, &ClassSpec::c0(2)).unwrap().member);
    }
}

#[test]
fn orientation_checker_rejects_bad_arcs() {
    use hk_core::VertexId as V;
    assert!(Orientation::new([V(0), V(1)], [(V(0), V(1)), (V(1), V(0))], 2).is_err());
    assert!(Orientation::new([V(0)], [(V(0), V(0))], 2).is_err());
    assert!(Orientation::new([V(0), V(1), V(2)], [(V(0), V(1)), (V(0), V(2))], 1).is_err());
    assert!(Orientation::new([V(0), V(1), V(2)], [(V(0), V(1)), (V(0), V(2))], 2).is_ok());
}
