mod common;

use common::*;
use hk_core::classes::wap_probe;
use hk_core::{
    attach_gadgets, build_t0, build_t1, is_strong, ClassSpec, Orientation, RootedGadget, Structure, StrongKind, VertexSet,
};

fn extension_of_a_point(t: &RootedGadget) -> Structure {
    Structure::Oriented(attach_gadgets(&Orientation::from_ids([0], &[], 2), t).unwrap().away)
}

#[test]
fn t1_cycle_blocks_amalgamation_once_t0_reaches_it() {
    let a = Structure::Oriented(Orientation::from_ids([0], &[], 2));
    let spec = ClassSpec::d0(2);
    for m in 3..=4 {
        let c2 = extension_of_a_point(&build_t1(m).unwrap());
        for n in 3..=2 * m + 3 {
            let c1 = extension_of_a_point(&build_t0(n).unwrap());
            let bound = c1.vertex_count() + c2.vertex_count() - 1;
            let r = wap_probe(&spec, &a, &c1, &c2, bound).unwrap();
            // the identified pair sits at height 2m; a T0 whose inner
            // vertices reach height 2m - 1 leaves no room for it
            assert_eq!(r.is_exhausted(), n > 2 * m, "m={m} n={n}");
            if let Some(w) = r.found() {
                assert!(w.in_class);
            }
        }
    }
}

#[test]
fn small_gadget_sides_are_strong_by_brute_force() {
    for n in 2..=5 {
        let t = build_t0(n).unwrap();
        let deltas = all_deltas(&t.graph, 2);
        let vs = t.graph.vertices();
        for set in [VertexSet::from([t.root]), t.left_leaves.clone(), t.right_leaves.clone()] {
            for kind in [StrongKind::S, StrongKind::D] {
                assert!(strong_bf(&deltas, mask_of(vs, &set), kind), "n={n} {kind:?}");
            }
        }
    }
}

#[test]
fn t1_girth_is_twice_m() {
    for m in 3..=5 {
        let t = build_t1(m).unwrap();
        assert_eq!(graph_girth_bf(&t.graph), Some(2 * m as usize));
    }
    // height 3m = 9
    let t = build_t1(3).unwrap();
    assert_eq!(t.graph.vertex_count(), 249);
    for set in [VertexSet::from([t.root]), t.left_leaves.clone(), t.right_leaves.clone()] {
        assert!(is_strong(&t.graph, &set, StrongKind::S, 2).unwrap().strong);
        assert!(is_strong(&t.graph, &set, StrongKind::D, 2).unwrap().strong);
    }
}

#[test]
fn attached_base_and_leaf_sides_are_strong() {
    let bases = [
        Orientation::from_ids([0], &[], 2),
        Orientation::from_ids(0..3, &[(0, 1), (1, 2)], 2),
        Orientation::from_ids(0..3, &[(0, 1), (1, 2), (2, 0)], 2),
    ];
    for b in &bases {
        for t in [build_t0(3).unwrap(), build_t0(4).unwrap(), build_t1(3).unwrap()] {
            let e = attach_gadgets(b, &t).unwrap();
            let base: VertexSet = b.vertices().iter().copied().collect();
            assert_eq!(e.away.undirected_reduct(), e.graph);
            for set in [&base, &e.s0, &e.s1] {
                assert!(is_strong(&e.graph, set, StrongKind::S, 2).unwrap().strong);
                assert!(is_strong(&e.graph, set, StrongKind::D, 2).unwrap().strong);
            }
            if e.graph.vertex_count() <= 20 {
                let deltas = all_deltas(&e.graph, 2);
                assert!(strong_bf(&deltas, mask_of(e.graph.vertices(), &base), StrongKind::D));
            }
        }
    }
}
