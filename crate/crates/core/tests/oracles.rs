mod common;

use common::*;
use hk_core::corpus::{graphs_up_to_iso, random_graph};
use hk_core::predimension::{is_strong_by_predimension, is_strong_in_orientation};
use hk_core::{
    check_sparsity, class_membership, d_closure, enumerate_orientations, enumerate_strong_copies, orient, successor_d_closure,
    ArcConstraint, ClassSpec, GrowthFunction, Structure, StrongKind,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn sparsity_matches_all_subsets() {
    for g in graphs_up_to_iso(7) {
        for k in 1..=3 {
            let v = check_sparsity(&g, k).unwrap();
            assert_eq!(v.sparse, sparse_bf(&g, k));
            if let Some(o) = &v.witness_orientation {
                assert_eq!(o.undirected_reduct(), g);
                assert!(o.vertices().iter().all(|&x| o.out_degree(x) <= k as usize));
            }
            if let Some(b) = &v.violator {
                assert!(g.edges_within(b).unwrap() > k as usize * b.len());
            }
        }
    }
}

#[test]
fn inward_orientation_exists_exactly_for_s_strong_sets() {
    for g in graphs_up_to_iso(6) {
        for k in 1..=2 {
            if !sparse_bf(&g, k) {
                continue;
            }
            let deltas = all_deltas(&g, k);
            let vs = g.vertices();
            for a in 0..1u32 << vs.len() {
                let set = set_of(vs, a);
                let o = orient(&g, k, &ArcConstraint::inward(set.clone())).unwrap();
                assert_eq!(o.is_some(), strong_bf(&deltas, a, StrongKind::S));
                if let Some(o) = o {
                    let succ = successors(&o);
                    assert!(successor_closed(&succ, a));
                    assert_eq!(o.undirected_reduct(), g);
                }
            }
        }
    }
}

#[test]
fn orientation_counts_match_unpruned_enumeration() {
    for g in graphs_up_to_iso(6).into_iter().filter(|g| g.edge_count() <= 10) {
        for k in 1..=2 {
            let space = enumerate_orientations(&g, k, None).unwrap();
            assert_eq!(space.points.len(), unpruned_orientation_count(&g, k));
            assert!(!space.truncated);
            for o in &space.points {
                assert_eq!(o.undirected_reduct(), g);
            }
        }
    }
}

#[test]
fn d_closure_is_the_meet_of_d_closed_supersets() {
    for g in graphs_up_to_iso(6) {
        let k = 2;
        if !sparse_bf(&g, k) {
            continue;
        }
        let deltas = all_deltas(&g, k);
        let vs = g.vertices();
        for seed in 0..1u32 << vs.len() {
            let cl = d_closure(&g, &set_of(vs, seed), k).unwrap().closure;
            let m = mask_of(vs, &cl);
            assert_eq!(m, dcl_bf(&deltas, seed));
            assert!(deltas[seed as usize] >= deltas[m as usize]);
            assert_eq!(d_closure(&g, &cl, k).unwrap().closure, cl);
        }
    }
}

#[test]
fn d_closure_is_monotone() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let g = random_graph(&mut rng, 7, 0.4);
        if !sparse_bf(&g, 2) {
            continue;
        }
        let vs = g.vertices();
        for a in [0b11u32, 0b101, 0b1001, 0b100001] {
            let b = a | 0b1000000;
            let ca = mask_of(vs, &d_closure(&g, &set_of(vs, a), 2).unwrap().closure);
            let cb = mask_of(vs, &d_closure(&g, &set_of(vs, b), 2).unwrap().closure);
            assert_eq!(ca & cb, ca);
        }
    }
}

#[test]
fn strongness_routes_agree_with_the_definition() {
    for g in graphs_up_to_iso(6) {
        for k in 1..=2 {
            if !sparse_bf(&g, k) {
                continue;
            }
            let deltas = all_deltas(&g, k);
            let vs = g.vertices();
            for a in 0..1u32 << vs.len() {
                let set = set_of(vs, a);
                for kind in [StrongKind::S, StrongKind::D] {
                    let want = strong_bf(&deltas, a, kind);
                    assert_eq!(is_strong_by_predimension(&g, &set, kind, k).unwrap().strong, want);
                    let v = hk_core::is_strong(&g, &set, kind, k).unwrap();
                    assert_eq!(v.strong, want);
                    if let Some(o) = v.witness_orientation {
                        assert!(is_strong_in_orientation(&o, &set, kind).unwrap());
                    }
                    if let Some(c) = v.violating_set {
                        let cm = mask_of(vs, &c);
                        assert!(cm & a == a && cm != a);
                        match kind {
                            StrongKind::S => assert!(deltas[cm as usize] < deltas[a as usize]),
                            StrongKind::D => assert!(deltas[cm as usize] <= deltas[a as usize]),
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn sdcl_is_least_successor_and_d_closed_superset() {
    for g in graphs_up_to_iso(5) {
        for k in 1..=2 {
            if !sparse_bf(&g, k) {
                continue;
            }
            let deltas = all_deltas(&g, k);
            for o in enumerate_orientations(&g, k, None).unwrap().points {
                let vs = o.vertices();
                for seed in 0..1u32 << vs.len() {
                    let got = successor_d_closure(&o, &set_of(vs, seed)).unwrap().closure;
                    assert_eq!(Some(mask_of(vs, &got)), sdcl_bf(&o, &deltas, seed));
                }
            }
        }
    }
}

#[test]
fn growth_membership_matches_all_subsets() {
    let f = GrowthFunction::girth_five();
    let spec = ClassSpec::girth_five();
    for g in graphs_up_to_iso(7) {
        let v = class_membership(&Structure::Graph(g.clone()), &spec).unwrap();
        assert_eq!(v.member, cf_member_bf(&g, 2, &f), "{g:?}");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..300 {
        let g = random_graph(&mut rng, 8, 0.3);
        let v = class_membership(&Structure::Graph(g.clone()), &spec).unwrap();
        assert_eq!(v.member, cf_member_bf(&g, 2, &f));
    }
}

#[test]
fn strong_copies_are_strong() {
    let spec = ClassSpec::c0(2);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let small: Vec<_> = graphs_up_to_iso(3);
    for _ in 0..40 {
        let b = random_graph(&mut rng, 6, 0.5);
        if !sparse_bf(&b, 2) {
            continue;
        }
        let deltas = all_deltas(&b, 2);
        for a in &small {
            for e in enumerate_strong_copies(&Structure::Graph(a.clone()), &Structure::Graph(b.clone()), &spec).unwrap() {
                let image: hk_core::VertexSet = e.map.values().copied().collect();
                assert!(strong_bf(&deltas, mask_of(b.vertices(), &image), StrongKind::S));
                for (&u, &x) in &e.map {
                    for (&v, &y) in &e.map {
                        assert_eq!(a.has_edge(u, v), b.has_edge(x, y));
                    }
                }
            }
        }
    }
}
