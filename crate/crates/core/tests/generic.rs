mod common;

use common::*;
use hk_core::{
    build_generic, check_sparsity, class_membership, d_closure, reduct_consistency, verify_extension_property, ClassSpec,
    GrowthFunction, StrongKind, VertexSet,
};

#[test]
fn growth_builds_keep_girth_and_closure_bounds() {
    let f = GrowthFunction::girth_five();
    for seed in 0..4 {
        let g = build_generic(&ClassSpec::girth_five(), 20, 4, seed).unwrap();
        let s = g.last_stage().graph();
        assert_eq!(s.vertex_count(), 20);
        assert!(graph_girth_bf(&s).is_none_or(|c| c >= 5));
        let vs = s.vertices();
        for i in 0..vs.len() {
            for j in i..vs.len() {
                let a: VertexSet = [vs[i], vs[j]].into_iter().collect();
                let cl = d_closure(&s, &a, 2).unwrap().closure;
                // F(|cl|) <= 2|A| without going through an inverse
                assert!(f.eval(cl.len() as f64) <= 2.0 * a.len() as f64 + 1e-9);
            }
        }
    }
}

#[test]
fn a_strong_three_path_joins_a_closed_non_adjacent_pair() {
    let g = build_generic(&ClassSpec::girth_five(), 20, 4, 0).unwrap();
    let s = g.last_stage().graph();
    let deltas = all_deltas(&s, 2);
    let vs = s.vertices();
    let mut found = false;
    for (i, &a) in vs.iter().enumerate() {
        for &b in &vs[i + 1..] {
            let pair: VertexSet = [a, b].into_iter().collect();
            if s.has_edge(a, b) || d_closure(&s, &pair, 2).unwrap().closure != pair {
                continue;
            }
            for x in s.neighbors(a) {
                for y in s.neighbors(b) {
                    if x != b && y != a && x != y && s.has_edge(x, y) {
                        let p: VertexSet = [a, x, y, b].into_iter().collect();
                        found |= strong_bf(&deltas, mask_of(vs, &p), StrongKind::D);
                    }
                }
            }
        }
    }
    assert!(found);
}

#[test]
fn orientation_builds_have_sparse_strong_reducts() {
    for spec in [ClassSpec::d0(2), ClassSpec::df(2, GrowthFunction::girth_five())] {
        let g = build_generic(&spec, 15, 3, 1).unwrap();
        for st in &g.stages {
            assert!(check_sparsity(&st.graph(), 2).unwrap().sparse);
            assert!(class_membership(st, &spec).unwrap().member);
        }
        assert!(reduct_consistency(&g).unwrap().consistent);
    }
    assert!(reduct_consistency(&build_generic(&ClassSpec::c0(2), 5, 2, 0).unwrap()).is_err());
}

#[test]
fn verification_at_the_build_bound_and_beyond() {
    let g = build_generic(&ClassSpec::c0(2), 12, 3, 9).unwrap();
    let at = verify_extension_property(&g, 3).unwrap();
    assert_eq!(at.open_in_completed, 0);
    let beyond = verify_extension_property(&g, 4).unwrap();
    assert!(beyond.checked > at.checked);
    assert!(beyond.open > 0);
    // B = A is never listed as an obligation, so bound 1 only asks for a point over the empty set
    let trivial = verify_extension_property(&g, 1).unwrap();
    assert_eq!((trivial.checked, trivial.open), (1, 0));
}

#[test]
fn seeds_change_the_build_but_not_its_invariants() {
    let a = build_generic(&ClassSpec::c0(2), 14, 3, 0).unwrap();
    let b = build_generic(&ClassSpec::c0(2), 14, 3, 1).unwrap();
    assert_ne!(serde_json::to_string(&a.tasks).unwrap(), serde_json::to_string(&b.tasks).unwrap());
    for g in [a, b] {
        for w in g.stages.windows(2) {
            let prev: VertexSet = w[0].vertices().iter().copied().collect();
            let deltas = all_deltas(&w[1].graph(), 2);
            assert!(strong_bf(&deltas, mask_of(w[1].vertices(), &prev), StrongKind::S));
        }
    }
}
