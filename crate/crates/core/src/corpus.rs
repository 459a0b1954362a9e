//! Standard graph families and small exhaustive corpora.

use std::collections::BTreeSet;

use rand::Rng;

use crate::dynamics::canon::canonical_graph;
use crate::graph::{Graph, Orientation, VertexId};

/// Cycle on `0..n` (needs `n >= 3`).
pub fn cycle(n: u32) -> Graph {
    assert!(n >= 3, "cycles need at least three vertices");
    let edges: Vec<(u32, u32)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::on_range(n, &edges)
}

/// Path on `n` vertices `0 - 1 - ... - (n-1)`.
pub fn path(n: u32) -> Graph {
    let edges: Vec<(u32, u32)> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::on_range(n, &edges)
}

pub fn complete(n: u32) -> Graph {
    let edges: Vec<(u32, u32)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    Graph::on_range(n, &edges)
}

/// Star `K_{1,r}` with centre 0 and leaves `1..=r`.
pub fn star(r: u32) -> Graph {
    let edges: Vec<(u32, u32)> = (1..=r).map(|i| (0, i)).collect();
    Graph::on_range(r + 1, &edges)
}

pub fn edgeless(n: u32) -> Graph {
    Graph::on_range(n, &[])
}

/// Complete binary out-tree of the given depth, heap-numbered from root 0,
/// every arc pointing away from the root.
pub fn binary_out_tree(depth: u32) -> Orientation {
    let n = (1u32 << (depth + 1)) - 1;
    let arcs: Vec<(u32, u32)> = (1..n).map(|i| ((i - 1) / 2, i)).collect();
    Orientation::from_ids(0..n, &arcs, 2)
}

/// Graph on `0..n` whose edges are the bits of `mask` over pairs in
/// lexicographic order.
pub fn graph_from_pair_mask(n: u32, mask: u64) -> Graph {
    let mut edges = Vec::new();
    let mut bit = 0;
    for i in 0..n {
        for j in i + 1..n {
            if mask >> bit & 1 == 1 {
                edges.push((i, j));
            }
            bit += 1;
        }
    }
    Graph::on_range(n, &edges)
}

/// All graphs on `n` vertices up to isomorphism, each in canonical labelling,
/// in ascending order of canonical encoding.
pub fn graphs_up_to_iso(n: u32) -> Vec<Graph> {
    let mut current = vec![Graph::empty()];
    for size in 1..=n {
        let mut next: BTreeSet<Vec<u8>> = BTreeSet::new();
        let mut graphs = Vec::new();
        for g in &current {
            let new = VertexId(size - 1);
            let base = g.with_vertex(new).expect("fresh vertex");
            for nb in 0u64..(1u64 << (size - 1)) {
                let mut edges: Vec<(VertexId, VertexId)> = base.edges().to_vec();
                for j in 0..size - 1 {
                    if nb >> j & 1 == 1 {
                        edges.push((VertexId(j), new));
                    }
                }
                let h = Graph::new(base.vertices().iter().copied(), edges).expect("valid extension");
                let c = canonical_graph(&h);
                if next.insert(crate::graph::canonical_encode_graph(&c)) {
                    graphs.push(c);
                }
            }
        }
        graphs.sort_by_key(crate::graph::canonical_encode_graph);
        current = graphs;
    }
    current
}

/// Random graph on `0..n` with each pair present with probability `p`.
pub fn random_graph<R: Rng>(rng: &mut R, n: u32, p: f64) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(p) {
                edges.push((i, j));
            }
        }
    }
    Graph::on_range(n, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_sizes() {
        assert_eq!(cycle(5).edge_count(), 5);
        assert_eq!(complete(5).edge_count(), 10);
        assert_eq!(star(4).edge_count(), 4);
        assert_eq!(path(1).edge_count(), 0);
        assert_eq!(binary_out_tree(2).vertex_count(), 7);
    }

    #[test]
    fn isomorphism_class_counts() {
        // OEIS A000088
        let expected = [1, 1, 2, 4, 11, 34, 156];
        for (n, &count) in expected.iter().enumerate() {
            assert_eq!(graphs_up_to_iso(n as u32).len(), count, "n = {n}");
        }
    }
}
