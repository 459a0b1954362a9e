//! Shared fixtures for the benchmarks.

use hk_core::corpus::{complete, cycle};
use hk_core::{build_t0, Graph, VertexSet};

/// The undirected T0 gadget of the given size (512 vertices at 10).
pub fn gadget_graph(n: u32) -> Graph {
    build_t0(n).expect("valid gadget size").graph
}

/// Cycles and small cliques for the exponential kernels.
pub fn small_graphs() -> Vec<(&'static str, Graph)> {
    vec![("c6", cycle(6)), ("k4", complete(4)), ("k5", complete(5))]
}

/// Two far-apart vertices of `g`.
pub fn end_pair(g: &Graph) -> VertexSet {
    let vs = g.vertices();
    [vs[0], vs[vs.len() - 1]].into_iter().collect()
}
