//! Half-binary-tree gadgets, their cycle-bearing variant, and the builders
//! that glue copies of them onto a 2-orientation or onto each other.
//!
//! In `T0(n)` the root `c` is vertex 0 and a sequence `s` in `{0,1}^{<n}`
//! starting with 0 is vertex `2^(|s|-1) + int(s)`, so the parent of `x >= 2`
//! is `x / 2` and the height of `x >= 1` is its bit length.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Embedding, Graph, Orientation, Structure, VertexId, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GadgetKind {
    T0,
    T1,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootedGadget {
    pub graph: Graph,
    pub root: VertexId,
    /// Leaves whose sequence ends in 0.
    pub left_leaves: VertexSet,
    /// Leaves whose sequence ends in 1.
    pub right_leaves: VertexSet,
    pub height: u32,
    pub kind: GadgetKind,
}

fn height_of(x: u32) -> u32 {
    if x == 0 {
        0
    } else {
        32 - x.leading_zeros()
    }
}

fn split_leaves(leaves: impl Iterator<Item = u32>) -> (VertexSet, VertexSet) {
    let (even, odd): (Vec<u32>, Vec<u32>) = leaves.partition(|x| x % 2 == 0);
    (even.into_iter().map(VertexId).collect(), odd.into_iter().map(VertexId).collect())
}

/// Largest height accepted by the builders (vertex ids must fit in u32).
const MAX_HEIGHT: u32 = 24;

/// Root plus the sequences in `{0,1}^{<n}` that start with 0, ordered by
/// initial segment.
pub fn build_t0(n: u32) -> Result<RootedGadget> {
    if n < 2 {
        return Err(Error::domain("T0 needs height at least 2"));
    }
    if n > MAX_HEIGHT {
        return Err(Error::resource(format!("height {n} exceeds {MAX_HEIGHT}")));
    }
    let count = 1u32 << (n - 1);
    let edges: Vec<(u32, u32)> = (1..count).map(|x| (x / 2, x)).collect();
    let (left, right) = split_leaves(count / 2..count);
    Ok(RootedGadget {
        graph: Graph::on_range(count, &edges),
        root: VertexId(0),
        left_leaves: left,
        right_leaves: right,
        height: n,
        kind: GadgetKind::T0,
    })
}

/// `T0(3m)` with two height-`2m` vertices identified, together with the
/// subtrees below them, so that the orientation away from the root keeps
/// out-degree at most 2. The pair is `0^{2m}` and `0^m 1 0^{m-1}`, the least
/// pair whose root paths part at height `m`; the result has a single cycle,
/// of length `2m`.
pub fn build_t1(m: u32) -> Result<RootedGadget> {
    if m < 3 {
        return Err(Error::domain("T1 needs m at least 3"));
    }
    let n = 3 * m;
    let t0 = build_t0(n)?;
    let count = 1u32 << (n - 1);
    let keep = 1u32 << (2 * m - 1);
    let gone = keep + (1u32 << (m - 1));
    // x below `gone` at depth d maps to the vertex below `keep` with the same path
    let merge = |x: u32| -> u32 {
        let (h, hg) = (height_of(x), height_of(gone));
        if h >= hg && x >> (h - hg) == gone {
            let d = h - hg;
            (keep << d) | (x & ((1 << d) - 1))
        } else {
            x
        }
    };
    let vertices: Vec<u32> = (0..count).filter(|&x| merge(x) == x).collect();
    let edges: Vec<(u32, u32)> = t0.graph.edges().iter().map(|&(u, v)| (merge(u.0), merge(v.0))).collect();
    let leaves = vertices.iter().copied().filter(|&x| height_of(x) == n - 1);
    let (left, right) = split_leaves(leaves);
    let mut edges = edges;
    edges.sort_unstable();
    edges.dedup();
    Ok(RootedGadget {
        graph: Graph::from_ids(vertices, &edges),
        root: VertexId(0),
        left_leaves: left,
        right_leaves: right,
        height: n,
        kind: GadgetKind::T1,
    })
}

impl RootedGadget {
    /// Height of a vertex: its distance from the root.
    pub fn height_of(&self, v: VertexId) -> u32 {
        height_of(v.0)
    }

    pub fn leaves(&self) -> VertexSet {
        self.left_leaves.union(&self.right_leaves).copied().collect()
    }

    /// Every edge directed from the lower to the higher vertex (k = 2).
    pub fn away_orientation(&self) -> Orientation {
        self.oriented(true)
    }

    /// Every edge directed towards the root (k = 2).
    pub fn toward_orientation(&self) -> Orientation {
        self.oriented(false)
    }

    fn oriented(&self, away: bool) -> Orientation {
        let arcs = self.graph.edges().iter().map(|&(u, v)| {
            let (lo, hi) = if height_of(u.0) < height_of(v.0) { (u, v) } else { (v, u) };
            if away {
                (lo, hi)
            } else {
                (hi, lo)
            }
        });
        Orientation::new(self.graph.vertices().iter().copied(), arcs, 2).expect("gadget orientations have out-degree at most 2")
    }
}

/// `E`: copies of a gadget glued by their roots onto the vertices of `b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttachedGadgets {
    pub graph: Graph,
    /// `b` extended by the copies oriented away from their attachment points.
    pub away: Orientation,
    /// `b` extended by the copies oriented towards their attachment points.
    pub toward: Orientation,
    /// Union of the copies' left leaves.
    pub s0: VertexSet,
    /// Union of the copies' right leaves.
    pub s1: VertexSet,
    /// Maps from the gadget's vertices into `graph`, one per copy.
    pub copies: Vec<Embedding>,
}

/// Glues `2 - outdeg(a)` copies of `t` onto each vertex `a` of `b`, root to
/// `a`, in ascending order of `a`. Each copy's other vertices get fresh ids
/// above everything used so far, in ascending order.
pub fn attach_gadgets(b: &Orientation, t: &RootedGadget) -> Result<AttachedGadgets> {
    if b.k() != 2 {
        return Err(Error::domain("gadgets attach to 2-orientations"));
    }
    let mut vertices: Vec<VertexId> = b.vertices().to_vec();
    let mut away: Vec<(VertexId, VertexId)> = b.arcs().to_vec();
    let mut toward = away.clone();
    let mut next = b.vertices().last().map_or(0, |v| v.0 + 1);
    let (mut s0, mut s1) = (VertexSet::new(), VertexSet::new());
    let mut copies = Vec::new();
    let t_away = t.away_orientation();
    for &a in b.vertices() {
        for _ in b.out_degree(a)..2 {
            let mut map = BTreeMap::new();
            for &v in t.graph.vertices() {
                let image = if v == t.root {
                    a
                } else {
                    next += 1;
                    VertexId(next - 1)
                };
                map.insert(v, image);
            }
            vertices.extend(map.iter().filter(|&(&v, _)| v != t.root).map(|(_, &w)| w));
            for &(u, v) in t_away.arcs() {
                away.push((map[&u], map[&v]));
                toward.push((map[&v], map[&u]));
            }
            s0.extend(t.left_leaves.iter().map(|v| map[v]));
            s1.extend(t.right_leaves.iter().map(|v| map[v]));
            copies.push(Embedding::new(map));
        }
    }
    let away = Orientation::new(vertices.iter().copied(), away, 2)?;
    let toward = Orientation::new(vertices, toward, 2)?;
    Ok(AttachedGadgets { graph: away.undirected_reduct(), away, toward, s0, s1, copies })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IteratedAmalgam {
    pub amalgam: Structure,
    /// One map per copy from the original vertices into `amalgam`.
    pub copies: Vec<Embedding>,
}

/// `copies` copies of `x` glued along the identity on `over`. Copy 0 keeps
/// the original ids; later copies number their other vertices upwards from
/// the largest id in use.
pub fn iterated_free_amalgam(x: &Structure, over: &VertexSet, copies: usize) -> Result<IteratedAmalgam> {
    if copies < 1 {
        return Err(Error::domain("need at least one copy"));
    }
    if let Some(v) = over.iter().find(|v| !x.vertices().contains(v)) {
        return Err(Error::domain(format!("unknown vertex {v}")));
    }
    let mut vertices: Vec<VertexId> = x.vertices().to_vec();
    let mut pairs: Vec<(VertexId, VertexId)> = Vec::new();
    let related: Vec<(VertexId, VertexId)> = match x {
        Structure::Graph(g) => g.edges().to_vec(),
        Structure::Oriented(o) => o.arcs().to_vec(),
    };
    let mut next = x.vertices().last().map_or(0, |v| v.0 + 1);
    let mut maps = Vec::new();
    for c in 0..copies {
        let map: BTreeMap<VertexId, VertexId> = x
            .vertices()
            .iter()
            .map(|&v| {
                if c == 0 || over.contains(&v) {
                    (v, v)
                } else {
                    next += 1;
                    (v, VertexId(next - 1))
                }
            })
            .collect();
        if c > 0 {
            vertices.extend(map.iter().filter(|(v, _)| !over.contains(v)).map(|(_, &w)| w));
        }
        for &(u, v) in &related {
            if c == 0 || !(over.contains(&u) && over.contains(&v)) {
                pairs.push((map[&u], map[&v]));
            }
        }
        maps.push(Embedding::new(map));
    }
    let amalgam = match x {
        Structure::Graph(_) => Structure::Graph(Graph::new(vertices, pairs)?),
        Structure::Oriented(o) => Structure::Oriented(Orientation::new(vertices, pairs, o.k())?),
    };
    Ok(IteratedAmalgam { amalgam, copies: maps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::{class_membership, ClassSpec};
    use crate::corpus::cycle;
    use crate::graph::vset;
    use crate::predimension::{is_strong, StrongKind};

    #[test]
    fn small_t0() {
        let t = build_t0(3).unwrap();
        assert_eq!(t.graph.vertex_count(), 4);
        assert_eq!(t.graph.edges(), &[(VertexId(0), VertexId(1)), (VertexId(1), VertexId(2)), (VertexId(1), VertexId(3))]);
        assert_eq!(t.left_leaves, vset([2]));
        assert_eq!(t.right_leaves, vset([3]));
        let t2 = build_t0(2).unwrap();
        assert_eq!(t2.graph.vertex_count(), 2);
        assert_eq!(t2.leaves(), vset([1]));
        assert!(build_t0(1).is_err());
        for n in 2..=8 {
            let t = build_t0(n).unwrap();
            assert_eq!(t.graph.edge_count() + 1, t.graph.vertex_count());
            assert_eq!(t.graph.girth(), None);
            assert_eq!(t.graph.degree(t.root), 1);
        }
    }

    #[test]
    fn leaf_parents_see_both_sides() {
        for t in [build_t0(5).unwrap(), build_t1(3).unwrap()] {
            let leaves = t.leaves();
            for &v in t.graph.vertices() {
                let below: Vec<VertexId> = t.graph.neighbors(v).filter(|w| leaves.contains(w)).collect();
                if !below.is_empty() && !leaves.contains(&v) {
                    assert_eq!(below.iter().filter(|w| t.left_leaves.contains(w)).count(), 1);
                    assert_eq!(below.iter().filter(|w| t.right_leaves.contains(w)).count(), 1);
                }
            }
        }
    }

    #[test]
    fn t1_has_one_cycle_of_length_2m() {
        for m in 3..=4 {
            let t = build_t1(m).unwrap();
            assert_eq!(t.graph.girth(), Some(2 * m as usize));
            assert_eq!(t.graph.edge_count(), t.graph.vertex_count());
            assert_eq!(t.graph.components().len(), 1);
        }
        assert_eq!(build_t1(3).unwrap().graph.vertex_count(), 249);
        assert!(build_t1(2).is_err());
    }

    #[test]
    fn away_orientation_roots_are_root_and_leaves() {
        for t in [build_t0(4).unwrap(), build_t1(3).unwrap()] {
            let o = t.away_orientation();
            let low: VertexSet = o.vertices().iter().copied().filter(|&v| o.out_degree(v) < 2).collect();
            let mut expect = t.leaves();
            expect.insert(t.root);
            assert_eq!(low, expect);
        }
    }

    #[test]
    fn attach_examples() {
        let single = Orientation::from_ids([0], &[], 2);
        let e = attach_gadgets(&single, &build_t0(3).unwrap()).unwrap();
        assert_eq!(e.graph.vertex_count(), 7);
        assert_eq!(e.copies.len(), 2);
        let arc = Orientation::from_ids([0, 1], &[(0, 1)], 2);
        let e = attach_gadgets(&arc, &build_t0(2).unwrap()).unwrap();
        assert_eq!(e.copies.len(), 3);
        assert_eq!(e.graph.degree(VertexId(0)), 2);
        assert_eq!(e.graph.degree(VertexId(1)), 3);
        let tri = Orientation::from_ids(0..5, &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (2, 4), (3, 4), (3, 0), (4, 0), (4, 1)], 2);
        let e = attach_gadgets(&tri, &build_t0(3).unwrap()).unwrap();
        assert_eq!(e.graph, tri.undirected_reduct());
        assert!(e.s0.is_empty() && e.s1.is_empty());
        assert!(attach_gadgets(&Orientation::from_ids([0], &[], 1), &build_t0(3).unwrap()).is_err());
    }

    #[test]
    fn iterate_examples() {
        let c5 = Structure::Graph(cycle(5));
        let one = iterated_free_amalgam(&c5, &vset([0]), 1).unwrap();
        assert_eq!(one.amalgam, c5);
        let three = iterated_free_amalgam(&c5, &vset([0]), 3).unwrap();
        let g = three.amalgam.graph();
        assert_eq!((g.vertex_count(), g.edge_count()), (13, 15));
        assert!(class_membership(&three.amalgam, &ClassSpec::girth_five()).unwrap().member);
        let edge = Structure::Graph(Graph::from_ids([0, 1], &[(0, 1)]));
        let p = iterated_free_amalgam(&edge, &vset([0]), 2).unwrap().amalgam.graph();
        assert_eq!((p.vertex_count(), p.edge_count(), p.degree(VertexId(0))), (3, 2, 2));
        assert!(iterated_free_amalgam(&edge, &vset([0]), 0).is_err());
    }

    #[test]
    fn root_and_leaf_sides_are_strong() {
        for t in (2..=5).map(|n| build_t0(n).unwrap()).chain([build_t1(3).unwrap()]) {
            for set in [vset([0]), t.left_leaves.clone(), t.right_leaves.clone()] {
                if set.is_empty() {
                    continue;
                }
                for kind in [StrongKind::S, StrongKind::D] {
                    assert!(is_strong(&t.graph, &set, kind, 2).unwrap().strong, "{:?} {kind:?}", t.kind);
                }
            }
        }
    }
}
