//! Canonical labelling of small graphs and digraphs by backtracking.
//!
//! A labelling is a placement order of the vertices. Its code lists, per
//! position, the vertex colour and degrees followed by the relation bits to
//! every earlier position. The canonical labelling is the one with the least
//! code among all orders; the search branches only over candidates achieving
//! the least next code element and skips all but one of each twin class.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::graph::{Graph, Orientation, Structure, VertexId};

/// Dense relation matrix: `rel(i, j)` is true when there is an edge or arc i→j.
#[derive(Clone, Debug)]
pub(crate) struct RelMatrix {
    n: usize,
    bits: Vec<bool>,
}

impl RelMatrix {
    pub(crate) fn from_graph(g: &Graph) -> Self {
        let n = g.vertex_count();
        let mut bits = vec![false; n * n];
        for (i, j) in g.edge_indices() {
            bits[i * n + j] = true;
            bits[j * n + i] = true;
        }
        RelMatrix { n, bits }
    }

    pub(crate) fn from_orientation(o: &Orientation) -> Self {
        let n = o.vertex_count();
        let mut bits = vec![false; n * n];
        for i in 0..n {
            for &j in o.out_indices(i) {
                bits[i * n + j] = true;
            }
        }
        RelMatrix { n, bits }
    }

    pub(crate) fn from_structure(s: &Structure) -> Self {
        match s {
            Structure::Graph(g) => Self::from_graph(g),
            Structure::Oriented(o) => Self::from_orientation(o),
        }
    }

    pub(crate) fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub(crate) fn rel(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.n + j]
    }

    pub(crate) fn out_degree(&self, i: usize) -> usize {
        (0..self.n).filter(|&j| self.rel(i, j)).count()
    }

    pub(crate) fn in_degree(&self, i: usize) -> usize {
        (0..self.n).filter(|&j| self.rel(j, i)).count()
    }

    /// Whether swapping `u` and `v` (fixing everything else) preserves the relation.
    pub(crate) fn twins(&self, u: usize, v: usize) -> bool {
        if self.rel(u, v) != self.rel(v, u) {
            return false;
        }
        (0..self.n)
            .filter(|&w| w != u && w != v)
            .all(|w| self.rel(u, w) == self.rel(v, w) && self.rel(w, u) == self.rel(w, v))
    }
}

type Elem = Vec<u32>;

struct Search<'a> {
    m: &'a RelMatrix,
    inv: Vec<[u32; 3]>,
    best: Option<(Vec<usize>, Vec<Elem>)>,
}

impl Search<'_> {
    fn element(&self, placed: &[usize], v: usize) -> Elem {
        let mut e = self.inv[v].to_vec();
        for &p in placed {
            e.push(u32::from(self.m.rel(v, p)) * 2 + u32::from(self.m.rel(p, v)));
        }
        e
    }

    fn run(&mut self, placed: &mut Vec<usize>, used: &mut [bool], code: &mut Vec<Elem>) {
        let depth = placed.len();
        if depth == self.m.n() {
            if self.best.as_ref().is_none_or(|(_, b)| code.as_slice() < b.as_slice()) {
                self.best = Some((placed.clone(), code.clone()));
            }
            return;
        }
        let mut least: Option<Elem> = None;
        let mut cands: Vec<usize> = Vec::new();
        for v in 0..self.m.n() {
            if used[v] {
                continue;
            }
            let e = self.element(placed, v);
            match least.as_ref().map(|l| e.cmp(l)) {
                None | Some(Ordering::Less) => {
                    least = Some(e);
                    cands.clear();
                    cands.push(v);
                }
                Some(Ordering::Equal) => cands.push(v),
                Some(Ordering::Greater) => {}
            }
        }
        code.push(least.expect("some vertex remains"));
        if let Some((_, best)) = &self.best {
            if code.as_slice() > &best[..=depth] {
                code.pop();
                return;
            }
        }
        let mut reps: Vec<usize> = Vec::new();
        for &v in &cands {
            if reps.iter().any(|&r| self.m.twins(r, v)) {
                continue;
            }
            reps.push(v);
        }
        for v in reps {
            placed.push(v);
            used[v] = true;
            self.run(placed, used, code);
            used[v] = false;
            placed.pop();
        }
        code.pop();
    }
}

/// Canonical placement order. `colors` partition the vertices (colour is the
/// most significant part of the code); `fixed` vertices are placed first in
/// the given order.
pub(crate) fn canonical_order(m: &RelMatrix, colors: &[u32], fixed: &[usize]) -> (Vec<usize>, Vec<u32>) {
    let n = m.n();
    let inv: Vec<[u32; 3]> = (0..n)
        .map(|v| [colors[v], m.out_degree(v) as u32, m.in_degree(v) as u32])
        .collect();
    let mut s = Search { m, inv, best: None };
    let mut placed: Vec<usize> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    let mut code: Vec<Elem> = Vec::new();
    for &f in fixed {
        let e = s.element(&placed, f);
        code.push(e);
        placed.push(f);
        used[f] = true;
    }
    s.run(&mut placed, &mut used, &mut code);
    let (order, code) = s.best.expect("search reaches a leaf");
    let mut flat = vec![n as u32, fixed.len() as u32];
    for e in code {
        flat.push(e.len() as u32);
        flat.extend(e);
    }
    (order, flat)
}

fn relabel_map(vertices: &[VertexId], order: &[usize]) -> BTreeMap<VertexId, VertexId> {
    order
        .iter()
        .enumerate()
        .map(|(pos, &i)| (vertices[i], VertexId(pos as u32)))
        .collect()
}

/// Canonical form of a graph, relabelled onto `0..n`.
pub fn canonical_graph(g: &Graph) -> Graph {
    let m = RelMatrix::from_graph(g);
    let (order, _) = canonical_order(&m, &vec![0; g.vertex_count()], &[]);
    g.relabel(&relabel_map(g.vertices(), &order)).expect("bijective relabelling")
}

/// Canonical form of an orientation, relabelled onto `0..n`.
pub fn canonical_orientation(o: &Orientation) -> Orientation {
    let m = RelMatrix::from_orientation(o);
    let (order, _) = canonical_order(&m, &vec![0; o.vertex_count()], &[]);
    o.relabel(&relabel_map(o.vertices(), &order)).expect("bijective relabelling")
}

/// Isomorphism-invariant key of a structure with the given vertices held
/// fixed, in order. Two structures get equal keys exactly when some
/// isomorphism maps the fixed list of one onto the fixed list of the other.
pub fn iso_key(s: &Structure, fixed: &[VertexId]) -> Vec<u32> {
    let m = RelMatrix::from_structure(s);
    let vs = s.vertices();
    let mut colors = vec![0; vs.len()];
    let fixed_idx: Vec<usize> = fixed
        .iter()
        .map(|v| vs.binary_search(v).expect("fixed vertex belongs to the structure"))
        .collect();
    for &f in &fixed_idx {
        colors[f] = 1;
    }
    let kind = match s {
        Structure::Graph(_) => 0,
        Structure::Oriented(o) => o.k(),
    };
    let mut key = vec![kind];
    key.extend(canonical_order(&m, &colors, &fixed_idx).1);
    key
}

/// Whether two structures are isomorphic.
pub fn isomorphic(a: &Structure, b: &Structure) -> bool {
    a.vertex_count() == b.vertex_count() && iso_key(a, &[]) == iso_key(b, &[])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{cycle, graph_from_pair_mask};
    use std::collections::BTreeSet;

    fn brute_key(g: &Graph) -> Vec<bool> {
        // least adjacency string over all permutations
        let n = g.vertex_count();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut best: Option<Vec<bool>> = None;
        loop {
            let s: Vec<bool> = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .map(|(i, j)| g.has_edge_idx(perm[i], perm[j]))
                .collect();
            if best.as_ref().is_none_or(|b| s < *b) {
                best = Some(s);
            }
            // next permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
            perm.swap(i, j);
            perm[i + 1..].reverse();
        }
        best.unwrap()
    }

    #[test]
    fn canonical_keys_match_brute_force_classes_on_five_vertices() {
        let mut fast: BTreeSet<Vec<u32>> = BTreeSet::new();
        let mut slow: BTreeSet<Vec<bool>> = BTreeSet::new();
        let mut pairs: BTreeSet<(Vec<u32>, Vec<bool>)> = BTreeSet::new();
        for mask in 0..1u64 << 10 {
            let g = graph_from_pair_mask(5, mask);
            let f = iso_key(&Structure::Graph(g.clone()), &[]);
            let s = brute_key(&g);
            fast.insert(f.clone());
            slow.insert(s.clone());
            pairs.insert((f, s));
        }
        assert_eq!(fast.len(), 34);
        assert_eq!(slow.len(), 34);
        assert_eq!(pairs.len(), 34);
    }

    #[test]
    fn relabelled_cycle_has_same_canonical_form() {
        let c = cycle(6);
        let map: BTreeMap<VertexId, VertexId> =
            (0..6).map(|i| (VertexId(i), VertexId((i * 5 + 3) % 6 + 10))).collect();
        let r = c.relabel(&map).unwrap();
        assert_eq!(canonical_graph(&c), canonical_graph(&r));
    }

    #[test]
    fn fixed_vertices_distinguish_positions() {
        let p = Structure::Graph(crate::corpus::path(3));
        // an end vertex and the middle vertex are not related by any automorphism
        assert_ne!(iso_key(&p, &[VertexId(0)]), iso_key(&p, &[VertexId(1)]));
        assert_eq!(iso_key(&p, &[VertexId(0)]), iso_key(&p, &[VertexId(2)]));
    }

    #[test]
    fn orientation_direction_matters() {
        let a = Structure::Oriented(Orientation::from_ids(0..3, &[(0, 1), (0, 2)], 2));
        let b = Structure::Oriented(Orientation::from_ids(0..3, &[(1, 0), (2, 0)], 2));
        assert!(!isomorphic(&a, &b));
        let c = Structure::Oriented(Orientation::from_ids(0..3, &[(2, 0), (2, 1)], 2));
        assert!(isomorphic(&a, &c));
    }
}
