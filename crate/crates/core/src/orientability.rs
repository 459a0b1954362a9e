//! k-sparsity versus k-orientability, constrained orientation and the space
//! of all k-orientations of a graph.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Orientation, VertexId, VertexSet};
use crate::matching::SlotMatcher;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparsityVerdict {
    pub sparse: bool,
    pub witness_orientation: Option<Orientation>,
    pub violator: Option<VertexSet>,
}

/// Restrictions on an orientation search.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcConstraint {
    pub forced_arcs: BTreeSet<(VertexId, VertexId)>,
    /// Every edge with exactly one endpoint in this set must point into it.
    pub inward_set: Option<VertexSet>,
}

impl ArcConstraint {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn inward(set: VertexSet) -> Self {
        ArcConstraint { forced_arcs: BTreeSet::new(), inward_set: Some(set) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrientationSpace {
    pub graph: Graph,
    pub k: u32,
    pub points: Vec<Orientation>,
    pub truncated: bool,
}

fn check_k(k: u32) -> Result<()> {
    if k == 0 {
        Err(Error::domain("k must be at least 1"))
    } else {
        Ok(())
    }
}

/// Decides k-sparsity by matching edges into k slots per vertex.
///
/// A complete matching is returned as the witness orientation (an edge is
/// directed away from the vertex owning its slot). Otherwise the first edge
/// that cannot be placed yields the violator: the vertices reachable from it
/// by alternating paths, which span more than `k` times their number of edges.
pub fn check_sparsity(g: &Graph, k: u32) -> Result<SparsityVerdict> {
    check_k(k)?;
    let n = g.vertex_count();
    let mut m = SlotMatcher::new(n, g.edge_indices(), vec![k as usize; n]);
    for e in 0..g.edge_count() {
        if let Err(seen) = m.insert(e) {
            let violator: VertexSet = (0..n).filter(|&i| seen[i]).map(|i| g.vertex_at(i)).collect();
            return Ok(SparsityVerdict { sparse: false, witness_orientation: None, violator: Some(violator) });
        }
    }
    let tails = m.tails().expect("all edges matched");
    Ok(SparsityVerdict {
        sparse: true,
        witness_orientation: Some(Orientation::from_tails(g, &tails, k)),
        violator: None,
    })
}

pub fn is_k_sparse(g: &Graph, k: u32) -> Result<bool> {
    Ok(check_sparsity(g, k)?.sparse)
}

/// Builds the matcher for `g` with the constraint applied; `None` when some
/// edge has no admissible tail at all.
fn constrained_matcher(g: &Graph, k: u32, c: &ArcConstraint) -> Result<Option<SlotMatcher>> {
    check_k(k)?;
    let n = g.vertex_count();
    for &(u, v) in &c.forced_arcs {
        if !g.has_edge(u, v) {
            return Err(Error::domain(format!("forced arc ({u},{v}) is not an edge")));
        }
        if c.forced_arcs.contains(&(v, u)) {
            return Err(Error::domain(format!("arcs ({u},{v}) and ({v},{u}) both forced")));
        }
    }
    let inward = match &c.inward_set {
        Some(s) => Some(g.membership(s)?),
        None => None,
    };
    let ends = g.edge_indices();
    let mut m = SlotMatcher::new(n, ends.clone(), vec![k as usize; n]);
    for (e, &(i, j)) in ends.iter().enumerate() {
        let (vi, vj) = (g.vertex_at(i), g.vertex_at(j));
        let mut allow = [true, true];
        if c.forced_arcs.contains(&(vi, vj)) {
            allow = [true, false];
        } else if c.forced_arcs.contains(&(vj, vi)) {
            allow = [false, true];
        }
        if let Some(inside) = &inward {
            if inside[i] && !inside[j] {
                allow[0] = false;
            } else if inside[j] && !inside[i] {
                allow[1] = false;
            }
        }
        if !allow[0] && !allow[1] {
            return Ok(None);
        }
        m.restrict(e, allow[0], allow[1]);
    }
    Ok(Some(m))
}

/// Finds a k-orientation satisfying `c`, or `None` when none exists.
///
/// Edges are placed in lexicographic order and each tries its lower endpoint
/// first, so an unconstrained single edge is directed from its lower id.
pub fn orient(g: &Graph, k: u32, c: &ArcConstraint) -> Result<Option<Orientation>> {
    let Some(mut m) = constrained_matcher(g, k, c)? else {
        return Ok(None);
    };
    for e in 0..g.edge_count() {
        if m.insert(e).is_err() {
            return Ok(None);
        }
    }
    let tails = m.tails().expect("all edges matched");
    Ok(Some(Orientation::from_tails(g, &tails, k)))
}

struct Enumerator<'a> {
    ends: &'a [(usize, usize)],
    k: usize,
    limit: usize,
}

impl Enumerator<'_> {
    fn go(&self, e: usize, load: &mut [usize], tails: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if out.len() >= self.limit {
            return;
        }
        if e == self.ends.len() {
            out.push(tails.clone());
            return;
        }
        let (a, b) = self.ends[e];
        for t in [a, b] {
            if load[t] < self.k {
                load[t] += 1;
                tails.push(t);
                self.go(e + 1, load, tails, out);
                tails.pop();
                load[t] -= 1;
            }
        }
    }
}

/// All k-orientations of `g` in lexicographic order of tail choices (each
/// edge, in edge order, tries its lower endpoint first). With a cap, at most
/// `cap` points are returned and `truncated` reports whether more exist.
pub fn enumerate_orientations(g: &Graph, k: u32, cap: Option<usize>) -> Result<OrientationSpace> {
    check_k(k)?;
    let ends = g.edge_indices();
    let limit = cap.map_or(usize::MAX, |c| c.saturating_add(1));
    let en = Enumerator { ends: &ends, k: k as usize, limit };
    // Split the search tree on its first few edges; branches are merged in order.
    let split = ends.len().min(6);
    let mut prefixes: Vec<(Vec<usize>, Vec<usize>)> = vec![(Vec::new(), vec![0; g.vertex_count()])];
    for &(a, b) in &ends[..split] {
        let mut next = Vec::new();
        for (tails, load) in prefixes {
            for t in [a, b] {
                if load[t] < en.k {
                    let mut tl = tails.clone();
                    tl.push(t);
                    let mut ld = load.clone();
                    ld[t] += 1;
                    next.push((tl, ld));
                }
            }
        }
        prefixes = next;
    }
    let branches: Vec<Vec<Vec<usize>>> = prefixes
        .into_par_iter()
        .map(|(mut tails, mut load)| {
            let mut out = Vec::new();
            en.go(split, &mut load, &mut tails, &mut out);
            out
        })
        .collect();
    let mut points = Vec::new();
    let mut truncated = false;
    'outer: for branch in branches {
        for tails in branch {
            if cap.is_some_and(|c| points.len() >= c) {
                truncated = true;
                break 'outer;
            }
            points.push(Orientation::from_tails(g, &tails, k));
        }
    }
    Ok(OrientationSpace { graph: g.clone(), k, points, truncated })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{complete, cycle, graphs_up_to_iso, path};
    use crate::graph::vset;

    fn sparse_by_subsets(g: &Graph, k: u32) -> bool {
        let n = g.vertex_count();
        (0u32..1 << n).all(|mask| {
            let inside: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
            g.edges_within_mask(&inside) <= k as usize * mask.count_ones() as usize
        })
    }

    fn valid_witness(g: &Graph, k: u32, v: &SparsityVerdict) -> bool {
        if v.sparse {
            let o = v.witness_orientation.as_ref().unwrap();
            o.orients(g) && o.vertices().iter().all(|&x| o.out_degree(x) <= k as usize)
        } else {
            let s = v.violator.as_ref().unwrap();
            g.edges_within(s).unwrap() > k as usize * s.len()
        }
    }

    #[test]
    fn k4_is_not_1_sparse() {
        let v = check_sparsity(&complete(4), 1).unwrap();
        assert!(!v.sparse);
        assert_eq!(v.violator.unwrap(), vset(0..4));
    }

    #[test]
    fn paths_are_1_sparse() {
        let v = check_sparsity(&path(6), 1).unwrap();
        assert!(v.sparse);
        assert!(valid_witness(&path(6), 1, &v));
    }

    #[test]
    fn k5_is_2_sparse_with_all_outdegrees_two() {
        let g = complete(5);
        assert!(sparse_by_subsets(&g, 2));
        let v = check_sparsity(&g, 2).unwrap();
        let o = v.witness_orientation.unwrap();
        assert!(o.vertices().iter().all(|&x| o.out_degree(x) == 2));
    }

    #[test]
    fn zero_k_is_rejected() {
        assert!(check_sparsity(&path(2), 0).is_err());
    }

    #[test]
    fn matching_agrees_with_subset_definition_up_to_six_vertices() {
        for n in 0..=6 {
            for g in graphs_up_to_iso(n) {
                for k in 1..=3 {
                    let v = check_sparsity(&g, k).unwrap();
                    assert_eq!(v.sparse, sparse_by_subsets(&g, k));
                    assert!(valid_witness(&g, k, &v));
                }
            }
        }
    }

    #[test]
    fn single_edge_is_directed_from_lower_id() {
        let o = orient(&path(2), 1, &ArcConstraint::none()).unwrap().unwrap();
        assert_eq!(o.arcs(), &[(VertexId(0), VertexId(1))]);
    }

    #[test]
    fn c5_with_k1_gets_a_cyclic_orientation() {
        let o = orient(&cycle(5), 1, &ArcConstraint::none()).unwrap().unwrap();
        assert!(o.vertices().iter().all(|&x| o.out_degree(x) == 1));
    }

    #[test]
    fn inward_set_forces_direction() {
        let o = orient(&path(2), 2, &ArcConstraint::inward(vset([0]))).unwrap().unwrap();
        assert_eq!(o.arcs(), &[(VertexId(1), VertexId(0))]);
    }

    #[test]
    fn forced_arcs_are_respected_or_reported() {
        let mut c = ArcConstraint::none();
        c.forced_arcs.insert((VertexId(1), VertexId(0)));
        let o = orient(&path(2), 1, &c).unwrap().unwrap();
        assert!(o.has_arc(VertexId(1), VertexId(0)));
        c.forced_arcs.insert((VertexId(0), VertexId(1)));
        assert!(orient(&path(2), 1, &c).is_err());
        let mut bad = ArcConstraint::none();
        bad.forced_arcs.insert((VertexId(0), VertexId(2)));
        assert!(orient(&path(3), 1, &bad).is_err());
        // both edges of a path forced out of the middle exceed k = 1
        let mut tight = ArcConstraint::none();
        tight.forced_arcs.insert((VertexId(1), VertexId(0)));
        tight.forced_arcs.insert((VertexId(1), VertexId(2)));
        assert_eq!(orient(&path(3), 1, &tight).unwrap(), None);
    }

    fn unpruned_count(g: &Graph, k: u32) -> usize {
        let ends = g.edge_indices();
        (0u64..1 << ends.len())
            .filter(|mask| {
                let mut load = vec![0u32; g.vertex_count()];
                for (e, &(a, b)) in ends.iter().enumerate() {
                    load[if mask >> e & 1 == 0 { a } else { b }] += 1;
                }
                load.iter().all(|&l| l <= k)
            })
            .count()
    }

    #[test]
    fn orientation_counts_of_c5() {
        assert_eq!(enumerate_orientations(&cycle(5), 2, None).unwrap().points.len(), 32);
        assert_eq!(enumerate_orientations(&cycle(5), 1, None).unwrap().points.len(), 2);
        assert_eq!(unpruned_count(&cycle(5), 1), 2);
        let empty = enumerate_orientations(&Graph::on_range(3, &[]), 2, None).unwrap();
        assert_eq!(empty.points.len(), 1);
        assert!(empty.points[0].arcs().is_empty());
    }

    #[test]
    fn enumeration_matches_unpruned_filter() {
        for g in graphs_up_to_iso(5) {
            for k in 1..=2 {
                let space = enumerate_orientations(&g, k, None).unwrap();
                assert_eq!(space.points.len(), unpruned_count(&g, k));
                let distinct: BTreeSet<_> = space.points.iter().map(|o| o.arcs().to_vec()).collect();
                assert_eq!(distinct.len(), space.points.len());
            }
        }
    }

    #[test]
    fn cap_truncates() {
        let s = enumerate_orientations(&cycle(5), 2, Some(10)).unwrap();
        assert_eq!(s.points.len(), 10);
        assert!(s.truncated);
        let full = enumerate_orientations(&cycle(5), 2, Some(32)).unwrap();
        assert!(!full.truncated);
        assert_eq!(full.points[..10], s.points[..]);
    }
}
