//! The action of Aut(Γ) on the orientation space, and out-degree counting
//! over the whole space.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::automorphism::automorphisms_with_limit;
use super::DEFAULT_VERTEX_LIMIT;
use crate::error::{Error, Result};
use crate::graph::{canonical_encode_orientation, Graph, Orientation, VertexId};
use crate::orientability::{enumerate_orientations, OrientationSpace};

/// `orbits[i]` lists point indices in ascending order; `representatives[i]`
/// is the member of orbit `i` with least canonical encoding. Orbits are
/// sorted by their least point index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitPartition {
    pub space: OrientationSpace,
    pub orbits: Vec<Vec<usize>>,
    pub representatives: Vec<usize>,
    pub group_order: u128,
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

pub fn orientation_orbits(g: &Graph, k: u32) -> Result<OrbitPartition> {
    orientation_orbits_with_limit(g, k, DEFAULT_VERTEX_LIMIT)
}

pub fn orientation_orbits_with_limit(g: &Graph, k: u32, limit: usize) -> Result<OrbitPartition> {
    let group = automorphisms_with_limit(g, limit)?;
    let space = enumerate_orientations(g, k, None)?;
    let index: HashMap<&[(VertexId, VertexId)], usize> =
        space.points.iter().enumerate().map(|(i, o)| (o.arcs(), i)).collect();
    let n = space.points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    for gen in &group.generators {
        let image = |v: VertexId| gen[g.index_of(v).expect("vertex of the graph")];
        for (i, o) in space.points.iter().enumerate() {
            let moved = Orientation::new(o.vertices().iter().copied(), o.arcs().iter().map(|&(u, v)| (image(u), image(v))), k)?;
            let j = index[moved.arcs()];
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        let r = find(&mut parent, i);
        by_root[r].push(i);
    }
    let orbits: Vec<Vec<usize>> = by_root.into_iter().filter(|o| !o.is_empty()).collect();
    let representatives = orbits
        .iter()
        .map(|o| *o.iter().min_by_key(|&&i| canonical_encode_orientation(&space.points[i])).expect("non-empty orbit"))
        .collect();
    Ok(OrbitPartition { space, orbits, representatives, group_order: group.order })
}

/// How often `a` points to each listed neighbour across the orientation space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirectionReport {
    pub points: usize,
    /// Largest number of listed neighbours that `a` points to in one orientation.
    pub max_count: usize,
    /// Orientations containing the arc `(a, b_i)`.
    pub arc_counts: Vec<usize>,
    /// `arc_counts[i] / points`.
    pub frequencies: Vec<f64>,
    pub frequency_sum: f64,
    /// `max_count <= k` and `sum(arc_counts) <= k * points`.
    pub within_bound: bool,
}

pub fn direction_count_check(g: &Graph, k: u32, a: VertexId, neighbors: &[VertexId]) -> Result<DirectionReport> {
    if !g.contains(a) {
        return Err(Error::domain(format!("unknown vertex {a}")));
    }
    if let Some(b) = neighbors.iter().find(|&&b| !g.has_edge(a, b)) {
        return Err(Error::domain(format!("{b} is not a neighbour of {a}")));
    }
    let space = enumerate_orientations(g, k, None)?;
    let mut arc_counts = vec![0usize; neighbors.len()];
    let mut max_count = 0;
    for o in &space.points {
        let mut c = 0;
        for (i, &b) in neighbors.iter().enumerate() {
            if o.has_arc(a, b) {
                arc_counts[i] += 1;
                c += 1;
            }
        }
        max_count = max_count.max(c);
    }
    let points = space.points.len();
    let frequencies: Vec<f64> = arc_counts.iter().map(|&c| c as f64 / points as f64).collect();
    let total: usize = arc_counts.iter().sum();
    Ok(DirectionReport {
        points,
        max_count,
        frequency_sum: frequencies.iter().sum(),
        frequencies,
        arc_counts,
        within_bound: max_count <= k as usize && total <= k as usize * points,
    })
}
