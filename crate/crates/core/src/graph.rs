//! Value-semantic graphs, orientations and embeddings.
//!
//! Vertex lists are kept sorted by id and edge/arc lists sorted
//! lexicographically, so iteration order is deterministic everywhere.
//! Structures are immutable: every "mutating" helper returns a new value.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for VertexId {
    fn from(v: u32) -> Self {
        VertexId(v)
    }
}

pub type VertexSet = BTreeSet<VertexId>;

/// Builds a vertex set from raw ids.
pub fn vset<I: IntoIterator<Item = u32>>(ids: I) -> VertexSet {
    ids.into_iter().map(VertexId).collect()
}

fn normalize_edge(u: VertexId, v: VertexId) -> (VertexId, VertexId) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

fn sorted_unique_vertices(vertices: impl IntoIterator<Item = VertexId>) -> Result<Vec<VertexId>> {
    let mut vs: Vec<VertexId> = vertices.into_iter().collect();
    vs.sort_unstable();
    let before = vs.len();
    vs.dedup();
    if vs.len() != before {
        return Err(Error::domain("duplicate vertex id"));
    }
    Ok(vs)
}

fn index_lookup(vertices: &[VertexId], v: VertexId) -> Option<usize> {
    vertices.binary_search(&v).ok()
}

/// Finite simple undirected loop-free graph.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawStructure", into = "RawStructure")]
pub struct Graph {
    vertices: Vec<VertexId>,
    edges: Vec<(VertexId, VertexId)>,
    adj: Vec<Vec<usize>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Eq for Graph {}

impl Graph {
    /// Validating constructor. Edges may be given in either orientation but
    /// must not repeat.
    pub fn new(
        vertices: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Self> {
        let vertices = sorted_unique_vertices(vertices)?;
        let mut es = Vec::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::domain(format!("loop at vertex {u}")));
            }
            if index_lookup(&vertices, u).is_none() || index_lookup(&vertices, v).is_none() {
                return Err(Error::domain(format!("edge {{{u},{v}}} uses an unknown vertex")));
            }
            es.push(normalize_edge(u, v));
        }
        es.sort_unstable();
        let before = es.len();
        es.dedup();
        if es.len() != before {
            return Err(Error::domain("duplicate edge"));
        }
        Ok(Self::from_sorted(vertices, es))
    }

    /// Convenience constructor over raw ids; panics on invalid input.
    /// Intended for fixtures and tests.
    pub fn from_ids(vertices: impl IntoIterator<Item = u32>, edges: &[(u32, u32)]) -> Self {
        Self::new(
            vertices.into_iter().map(VertexId),
            edges.iter().map(|&(u, v)| (VertexId(u), VertexId(v))),
        )
        .expect("invalid graph fixture")
    }

    /// Graph on vertices `0..n` with the given edges; panics on invalid input.
    pub fn on_range(n: u32, edges: &[(u32, u32)]) -> Self {
        Self::from_ids(0..n, edges)
    }

    pub fn empty() -> Self {
        Self::from_sorted(Vec::new(), Vec::new())
    }

    pub(crate) fn from_sorted(vertices: Vec<VertexId>, edges: Vec<(VertexId, VertexId)>) -> Self {
        let mut adj = vec![Vec::new(); vertices.len()];
        for &(u, v) in &edges {
            let iu = index_lookup(&vertices, u).expect("edge endpoint");
            let iv = index_lookup(&vertices, v).expect("edge endpoint");
            adj[iu].push(iv);
            adj[iv].push(iu);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph { vertices, edges, adj }
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.vertices.iter().copied().collect()
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.index_of(v).is_some()
    }

    pub fn index_of(&self, v: VertexId) -> Option<usize> {
        index_lookup(&self.vertices, v)
    }

    pub(crate) fn require_index(&self, v: VertexId) -> Result<usize> {
        self.index_of(v)
            .ok_or_else(|| Error::domain(format!("unknown vertex {v}")))
    }

    pub fn vertex_at(&self, i: usize) -> VertexId {
        self.vertices[i]
    }

    /// Neighbour indices of the vertex at index `i`, ascending.
    pub fn adjacent_indices(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        let list: &[usize] = match self.index_of(v) {
            Some(i) => &self.adj[i],
            None => &[],
        };
        list.iter().map(move |&j| self.vertices[j])
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.index_of(v).map_or(0, |i| self.adj[i].len())
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        match (self.index_of(u), self.index_of(v)) {
            (Some(iu), Some(iv)) => self.adj[iu].binary_search(&iv).is_ok(),
            _ => false,
        }
    }

    #[cfg(test)]
    pub(crate) fn has_edge_idx(&self, i: usize, j: usize) -> bool {
        self.adj[i].binary_search(&j).is_ok()
    }

    pub(crate) fn edge_indices(&self) -> Vec<(usize, usize)> {
        self.edges
            .iter()
            .map(|&(u, v)| (self.index_of(u).unwrap(), self.index_of(v).unwrap()))
            .collect()
    }

    /// Largest vertex id, if any.
    pub fn max_id(&self) -> Option<VertexId> {
        self.vertices.last().copied()
    }

    /// Convert a vertex set into a membership vector over indices.
    pub(crate) fn membership(&self, members: &VertexSet) -> Result<Vec<bool>> {
        let mut inside = vec![false; self.vertex_count()];
        for &v in members {
            inside[self.require_index(v)?] = true;
        }
        Ok(inside)
    }

    /// Number of edges with both endpoints in `members`.
    pub fn edges_within(&self, members: &VertexSet) -> Result<usize> {
        let inside = self.membership(members)?;
        Ok(self.edges_within_mask(&inside))
    }

    pub(crate) fn edges_within_mask(&self, inside: &[bool]) -> usize {
        self.edge_indices_iter()
            .filter(|&(i, j)| inside[i] && inside[j])
            .count()
    }

    fn edge_indices_iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(i, ns)| ns.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
    }

    /// Full induced subgraph on `members`.
    pub fn induced_subgraph(&self, members: &VertexSet) -> Result<Graph> {
        let inside = self.membership(members)?;
        let vertices: Vec<VertexId> = members.iter().copied().collect();
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| {
                inside[self.index_of(u).unwrap()] && inside[self.index_of(v).unwrap()]
            })
            .copied()
            .collect();
        Ok(Graph::from_sorted(vertices, edges))
    }

    /// Returns a copy with an extra edge.
    pub fn with_edge(&self, u: VertexId, v: VertexId) -> Result<Graph> {
        Graph::new(
            self.vertices.iter().copied(),
            self.edges.iter().copied().chain(std::iter::once((u, v))),
        )
    }

    /// Returns a copy with an extra isolated vertex.
    pub fn with_vertex(&self, v: VertexId) -> Result<Graph> {
        Graph::new(
            self.vertices.iter().copied().chain(std::iter::once(v)),
            self.edges.iter().copied(),
        )
    }

    /// Renames vertices through an injective map covering every vertex.
    pub fn relabel(&self, map: &BTreeMap<VertexId, VertexId>) -> Result<Graph> {
        let image = |v: VertexId| {
            map.get(&v)
                .copied()
                .ok_or_else(|| Error::domain(format!("relabel map misses vertex {v}")))
        };
        let vertices = self.vertices.iter().map(|&v| image(v)).collect::<Result<Vec<_>>>()?;
        let edges = self
            .edges
            .iter()
            .map(|&(u, v)| Ok((image(u)?, image(v)?)))
            .collect::<Result<Vec<_>>>()?;
        Graph::new(vertices, edges)
    }

    /// Connected components as vertex sets, ordered by least member.
    pub fn components(&self) -> Vec<VertexSet> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut comp = VertexSet::new();
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(i) = stack.pop() {
                comp.insert(self.vertices[i]);
                for &j in &self.adj[i] {
                    if !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// Length of a shortest cycle, or `None` for forests.
    pub fn girth(&self) -> Option<usize> {
        let n = self.vertex_count();
        let mut best: Option<usize> = None;
        for s in 0..n {
            let mut dist = vec![usize::MAX; n];
            let mut parent = vec![usize::MAX; n];
            let mut queue = std::collections::VecDeque::new();
            dist[s] = 0;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else if parent[u] != w {
                        let len = dist[u] + dist[w] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }
}

/// Asymmetric loop-free digraph whose out-degrees are bounded by `k`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawStructure", into = "RawStructure")]
pub struct Orientation {
    vertices: Vec<VertexId>,
    arcs: Vec<(VertexId, VertexId)>,
    k: u32,
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
}

impl PartialEq for Orientation {
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k && self.vertices == other.vertices && self.arcs == other.arcs
    }
}

impl Eq for Orientation {}

impl Orientation {
    /// Validating constructor: rejects loops, unknown endpoints, duplicate or
    /// opposite arcs, and any out-degree above `k`.
    pub fn new(
        vertices: impl IntoIterator<Item = VertexId>,
        arcs: impl IntoIterator<Item = (VertexId, VertexId)>,
        k: u32,
    ) -> Result<Self> {
        if k == 0 {
            return Err(Error::domain("out-degree cap k must be positive"));
        }
        let vertices = sorted_unique_vertices(vertices)?;
        let mut arcs: Vec<(VertexId, VertexId)> = arcs.into_iter().collect();
        for &(u, v) in &arcs {
            if u == v {
                return Err(Error::domain(format!("loop at vertex {u}")));
            }
            if index_lookup(&vertices, u).is_none() || index_lookup(&vertices, v).is_none() {
                return Err(Error::domain(format!("arc ({u},{v}) uses an unknown vertex")));
            }
        }
        arcs.sort_unstable();
        let before = arcs.len();
        arcs.dedup();
        if arcs.len() != before {
            return Err(Error::domain("duplicate arc"));
        }
        for &(u, v) in &arcs {
            if arcs.binary_search(&(v, u)).is_ok() {
                return Err(Error::domain(format!("arcs ({u},{v}) and ({v},{u}) both present")));
            }
        }
        let o = Self::from_sorted(vertices, arcs, k);
        for (i, list) in o.out.iter().enumerate() {
            if list.len() > k as usize {
                return Err(Error::domain(format!(
                    "vertex {} has out-degree {} > k = {}",
                    o.vertices[i],
                    list.len(),
                    k
                )));
            }
        }
        Ok(o)
    }

    /// Fixture constructor over raw ids; panics on invalid input.
    pub fn from_ids(vertices: impl IntoIterator<Item = u32>, arcs: &[(u32, u32)], k: u32) -> Self {
        Self::new(
            vertices.into_iter().map(VertexId),
            arcs.iter().map(|&(u, v)| (VertexId(u), VertexId(v))),
            k,
        )
        .expect("invalid orientation fixture")
    }

    pub(crate) fn from_sorted(vertices: Vec<VertexId>, arcs: Vec<(VertexId, VertexId)>, k: u32) -> Self {
        let n = vertices.len();
        let mut out = vec![Vec::new(); n];
        let mut inn = vec![Vec::new(); n];
        for &(u, v) in &arcs {
            let iu = index_lookup(&vertices, u).expect("arc tail");
            let iv = index_lookup(&vertices, v).expect("arc head");
            out[iu].push(iv);
            inn[iv].push(iu);
        }
        for list in out.iter_mut().chain(inn.iter_mut()) {
            list.sort_unstable();
        }
        Orientation { vertices, arcs, k, out, inn }
    }

    /// Orientation of `g` taking the edge with index `e` from `tails[e]`.
    pub(crate) fn from_tails(g: &Graph, tails: &[usize], k: u32) -> Self {
        let mut arcs: Vec<(VertexId, VertexId)> = g
            .edge_indices()
            .iter()
            .zip(tails)
            .map(|(&(i, j), &t)| {
                let (a, b) = if t == i { (i, j) } else { (j, i) };
                (g.vertex_at(a), g.vertex_at(b))
            })
            .collect();
        arcs.sort_unstable();
        Orientation::from_sorted(g.vertices().to_vec(), arcs, k)
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.vertices.iter().copied().collect()
    }

    pub fn arcs(&self) -> &[(VertexId, VertexId)] {
        &self.arcs
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn index_of(&self, v: VertexId) -> Option<usize> {
        index_lookup(&self.vertices, v)
    }

    pub(crate) fn require_index(&self, v: VertexId) -> Result<usize> {
        self.index_of(v)
            .ok_or_else(|| Error::domain(format!("unknown vertex {v}")))
    }

    pub fn vertex_at(&self, i: usize) -> VertexId {
        self.vertices[i]
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.index_of(v).is_some()
    }

    pub fn has_arc(&self, u: VertexId, v: VertexId) -> bool {
        self.arcs.binary_search(&(u, v)).is_ok()
    }

    pub(crate) fn out_indices(&self, i: usize) -> &[usize] {
        &self.out[i]
    }

    pub(crate) fn in_indices(&self, i: usize) -> &[usize] {
        &self.inn[i]
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.index_of(v).map_or(0, |i| self.out[i].len())
    }

    pub fn successors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        let list: &[usize] = match self.index_of(v) {
            Some(i) => &self.out[i],
            None => &[],
        };
        list.iter().map(move |&j| self.vertices[j])
    }

    /// Symmetrises the arcs.
    pub fn undirected_reduct(&self) -> Graph {
        let mut edges: Vec<_> = self.arcs.iter().map(|&(u, v)| normalize_edge(u, v)).collect();
        edges.sort_unstable();
        Graph::from_sorted(self.vertices.clone(), edges)
    }

    /// Whether this orientation's reduct is exactly `g`.
    pub fn orients(&self, g: &Graph) -> bool {
        self.vertices == g.vertices() && self.undirected_reduct().edges() == g.edges()
    }

    /// Induced sub-orientation on `members`.
    pub fn induced(&self, members: &VertexSet) -> Result<Orientation> {
        for &v in members {
            self.require_index(v)?;
        }
        let arcs = self
            .arcs
            .iter()
            .filter(|(u, v)| members.contains(u) && members.contains(v))
            .copied()
            .collect();
        Ok(Orientation::from_sorted(members.iter().copied().collect(), arcs, self.k))
    }

    /// Returns a copy with the direction of the arc between `u` and `v` reversed.
    pub fn flip(&self, u: VertexId, v: VertexId) -> Result<Orientation> {
        let (from, to) = if self.has_arc(u, v) {
            ((u, v), (v, u))
        } else if self.has_arc(v, u) {
            ((v, u), (u, v))
        } else {
            return Err(Error::domain(format!("no arc between {u} and {v}")));
        };
        Orientation::new(
            self.vertices.iter().copied(),
            self.arcs.iter().map(|&a| if a == from { to } else { a }),
            self.k,
        )
    }

    pub fn relabel(&self, map: &BTreeMap<VertexId, VertexId>) -> Result<Orientation> {
        let image = |v: VertexId| {
            map.get(&v)
                .copied()
                .ok_or_else(|| Error::domain(format!("relabel map misses vertex {v}")))
        };
        let vertices = self.vertices.iter().map(|&v| image(v)).collect::<Result<Vec<_>>>()?;
        let arcs = self
            .arcs
            .iter()
            .map(|&(u, v)| Ok((image(u)?, image(v)?)))
            .collect::<Result<Vec<_>>>()?;
        Orientation::new(vertices, arcs, self.k)
    }

    /// Same arcs with a different cap; fails if some out-degree exceeds it.
    pub fn with_k(&self, k: u32) -> Result<Orientation> {
        Orientation::new(self.vertices.iter().copied(), self.arcs.iter().copied(), k)
    }
}

/// Free function form of [`Graph::induced_subgraph`].
pub fn induced_subgraph(parent: &Graph, members: &VertexSet) -> Result<Graph> {
    parent.induced_subgraph(members)
}

/// Free function form of [`Orientation::undirected_reduct`].
pub fn undirected_reduct(o: &Orientation) -> Graph {
    o.undirected_reduct()
}

/// Either kind of structure the library operates on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Structure {
    Graph(Graph),
    Oriented(Orientation),
}

impl Structure {
    pub fn vertices(&self) -> &[VertexId] {
        match self {
            Structure::Graph(g) => g.vertices(),
            Structure::Oriented(o) => o.vertices(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices().len()
    }

    /// The undirected graph underlying the structure.
    pub fn graph(&self) -> Graph {
        match self {
            Structure::Graph(g) => g.clone(),
            Structure::Oriented(o) => o.undirected_reduct(),
        }
    }

    pub fn as_orientation(&self) -> Option<&Orientation> {
        match self {
            Structure::Oriented(o) => Some(o),
            Structure::Graph(_) => None,
        }
    }

    pub fn induced(&self, members: &VertexSet) -> Result<Structure> {
        Ok(match self {
            Structure::Graph(g) => Structure::Graph(g.induced_subgraph(members)?),
            Structure::Oriented(o) => Structure::Oriented(o.induced(members)?),
        })
    }

    pub fn relabel(&self, map: &BTreeMap<VertexId, VertexId>) -> Result<Structure> {
        Ok(match self {
            Structure::Graph(g) => Structure::Graph(g.relabel(map)?),
            Structure::Oriented(o) => Structure::Oriented(o.relabel(map)?),
        })
    }

    /// Whether there is a relation (edge or arc, respecting direction) from `u` to `v`.
    pub(crate) fn related(&self, u: VertexId, v: VertexId) -> bool {
        match self {
            Structure::Graph(g) => g.has_edge(u, v),
            Structure::Oriented(o) => o.has_arc(u, v),
        }
    }

    pub fn canonical_encode(&self) -> Vec<u8> {
        match self {
            Structure::Graph(g) => canonical_encode_graph(g),
            Structure::Oriented(o) => canonical_encode_orientation(o),
        }
    }
}

impl From<Graph> for Structure {
    fn from(g: Graph) -> Self {
        Structure::Graph(g)
    }
}

impl From<Orientation> for Structure {
    fn from(o: Orientation) -> Self {
        Structure::Oriented(o)
    }
}

impl Serialize for Structure {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Structure::Graph(g) => g.serialize(s),
            Structure::Oriented(o) => o.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Structure {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawStructure::deserialize(d)?;
        raw.into_structure().map_err(serde::de::Error::custom)
    }
}

/// Wire form shared by graphs and orientations.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawStructure {
    pub vertices: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<[u32; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arcs: Option<Vec<[u32; 2]>>,
}

impl RawStructure {
    fn into_structure(self) -> Result<Structure> {
        let vertices = self.vertices.iter().map(|&v| VertexId(v));
        match (self.arcs, self.k) {
            (Some(arcs), Some(k)) => {
                let o = Orientation::new(
                    vertices,
                    arcs.iter().map(|&[u, v]| (VertexId(u), VertexId(v))),
                    k,
                )?;
                if let Some(edges) = self.edges {
                    let g = Graph::new(
                        o.vertices().iter().copied(),
                        edges.iter().map(|&[u, v]| (VertexId(u), VertexId(v))),
                    )?;
                    if !o.orients(&g) {
                        return Err(Error::domain("\"edges\" does not match the reduct of \"arcs\""));
                    }
                }
                Ok(Structure::Oriented(o))
            }
            (Some(_), None) => Err(Error::domain("orientation is missing \"k\"")),
            (None, Some(_)) => Err(Error::domain("\"k\" given without \"arcs\"")),
            (None, None) => {
                let edges = self.edges.unwrap_or_default();
                Ok(Structure::Graph(Graph::new(
                    vertices,
                    edges.iter().map(|&[u, v]| (VertexId(u), VertexId(v))),
                )?))
            }
        }
    }
}

fn raw_pairs(pairs: &[(VertexId, VertexId)]) -> Vec<[u32; 2]> {
    pairs.iter().map(|&(u, v)| [u.0, v.0]).collect()
}

impl From<Graph> for RawStructure {
    fn from(g: Graph) -> Self {
        RawStructure {
            vertices: g.vertices.iter().map(|v| v.0).collect(),
            edges: Some(raw_pairs(&g.edges)),
            k: None,
            arcs: None,
        }
    }
}

impl From<Orientation> for RawStructure {
    fn from(o: Orientation) -> Self {
        let reduct = o.undirected_reduct();
        RawStructure {
            vertices: o.vertices.iter().map(|v| v.0).collect(),
            edges: Some(raw_pairs(reduct.edges())),
            k: Some(o.k),
            arcs: Some(raw_pairs(&o.arcs)),
        }
    }
}

impl TryFrom<RawStructure> for Graph {
    type Error = Error;

    fn try_from(raw: RawStructure) -> Result<Self> {
        match raw.into_structure()? {
            Structure::Graph(g) => Ok(g),
            Structure::Oriented(_) => Err(Error::domain("expected a graph, found an orientation")),
        }
    }
}

impl TryFrom<RawStructure> for Orientation {
    type Error = Error;

    fn try_from(raw: RawStructure) -> Result<Self> {
        match raw.into_structure()? {
            Structure::Oriented(o) => Ok(o),
            Structure::Graph(_) => Err(Error::domain("expected an orientation, found a graph")),
        }
    }
}

/// Canonical JSON bytes of a graph.
pub fn canonical_encode_graph(g: &Graph) -> Vec<u8> {
    serde_json::to_vec(g).expect("graph serialisation is infallible")
}

/// Canonical JSON bytes of an orientation.
pub fn canonical_encode_orientation(o: &Orientation) -> Vec<u8> {
    serde_json::to_vec(o).expect("orientation serialisation is infallible")
}

/// Inverse of [`Structure::canonical_encode`].
pub fn canonical_decode(bytes: &[u8]) -> Result<Structure> {
    serde_json::from_slice(bytes).map_err(|e| Error::domain(format!("decode: {e}")))
}

/// An injective vertex map that preserves and reflects the relation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Embedding {
    pub map: BTreeMap<VertexId, VertexId>,
}

impl Embedding {
    pub fn new(map: BTreeMap<VertexId, VertexId>) -> Self {
        Embedding { map }
    }

    pub fn identity(vertices: impl IntoIterator<Item = VertexId>) -> Self {
        Embedding { map: vertices.into_iter().map(|v| (v, v)).collect() }
    }

    pub fn apply(&self, v: VertexId) -> Option<VertexId> {
        self.map.get(&v).copied()
    }

    pub fn image(&self) -> VertexSet {
        self.map.values().copied().collect()
    }

    /// Checks injectivity, domain coverage and preservation/reflection of the
    /// relation between `source` and `target` (which must be of the same kind).
    pub fn validate(&self, source: &Structure, target: &Structure) -> Result<()> {
        match (source, target) {
            (Structure::Graph(_), Structure::Graph(_)) => {}
            (Structure::Oriented(a), Structure::Oriented(b)) if a.k() == b.k() => {}
            _ => return Err(Error::domain("embedding between structures of different kinds")),
        }
        if self.map.len() != source.vertex_count()
            || source.vertices().iter().any(|v| !self.map.contains_key(v))
        {
            return Err(Error::domain("embedding domain differs from source vertices"));
        }
        let image = self.image();
        if image.len() != self.map.len() {
            return Err(Error::domain("embedding is not injective"));
        }
        if let Some(v) = image.iter().find(|v| !target.vertices().contains(v)) {
            return Err(Error::domain(format!("embedding image {v} not in target")));
        }
        for (&u, &fu) in &self.map {
            for (&v, &fv) in &self.map {
                if u != v && source.related(u, v) != target.related(fu, fv) {
                    return Err(Error::domain(format!(
                        "embedding does not preserve the relation on ({u},{v})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn compose(&self, then: &Embedding) -> Option<Embedding> {
        self.map
            .iter()
            .map(|(&u, &v)| then.apply(v).map(|w| (u, w)))
            .collect::<Option<BTreeMap<_, _>>>()
            .map(Embedding::new)
    }
}

/// A vertex subset of a graph together with its parent.
#[derive(Clone, Debug)]
pub struct SubsetHandle<'a> {
    parent: &'a Graph,
    members: VertexSet,
}

impl<'a> SubsetHandle<'a> {
    pub fn new(parent: &'a Graph, members: VertexSet) -> Result<Self> {
        for &v in &members {
            parent.require_index(v)?;
        }
        Ok(SubsetHandle { parent, members })
    }

    pub fn parent(&self) -> &Graph {
        self.parent
    }

    pub fn members(&self) -> &VertexSet {
        &self.members
    }

    pub fn induced(&self) -> Graph {
        self.parent
            .induced_subgraph(&self.members)
            .expect("members validated at construction")
    }
}
