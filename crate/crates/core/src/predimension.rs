//! Predimension, roots, successor closures, strong subsets and d-closure.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Orientation, VertexId, VertexSet};
use crate::matching::SlotMatcher;
use crate::orientability::{check_sparsity, orient, ArcConstraint};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredimensionReport {
    pub subset: VertexSet,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub delta: i64,
}

/// `k|A| - |R^A|` for the induced subgraph on `subset`.
pub fn delta(g: &Graph, subset: &VertexSet, k: u32) -> Result<PredimensionReport> {
    let edge_count = g.edges_within(subset)?;
    Ok(PredimensionReport {
        subset: subset.clone(),
        vertex_count: subset.len(),
        edge_count,
        delta: i64::from(k) * subset.len() as i64 - edge_count as i64,
    })
}

pub(crate) fn delta_mask(g: &Graph, inside: &[bool], k: u32) -> i64 {
    let count = inside.iter().filter(|&&b| b).count() as i64;
    i64::from(k) * count - g.edges_within_mask(inside) as i64
}

/// Vertices of out-degree below `k`, with multiplicity `k - outdeg`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootSet {
    pub roots: BTreeMap<VertexId, u32>,
}

impl RootSet {
    pub fn total_multiplicity(&self) -> i64 {
        self.roots.values().map(|&m| i64::from(m)).sum()
    }

    pub fn vertices(&self) -> VertexSet {
        self.roots.keys().copied().collect()
    }
}

pub fn roots(o: &Orientation) -> RootSet {
    let k = o.k() as usize;
    let roots: BTreeMap<VertexId, u32> = o
        .vertices()
        .iter()
        .enumerate()
        .filter(|&(i, _)| o.out_indices(i).len() < k)
        .map(|(i, &v)| (v, (k - o.out_indices(i).len()) as u32))
        .collect();
    let rs = RootSet { roots };
    debug_assert_eq!(
        rs.total_multiplicity(),
        i64::from(o.k()) * o.vertex_count() as i64 - o.arcs().len() as i64
    );
    rs
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ClosureKind {
    #[serde(rename = "scl")]
    Scl,
    #[serde(rename = "sdcl")]
    Sdcl,
    #[serde(rename = "cl_d")]
    ClD,
}

/// `trace` lists the successive sets the closure passed through; its last
/// entry (if any) is the closure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureResult {
    pub seed: VertexSet,
    pub closure: VertexSet,
    pub kind: ClosureKind,
    pub trace: Vec<VertexSet>,
}

fn check_members(o: &Orientation, seed: &VertexSet) -> Result<Vec<usize>> {
    seed.iter().map(|&v| o.require_index(v)).collect()
}

fn to_set(o_vertices: &[VertexId], inside: &[bool]) -> VertexSet {
    inside
        .iter()
        .enumerate()
        .filter(|&(_, &b)| b)
        .map(|(i, _)| o_vertices[i])
        .collect()
}

/// Membership mask of the successor closure of the given vertex indices.
pub(crate) fn scl_mask(o: &Orientation, start: &[usize]) -> Vec<bool> {
    let mut inside = vec![false; o.vertex_count()];
    let mut stack: Vec<usize> = Vec::new();
    for &s in start {
        if !inside[s] {
            inside[s] = true;
            stack.push(s);
        }
    }
    while let Some(x) = stack.pop() {
        for &y in o.out_indices(x) {
            if !inside[y] {
                inside[y] = true;
                stack.push(y);
            }
        }
    }
    inside
}

/// Closure under out-arcs, computed breadth first; the trace records the set
/// after each layer.
pub fn successor_closure(o: &Orientation, seed: &VertexSet) -> Result<ClosureResult> {
    let start = check_members(o, seed)?;
    let mut inside = vec![false; o.vertex_count()];
    for &s in &start {
        inside[s] = true;
    }
    let mut frontier = start;
    let mut trace = Vec::new();
    loop {
        let mut next = Vec::new();
        for &x in &frontier {
            for &y in o.out_indices(x) {
                if !inside[y] {
                    inside[y] = true;
                    next.push(y);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        trace.push(to_set(o.vertices(), &inside));
        frontier = next;
    }
    Ok(ClosureResult { seed: seed.clone(), closure: to_set(o.vertices(), &inside), kind: ClosureKind::Scl, trace })
}

fn root_mask(o: &Orientation, inside: &[bool]) -> Vec<bool> {
    let k = o.k() as usize;
    (0..o.vertex_count()).map(|i| inside[i] && o.out_indices(i).len() < k).collect()
}

/// All vertices whose successor closure has its roots among the roots of
/// the seed's successor closure.
pub fn successor_d_closure(o: &Orientation, seed: &VertexSet) -> Result<ClosureResult> {
    let start = check_members(o, seed)?;
    let n = o.vertex_count();
    let seed_scl = scl_mask(o, &start);
    let allowed = root_mask(o, &seed_scl);
    let k = o.k() as usize;
    let inside: Vec<bool> = (0..n)
        .map(|v| {
            let s = scl_mask(o, &[v]);
            (0..n).all(|u| !s[u] || o.out_indices(u).len() >= k || allowed[u])
        })
        .collect();
    let scl_set = to_set(o.vertices(), &seed_scl);
    let closure = to_set(o.vertices(), &inside);
    let mut trace = Vec::new();
    if scl_set != *seed {
        trace.push(scl_set.clone());
    }
    if closure != scl_set {
        trace.push(closure.clone());
    }
    Ok(ClosureResult { seed: seed.clone(), closure, kind: ClosureKind::Sdcl, trace })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum StrongKind {
    #[serde(rename = "s")]
    S,
    #[serde(rename = "d")]
    D,
}

/// Result of a strongness test. A strong verdict from the orientation route
/// carries an orientation in which the subset is successor-closed (and, for
/// kind d, equal to its successor-d-closure). A negative verdict carries a
/// proper superset `C` with `δ(C) < δ(A)` (kind s) or `δ(C) <= δ(A)` (kind d).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrongVerdict {
    pub strong: bool,
    pub witness_orientation: Option<Orientation>,
    pub violating_set: Option<VertexSet>,
}

fn require_sparse(g: &Graph, k: u32) -> Result<()> {
    if check_sparsity(g, k)?.sparse {
        Ok(())
    } else {
        Err(Error::domain(format!("graph is not {k}-sparse")))
    }
}

/// Minimisers of δ over the supersets of a set `A`.
///
/// They form a lattice under union and intersection. Both extremes come from
/// one matching of the edges into the slots of vertices outside `A`: the
/// least minimiser is `A` plus everything reachable by alternating paths from
/// unmatched edges, the largest is everything that cannot reach a free slot.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaMinimizers {
    pub least: VertexSet,
    pub largest: VertexSet,
    pub min_delta: i64,
}

struct MinMasks {
    least: Vec<bool>,
    largest: Vec<bool>,
    min_delta: i64,
}

fn minimizer_masks(g: &Graph, inside: &[bool], k: u32) -> MinMasks {
    let n = g.vertex_count();
    let cap: Vec<usize> = inside.iter().map(|&b| if b { 0 } else { k as usize }).collect();
    let mut m = SlotMatcher::new(n, g.edge_indices(), cap);
    let mut unmatched = Vec::new();
    for e in 0..g.edge_count() {
        if m.insert(e).is_err() {
            unmatched.push(e);
        }
    }
    let ends = g.edge_indices();
    let starts = unmatched.iter().flat_map(|&e| [ends[e].0, ends[e].1]);
    let reach = m.reach_from(starts);
    let least: Vec<bool> = (0..n).map(|i| inside[i] || reach[i]).collect();
    let free = m.can_reach_free();
    let largest: Vec<bool> = free.iter().map(|&b| !b).collect();
    let size_a = inside.iter().filter(|&&b| b).count() as i64;
    let matched = (g.edge_count() - unmatched.len()) as i64;
    MinMasks { least, largest, min_delta: i64::from(k) * size_a + matched - g.edge_count() as i64 }
}

pub fn delta_minimizers(g: &Graph, a: &VertexSet, k: u32) -> Result<DeltaMinimizers> {
    let inside = g.membership(a)?;
    let mm = minimizer_masks(g, &inside, k);
    Ok(DeltaMinimizers {
        least: to_set(g.vertices(), &mm.least),
        largest: to_set(g.vertices(), &mm.largest),
        min_delta: mm.min_delta,
    })
}

/// Whether `a` is successor-closed (kind s), and additionally its own
/// successor-d-closure (kind d), in the orientation.
pub fn is_strong_in_orientation(o: &Orientation, a: &VertexSet, kind: StrongKind) -> Result<bool> {
    let start = check_members(o, a)?;
    let closed = scl_mask(o, &start).iter().filter(|&&b| b).count() == a.len();
    Ok(match kind {
        StrongKind::S => closed,
        StrongKind::D => closed && successor_d_closure(o, a)?.closure == *a,
    })
}

/// Strongness of `a` in `g` by constrained orientation: `a` is ≤_s-strong
/// exactly when some k-orientation points every crossing edge into `a`, and
/// ≤_d-strong when moreover `a` is its own successor-d-closure there.
pub fn is_strong(g: &Graph, a: &VertexSet, kind: StrongKind, k: u32) -> Result<StrongVerdict> {
    g.membership(a)?;
    require_sparse(g, k)?;
    match orient(g, k, &ArcConstraint::inward(a.clone()))? {
        None => {
            let least = delta_minimizers(g, a, k)?.least;
            Ok(StrongVerdict { strong: false, witness_orientation: None, violating_set: Some(least) })
        }
        Some(o) => {
            if kind == StrongKind::D {
                let sd = successor_d_closure(&o, a)?.closure;
                if sd != *a {
                    return Ok(StrongVerdict { strong: false, witness_orientation: None, violating_set: Some(sd) });
                }
            }
            Ok(StrongVerdict { strong: true, witness_orientation: Some(o), violating_set: None })
        }
    }
}

/// Largest number of vertices outside the subset that the brute-force
/// superset enumeration accepts.
pub const MAX_FREE_VERTICES: usize = 24;

/// Strongness straight from the definition: every superset `C` of `a` must
/// satisfy `δ(a) <= δ(C)` (kind s) or `δ(a) < δ(C)` for proper `C` (kind d).
pub fn is_strong_by_predimension(g: &Graph, a: &VertexSet, kind: StrongKind, k: u32) -> Result<StrongVerdict> {
    let inside = g.membership(a)?;
    require_sparse(g, k)?;
    let free: Vec<usize> = (0..g.vertex_count()).filter(|&i| !inside[i]).collect();
    if free.len() > MAX_FREE_VERTICES {
        return Err(Error::resource(format!(
            "{} vertices outside the subset exceeds the enumeration limit of {MAX_FREE_VERTICES}",
            free.len()
        )));
    }
    let n = g.vertex_count();
    let adj: Vec<u64> = (0..n)
        .map(|i| g.adjacent_indices(i).iter().filter(|&&j| !inside[j]).fold(0u64, |m, &j| m | 1 << free.iter().position(|&f| f == j).unwrap()))
        .collect();
    // For each free vertex: neighbours among free vertices, and count into `a`.
    let free_adj: Vec<u64> = free.iter().map(|&f| adj[f]).collect();
    let into_a: Vec<i64> = free
        .iter()
        .map(|&f| g.adjacent_indices(f).iter().filter(|&&j| inside[j]).count() as i64)
        .collect();
    let kk = i64::from(k);
    for mask in 1u64..(1u64 << free.len()) {
        // δ(C) - δ(A) = k|S| - e(S) - e(S, A)
        let mut change = 0i64;
        let mut internal = 0i64;
        let mut rest = mask;
        while rest != 0 {
            let b = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            change += kk - into_a[b];
            internal += i64::from((free_adj[b] & mask).count_ones());
        }
        change -= internal / 2;
        let violates = match kind {
            StrongKind::S => change < 0,
            StrongKind::D => change <= 0,
        };
        if violates {
            let mut c = a.clone();
            for (b, &f) in free.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    c.insert(g.vertex_at(f));
                }
            }
            return Ok(StrongVerdict { strong: false, witness_orientation: None, violating_set: Some(c) });
        }
    }
    Ok(StrongVerdict { strong: true, witness_orientation: None, violating_set: None })
}

fn lex_key(inside: &[bool]) -> Vec<usize> {
    inside.iter().enumerate().filter(|&(_, &b)| b).map(|(i, _)| i).collect()
}

/// Least d-closed superset of `seed`.
///
/// Absorption fixpoint: while some proper superset `D` has `δ(D) <= δ(C)`,
/// replace `C` by the one minimising `(δ(D), |D|, ids in lexicographic
/// order)`. Each absorber is found exactly through [`delta_minimizers`]
/// rather than by enumerating supersets.
pub fn d_closure(g: &Graph, seed: &VertexSet, k: u32) -> Result<ClosureResult> {
    let mut cur = g.membership(seed)?;
    require_sparse(g, k)?;
    let n = g.vertex_count();
    let mut trace = Vec::new();
    loop {
        let mm = minimizer_masks(g, &cur, k);
        let here = delta_mask(g, &cur, k);
        let next = if here > mm.min_delta {
            mm.least
        } else {
            let mut best: Option<Vec<bool>> = None;
            for v in 0..n {
                if cur[v] || !mm.largest[v] {
                    continue;
                }
                let mut with_v = cur.clone();
                with_v[v] = true;
                let cand = minimizer_masks(g, &with_v, k).least;
                let better = match &best {
                    None => true,
                    Some(b) => {
                        let (cs, bs) = (cand.iter().filter(|&&x| x).count(), b.iter().filter(|&&x| x).count());
                        cs < bs || (cs == bs && lex_key(&cand) < lex_key(b))
                    }
                };
                if better {
                    best = Some(cand);
                }
            }
            match best {
                Some(b) => b,
                None => break,
            }
        };
        trace.push(to_set(g.vertices(), &next));
        cur = next;
    }
    Ok(ClosureResult { seed: seed.clone(), closure: to_set(g.vertices(), &cur), kind: ClosureKind::ClD, trace })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReductVariant {
    #[serde(rename = "circle")]
    Circle,
    #[serde(rename = "bullet")]
    Bullet,
}

/// An orientation re-expressed through its closure data: the undirected
/// graph, each vertex's successor closure and, in the bullet variant, for
/// each root tuple that occurs, the vertices whose closure has exactly those
/// roots. Root tuples are sorted by id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureReduct {
    pub base: Graph,
    pub unary_closure: BTreeMap<VertexId, VertexSet>,
    pub root_tuple_map: Option<Vec<(Vec<VertexId>, VertexSet)>>,
}

pub fn closure_reduct(o: &Orientation, variant: ReductVariant) -> ClosureReduct {
    let n = o.vertex_count();
    let mut unary = BTreeMap::new();
    let mut tuples: BTreeMap<Vec<VertexId>, VertexSet> = BTreeMap::new();
    for v in 0..n {
        let s = scl_mask(o, &[v]);
        let roots = root_mask(o, &s);
        unary.insert(o.vertex_at(v), to_set(o.vertices(), &s));
        let key: Vec<VertexId> = to_set(o.vertices(), &roots).into_iter().collect();
        tuples.entry(key).or_default().insert(o.vertex_at(v));
    }
    ClosureReduct {
        base: o.undirected_reduct(),
        unary_closure: unary,
        root_tuple_map: (variant == ReductVariant::Bullet).then(|| tuples.into_iter().collect()),
    }
}
