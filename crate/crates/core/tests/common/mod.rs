//! Brute-force oracles over vertex masks. Bit `i` of a mask stands for
//! `vertices()[i]`.

#![allow(dead_code)]

use hk_core::classes::GrowthFunction;
use hk_core::{Graph, Orientation, StrongKind, VertexId, VertexSet};

pub fn set_of(vs: &[VertexId], mask: u32) -> VertexSet {
    (0..vs.len()).filter(|&i| mask >> i & 1 == 1).map(|i| vs[i]).collect()
}

pub fn mask_of(vs: &[VertexId], set: &VertexSet) -> u32 {
    set.iter().map(|v| 1u32 << vs.iter().position(|x| x == v).expect("member")).fold(0, |a, b| a | b)
}

fn edge_masks(g: &Graph) -> Vec<u32> {
    let vs = g.vertices();
    g.edges()
        .iter()
        .map(|(u, v)| 1 << vs.iter().position(|x| x == u).unwrap() | 1 << vs.iter().position(|x| x == v).unwrap())
        .collect()
}

/// `delta[mask] = k|A| - |edges inside A|` for every mask.
pub fn all_deltas(g: &Graph, k: u32) -> Vec<i64> {
    let n = g.vertex_count();
    let em = edge_masks(g);
    (0..1u32 << n)
        .map(|m| i64::from(k) * i64::from(m.count_ones()) - em.iter().filter(|&&e| e & m == e).count() as i64)
        .collect()
}

pub fn sparse_bf(g: &Graph, k: u32) -> bool {
    all_deltas(g, k).iter().all(|&d| d >= 0)
}

/// `a` strong in the whole graph: no proper superset with smaller (kind s)
/// or no larger (kind d) predimension.
pub fn strong_bf(deltas: &[i64], a: u32, kind: StrongKind) -> bool {
    (0..deltas.len() as u32).filter(|&c| c & a == a && c != a).all(|c| match kind {
        StrongKind::S => deltas[c as usize] >= deltas[a as usize],
        StrongKind::D => deltas[c as usize] > deltas[a as usize],
    })
}

/// Intersection of all d-closed supersets of `seed`.
pub fn dcl_bf(deltas: &[i64], seed: u32) -> u32 {
    let full = deltas.len() as u32 - 1;
    (0..deltas.len() as u32)
        .filter(|&c| c & seed == seed && strong_bf(deltas, c, StrongKind::D))
        .fold(full, |acc, c| acc & c)
}

/// Out-neighbour masks of an orientation.
pub fn successors(o: &Orientation) -> Vec<u32> {
    let vs = o.vertices();
    let mut out = vec![0u32; vs.len()];
    for (u, v) in o.arcs() {
        let i = vs.iter().position(|x| x == u).unwrap();
        out[i] |= 1 << vs.iter().position(|x| x == v).unwrap();
    }
    out
}

pub fn successor_closed(succ: &[u32], m: u32) -> bool {
    (0..succ.len()).filter(|&i| m >> i & 1 == 1).all(|i| succ[i] & m == succ[i])
}

/// Least set containing `seed` that is successor-closed and d-closed in the
/// reduct, found as the intersection of all such sets; `None` if that
/// intersection is not itself such a set.
pub fn sdcl_bf(o: &Orientation, deltas: &[i64], seed: u32) -> Option<u32> {
    let succ = successors(o);
    let good = |c: u32| successor_closed(&succ, c) && strong_bf(deltas, c, StrongKind::D);
    let full = deltas.len() as u32 - 1;
    let meet = (0..deltas.len() as u32).filter(|&c| c & seed == seed && good(c)).fold(full, |acc, c| acc & c);
    good(meet).then_some(meet)
}

pub fn root_multiplicity(o: &Orientation) -> i64 {
    o.vertices().iter().map(|&v| i64::from(o.k()) - o.out_degree(v) as i64).sum()
}

/// Orientations counted by trying all `2^|E|` direction choices.
pub fn unpruned_orientation_count(g: &Graph, k: u32) -> usize {
    let vs = g.vertices();
    let ends: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .map(|(u, v)| (vs.iter().position(|x| x == u).unwrap(), vs.iter().position(|x| x == v).unwrap()))
        .collect();
    (0..1u64 << ends.len())
        .filter(|&bits| {
            let mut out = vec![0u32; vs.len()];
            for (e, &(a, b)) in ends.iter().enumerate() {
                out[if bits >> e & 1 == 1 { b } else { a }] += 1;
            }
            out.iter().all(|&d| d <= k)
        })
        .count()
}

/// `delta(A) >= F(|A|)` on every subset.
pub fn cf_member_bf(g: &Graph, k: u32, f: &GrowthFunction) -> bool {
    all_deltas(g, k).iter().enumerate().all(|(m, &d)| d as f64 >= f.eval(f64::from((m as u32).count_ones())) - 1e-9)
}

/// Shortest cycle length by breadth-first search from every vertex.
pub fn girth_bf(n: usize, edges: &[(usize, usize)]) -> Option<usize> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut best: Option<usize> = None;
    for s in 0..n {
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        dist[s] = 0;
        let mut q = std::collections::VecDeque::from([s]);
        while let Some(x) = q.pop_front() {
            for &y in &adj[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    parent[y] = x;
                    q.push_back(y);
                } else if parent[x] != y {
                    let len = dist[x] + dist[y] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                }
            }
        }
    }
    best
}

pub fn graph_girth_bf(g: &Graph) -> Option<usize> {
    let vs = g.vertices();
    let edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .map(|(u, v)| (vs.binary_search(u).unwrap(), vs.binary_search(v).unwrap()))
        .collect();
    girth_bf(vs.len(), &edges)
}

/// `sdcl_bf` for every seed at once.
pub fn sdcl_table(o: &Orientation, deltas: &[i64]) -> Vec<Option<u32>> {
    let succ = successors(o);
    let n = deltas.len() as u32;
    let good: Vec<u32> =
        (0..n).filter(|&c| successor_closed(&succ, c) && strong_bf(deltas, c, StrongKind::D)).collect();
    (0..n)
        .map(|seed| {
            let meet = good.iter().filter(|&&c| c & seed == seed).fold(n - 1, |acc, &c| acc & c);
            good.binary_search(&meet).is_ok().then_some(meet)
        })
        .collect()
}
