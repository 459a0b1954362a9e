//! Automorphism groups of small structures by stabiliser-chain backtracking.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::canon::RelMatrix;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

/// Default cap on the vertex count accepted by the exponential searches.
pub const DEFAULT_VERTEX_LIMIT: usize = 12;

/// Groups up to this order carry their full element list.
const ELEMENT_LIST_LIMIT: u128 = 50_000;

/// `generators[g][i]` is the image of `base.vertices()[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomorphismGroup {
    pub base: Graph,
    pub generators: Vec<Vec<VertexId>>,
    pub order: u128,
    pub elements: Option<Vec<Vec<VertexId>>>,
}

/// Backtracking search for an automorphism extending a partial map, where
/// `partial[i] = Some(j)` prescribes i ↦ j.
pub(crate) fn extend_partial(m: &RelMatrix, colors: &[u32], partial: &[Option<usize>]) -> Option<Vec<usize>> {
    let n = m.n();
    let deg: Vec<(usize, usize)> = (0..n).map(|v| (m.out_degree(v), m.in_degree(v))).collect();
    let mut map: Vec<Option<usize>> = vec![None; n];
    let mut used = vec![false; n];
    for (i, p) in partial.iter().enumerate() {
        if let Some(j) = *p {
            if used[j] || colors[i] != colors[j] || deg[i] != deg[j] {
                return None;
            }
            map[i] = Some(j);
            used[j] = true;
        }
    }
    for i in 0..n {
        let Some(fi) = map[i] else { continue };
        for j in 0..n {
            let Some(fj) = map[j] else { continue };
            if m.rel(i, j) != m.rel(fi, fj) {
                return None;
            }
        }
    }
    // Unmapped vertices, those with mapped neighbours first.
    let mut order: Vec<usize> = (0..n).filter(|&i| map[i].is_none()).collect();
    order.sort_by_key(|&i| {
        let touching = (0..n).filter(|&j| map[j].is_some() && (m.rel(i, j) || m.rel(j, i))).count();
        (std::cmp::Reverse(touching), i)
    });
    fn go(
        m: &RelMatrix,
        colors: &[u32],
        deg: &[(usize, usize)],
        order: &[usize],
        pos: usize,
        map: &mut [Option<usize>],
        used: &mut [bool],
    ) -> bool {
        if pos == order.len() {
            return true;
        }
        let i = order[pos];
        let n = m.n();
        for w in 0..n {
            if used[w] || colors[w] != colors[i] || deg[w] != deg[i] {
                continue;
            }
            let consistent = (0..n).all(|j| match map[j] {
                Some(fj) => m.rel(i, j) == m.rel(w, fj) && m.rel(j, i) == m.rel(fj, w),
                None => true,
            });
            if !consistent {
                continue;
            }
            map[i] = Some(w);
            used[w] = true;
            if go(m, colors, deg, order, pos + 1, map, used) {
                return true;
            }
            map[i] = None;
            used[w] = false;
        }
        false
    }
    if go(m, colors, &deg, &order, 0, &mut map, &mut used) {
        Some(map.into_iter().map(|x| x.expect("total map")).collect())
    } else {
        None
    }
}

/// Orbit of `start` under the group generated by `gens`.
fn orbit(gens: &[Vec<usize>], start: usize) -> BTreeSet<usize> {
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            if seen.insert(g[x]) {
                queue.push_back(g[x]);
            }
        }
    }
    seen
}

/// Stabiliser chain along base points `0, 1, ..., n-1`: returns generators
/// and the group order (product of the basic orbit lengths).
pub(crate) fn group_of(m: &RelMatrix, colors: &[u32]) -> (Vec<Vec<usize>>, u128) {
    let n = m.n();
    let mut all_gens: Vec<Vec<usize>> = Vec::new();
    let mut order: u128 = 1;
    for level in 0..n {
        let mut level_gens: Vec<Vec<usize>> = Vec::new();
        let mut orb = BTreeSet::from([level]);
        for w in level + 1..n {
            if orb.contains(&w) {
                continue;
            }
            let mut partial: Vec<Option<usize>> = vec![None; n];
            for (f, slot) in partial.iter_mut().enumerate().take(level) {
                *slot = Some(f);
            }
            partial[level] = Some(w);
            if let Some(g) = extend_partial(m, colors, &partial) {
                level_gens.push(g);
                orb = orbit(&level_gens, level);
            }
        }
        order = order.checked_mul(orb.len() as u128).expect("group order fits u128");
        all_gens.extend(level_gens);
    }
    (all_gens, order)
}

fn elements_of(n: usize, gens: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let id: Vec<usize> = (0..n).collect();
    let mut seen = BTreeSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q: Vec<usize> = p.iter().map(|&x| g[x]).collect();
            if seen.insert(q.clone()) {
                queue.push_back(q);
            }
        }
    }
    seen.into_iter().collect()
}

pub(crate) fn check_limit(n: usize, limit: usize) -> Result<()> {
    if n > limit {
        Err(Error::resource(format!("{n} vertices exceeds the brute-force limit of {limit}")))
    } else {
        Ok(())
    }
}

/// Automorphism group of `g` with the default vertex limit.
pub fn automorphisms(g: &Graph) -> Result<AutomorphismGroup> {
    automorphisms_with_limit(g, DEFAULT_VERTEX_LIMIT)
}

pub fn automorphisms_with_limit(g: &Graph, limit: usize) -> Result<AutomorphismGroup> {
    check_limit(g.vertex_count(), limit)?;
    let m = RelMatrix::from_graph(g);
    let n = g.vertex_count();
    let (gens, order) = group_of(&m, &vec![0; n]);
    let to_ids = |p: &Vec<usize>| p.iter().map(|&i| g.vertex_at(i)).collect::<Vec<_>>();
    let elements = (order <= ELEMENT_LIST_LIMIT).then(|| elements_of(n, &gens).iter().map(to_ids).collect());
    Ok(AutomorphismGroup { base: g.clone(), generators: gens.iter().map(to_ids).collect(), order, elements })
}
