//! Edge-to-slot matching: every edge must pick one endpoint as its tail, and
//! each vertex can be the tail of at most `cap[v]` edges.
//!
//! Edges are inserted one at a time; an insertion searches breadth-first for
//! a directed path (following current tail→head arcs) from an allowed endpoint
//! of the new edge to a vertex with spare capacity, then reverses that path.
//! This is the augmenting-path form of Hall's theorem for the bipartite graph
//! between edges and vertex slots.

use std::collections::VecDeque;

#[derive(Clone, Debug)]
pub(crate) struct SlotMatcher {
    ends: Vec<(usize, usize)>,
    allow: Vec<[bool; 2]>,
    cap: Vec<usize>,
    tail: Vec<Option<usize>>,
    // Edge ids whose current tail is the vertex, kept ascending.
    out: Vec<Vec<usize>>,
}

impl SlotMatcher {
    /// `ends[e]` are vertex indices with `ends[e].0 < ends[e].1`.
    pub(crate) fn new(n: usize, ends: Vec<(usize, usize)>, cap: Vec<usize>) -> Self {
        debug_assert_eq!(cap.len(), n);
        let m = ends.len();
        SlotMatcher { ends, allow: vec![[true, true]; m], cap, tail: vec![None; m], out: vec![Vec::new(); n] }
    }

    /// Restricts which endpoints edge `e` may use as tail.
    pub(crate) fn restrict(&mut self, e: usize, allow_first: bool, allow_second: bool) {
        self.allow[e] = [allow_first, allow_second];
    }

    fn allowed_tail(&self, e: usize, v: usize) -> bool {
        let (a, b) = self.ends[e];
        (v == a && self.allow[e][0]) || (v == b && self.allow[e][1])
    }

    fn other(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.ends[e];
        if v == a {
            b
        } else {
            a
        }
    }

    fn load(&self, v: usize) -> usize {
        self.out[v].len()
    }

    fn set_tail(&mut self, e: usize, v: usize) {
        if let Some(old) = self.tail[e] {
            let pos = self.out[old].binary_search(&e).expect("edge listed at its tail");
            self.out[old].remove(pos);
        }
        let pos = self.out[v].binary_search(&e).unwrap_err();
        self.out[v].insert(pos, e);
        self.tail[e] = Some(v);
    }

    /// Tries to match edge `e`. On failure returns the membership mask of the
    /// vertices reached by the search; all of them are saturated.
    pub(crate) fn insert(&mut self, e: usize) -> Result<(), Vec<bool>> {
        let n = self.out.len();
        let mut seen = vec![false; n];
        let mut pred: Vec<Option<usize>> = vec![None; n];
        let mut queue = VecDeque::new();
        let (a, b) = self.ends[e];
        for v in [a, b] {
            if self.allowed_tail(e, v) && !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
        while let Some(x) = queue.pop_front() {
            if self.load(x) < self.cap[x] {
                let mut cur = x;
                while let Some(f) = pred[cur] {
                    let prev = self.tail[f].expect("path edge is matched");
                    self.set_tail(f, cur);
                    cur = prev;
                }
                self.set_tail(e, cur);
                return Ok(());
            }
            for i in 0..self.out[x].len() {
                let f = self.out[x][i];
                let y = self.other(f, x);
                if !seen[y] && self.allowed_tail(f, y) {
                    seen[y] = true;
                    pred[y] = Some(f);
                    queue.push_back(y);
                }
            }
        }
        Err(seen)
    }

    #[cfg(test)]
    pub(crate) fn tail(&self, e: usize) -> Option<usize> {
        self.tail[e]
    }

    pub(crate) fn tails(&self) -> Option<Vec<usize>> {
        self.tail.iter().copied().collect()
    }

    /// Vertices reachable from `starts` along current arcs whose reversal is allowed.
    pub(crate) fn reach_from(&self, starts: impl IntoIterator<Item = usize>) -> Vec<bool> {
        let n = self.out.len();
        let mut seen = vec![false; n];
        let mut stack: Vec<usize> = Vec::new();
        for s in starts {
            if !seen[s] {
                seen[s] = true;
                stack.push(s);
            }
        }
        while let Some(x) = stack.pop() {
            for &f in &self.out[x] {
                let y = self.other(f, x);
                if !seen[y] && self.allowed_tail(f, y) {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen
    }

    /// Vertices from which some vertex with spare capacity can be reached.
    pub(crate) fn can_reach_free(&self) -> Vec<bool> {
        let n = self.out.len();
        let mut into: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (e, t) in self.tail.iter().enumerate() {
            if let Some(t) = *t {
                let h = self.other(e, t);
                if self.allowed_tail(e, h) {
                    into[h].push(t);
                }
            }
        }
        let mut seen = vec![false; n];
        let mut stack: Vec<usize> = (0..n).filter(|&v| self.load(v) < self.cap[v]).collect();
        for &v in &stack {
            seen[v] = true;
        }
        while let Some(x) = stack.pop() {
            for &p in &into[x] {
                if !seen[p] {
                    seen[p] = true;
                    stack.push(p);
                }
            }
        }
        seen
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_with_unit_capacity_is_a_cycle() {
        let mut m = SlotMatcher::new(3, vec![(0, 1), (0, 2), (1, 2)], vec![1; 3]);
        for e in 0..3 {
            m.insert(e).unwrap();
        }
        let tails = m.tails().unwrap();
        let mut loads = [0; 3];
        for t in tails {
            loads[t] += 1;
        }
        assert_eq!(loads, [1, 1, 1]);
    }

    #[test]
    fn overfull_set_is_reported() {
        // K4 with one slot per vertex: the fifth edge cannot be placed.
        let ends = vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let mut m = SlotMatcher::new(4, ends, vec![1; 4]);
        let mut failed = None;
        for e in 0..6 {
            if let Err(seen) = m.insert(e) {
                failed = Some(seen);
                break;
            }
        }
        assert_eq!(failed.unwrap(), vec![true; 4]);
    }

    #[test]
    fn restricted_edge_uses_allowed_endpoint() {
        let mut m = SlotMatcher::new(2, vec![(0, 1)], vec![1, 1]);
        m.restrict(0, false, true);
        m.insert(0).unwrap();
        assert_eq!(m.tail(0), Some(1));
    }
}
