//! Directed reachability balls and the growth bounds they obey.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Orientation, VertexId, VertexSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallReport {
    pub center: VertexId,
    pub radius: u32,
    pub ball: VertexSet,
    /// `1 + k + ... + k^radius`, or `None` on overflow.
    pub bound: Option<u128>,
    pub within_bound: bool,
}

/// `sum_{j <= i} k^j`; for `k >= 2` this is at most `k^{i+1} - 1`.
pub fn ball_bound(k: u32, radius: u32) -> Option<u128> {
    let mut total: u128 = 0;
    let mut term: u128 = 1;
    for j in 0..=radius {
        total = total.checked_add(term)?;
        if j < radius {
            term = term.checked_mul(u128::from(k))?;
        }
    }
    Some(total)
}

/// `k^{i+1} - 1`.
pub fn power_bound(k: u32, radius: u32) -> Option<u128> {
    u128::from(k).checked_pow(radius + 1).map(|p| p - 1)
}

/// Vertices reachable from `a` along at most `radius` arcs.
pub fn reachability_ball(o: &Orientation, a: VertexId, radius: u32) -> Result<BallReport> {
    let start = o.index_of(a).ok_or_else(|| Error::domain(format!("unknown vertex {a}")))?;
    let mut dist = vec![u32::MAX; o.vertex_count()];
    dist[start] = 0;
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        if dist[x] == radius {
            continue;
        }
        for &y in o.out_indices(x) {
            if dist[y] == u32::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    let ball: VertexSet = (0..o.vertex_count()).filter(|&i| dist[i] != u32::MAX).map(|i| o.vertex_at(i)).collect();
    let bound = ball_bound(o.k(), radius);
    let within_bound = bound.is_none_or(|b| ball.len() as u128 <= b);
    Ok(BallReport { center: a, radius, ball, bound, within_bound })
}

/// `s(1) = 1`, `s(n+1) = k^{s(n)+1}`; `None` once the value overflows.
pub fn s_recursion(k: u32, n: u32) -> Option<u128> {
    if n == 0 {
        return None;
    }
    let mut s: u128 = 1;
    for _ in 1..n {
        let e = u32::try_from(s + 1).ok()?;
        s = u128::from(k).checked_pow(e)?;
    }
    Some(s)
}
