//! Bounded searches for weak amalgams and for extensions with the extension
//! property for strong partial automorphisms.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{class_membership, embeddings, AmalgamResult, ClassSpec};
use crate::dynamics::automorphism::extend_partial;
use crate::dynamics::canon::{iso_key, RelMatrix};
use crate::error::{Error, Result};
use crate::graph::{Embedding, Graph, Orientation, Structure, VertexId, VertexSet};
use crate::predimension::is_strong;

/// Outcome of a bounded search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ProbeOutcome<T> {
    Found(T),
    /// Nothing within the bound; `explored` counts search nodes.
    Exhausted { explored: u64 },
}

impl<T> ProbeOutcome<T> {
    pub fn found(&self) -> Option<&T> {
        match self {
            ProbeOutcome::Found(t) => Some(t),
            ProbeOutcome::Exhausted { .. } => None,
        }
    }

    pub fn is_exhausted(&self) -> bool {
        matches!(self, ProbeOutcome::Exhausted { .. })
    }
}

/// Decision nodes the amalgam search may visit before giving up.
pub const WAP_NODE_LIMIT: u64 = 2_000_000;

/// Candidate extensions one level of the extension search may hold.
pub const EPPA_LEVEL_LIMIT: usize = 200_000;

/// Strongness as used by the probes: on the structure itself for graph
/// classes, on the undirected reduct for orientation classes.
fn probe_strong(spec: &ClassSpec, s: &Structure, a: &VertexSet) -> Result<bool> {
    match s {
        Structure::Graph(_) => spec.is_strong_in(s, a),
        Structure::Oriented(o) => Ok(is_strong(&o.undirected_reduct(), a, spec.kind.strong_kind(), spec.k)?.strong),
    }
}

/// Index-level adjacency of a structure. For graphs `out` and `inn` are
/// both the neighbour lists.
struct View {
    ids: Vec<VertexId>,
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
    directed: bool,
}

impl View {
    fn new(s: &Structure) -> Self {
        match s {
            Structure::Graph(g) => {
                let adj: Vec<Vec<usize>> = (0..g.vertex_count()).map(|i| g.adjacent_indices(i).to_vec()).collect();
                View { ids: g.vertices().to_vec(), out: adj.clone(), inn: adj, directed: false }
            }
            Structure::Oriented(o) => View {
                ids: o.vertices().to_vec(),
                out: (0..o.vertex_count()).map(|i| o.out_indices(i).to_vec()).collect(),
                inn: (0..o.vertex_count()).map(|i| o.in_indices(i).to_vec()).collect(),
                directed: true,
            },
        }
    }

    fn n(&self) -> usize {
        self.ids.len()
    }

    fn rel(&self, i: usize, j: usize) -> bool {
        self.out[i].contains(&j)
    }

    fn neighbours(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        let back: &[usize] = if self.directed { &self.inn[i] } else { &[] };
        self.out[i].iter().chain(back).copied()
    }

    fn index(&self, v: VertexId) -> Option<usize> {
        self.ids.binary_search(&v).ok()
    }
}

/// Roots of pendant out-trees: `x` has a single in-neighbour, and every
/// vertex below it has exactly one in-neighbour and no other neighbours.
/// Returns `(parent, tree code)` for each such root.
fn pendant_trees(v: &View) -> Vec<Option<(usize, u32)>> {
    let n = v.n();
    let mut codes: HashMap<Vec<u32>, u32> = HashMap::new();
    let mut memo: Vec<Option<Option<u32>>> = vec![None; n];
    fn code(v: &View, x: usize, memo: &mut Vec<Option<Option<u32>>>, codes: &mut HashMap<Vec<u32>, u32>) -> Option<u32> {
        if let Some(c) = memo[x] {
            return c;
        }
        let mut kids = Vec::new();
        let mut ok = v.inn[x].len() == 1;
        for &y in &v.out[x] {
            if !ok {
                break;
            }
            match code(v, y, memo, codes) {
                Some(c) => kids.push(c),
                None => ok = false,
            }
        }
        let c = ok.then(|| {
            kids.sort_unstable();
            let next = codes.len() as u32;
            *codes.entry(kids).or_insert(next)
        });
        memo[x] = Some(c);
        c
    }
    if !v.directed {
        return vec![None; n];
    }
    (0..n).map(|x| code(v, x, &mut memo, &mut codes).map(|c| (v.inn[x][0], c))).collect()
}

enum Applied {
    Nothing,
    Separate,
    Glued(usize),
}

/// Choices made so far for one vertex of the second structure.
struct Frame {
    x2: usize,
    tried_separate: bool,
    candidates: Option<Vec<usize>>,
    next: usize,
    applied: Applied,
}

impl Frame {
    fn new(x2: usize) -> Self {
        Frame { x2, tried_separate: false, candidates: None, next: 0, applied: Applied::Nothing }
    }
}

struct Wap<'a> {
    spec: &'a ClassSpec,
    s1: &'a Structure,
    v1: View,
    v2: View,
    base2: Vec<bool>,
    k: usize,
    bound: usize,
    order: Vec<usize>,
    phi: Vec<Option<usize>>,
    psi: Vec<Option<usize>>,
    sep_out: Vec<usize>,
    open_out: Vec<usize>,
    separate: usize,
    trees: Vec<Option<(usize, u32)>>,
    explored: u64,
}

impl Wap<'_> {
    /// Out-degree feasibility at an identified vertex `y2` of the second
    /// structure: arcs kept apart add to the out-degree of its image, and
    /// undecided successors must find unused successors of the image.
    fn feasible_at(&self, y2: usize) -> bool {
        if !self.v2.directed {
            return true;
        }
        let Some(y1) = self.phi[y2] else { return true };
        let have = self.v1.out[y1].len() + self.sep_out[y2];
        if have > self.k {
            return false;
        }
        let required = (have + self.open_out[y2]).saturating_sub(self.k);
        let available = self.v1.out[y1].iter().filter(|&&z| self.psi[z].is_none()).count();
        required <= available
    }

    fn feasible_around(&self, x2: usize) -> bool {
        self.feasible_at(x2) && self.v2.inn[x2].iter().all(|&p| self.feasible_at(p))
    }

    fn consistent(&self, x2: usize, x1: usize) -> bool {
        let (v1, v2) = (&self.v1, &self.v2);
        v1.neighbours(x1).all(|y1| match self.psi[y1] {
            Some(y2) => v2.rel(x2, y2) == v1.rel(x1, y1) && v2.rel(y2, x2) == v1.rel(y1, x1),
            None => true,
        }) && v2.neighbours(x2).all(|y2| match self.phi[y2] {
            Some(y1) => v1.rel(x1, y1) == v2.rel(x2, y2) && v1.rel(y1, x1) == v2.rel(y2, x2),
            None => true,
        })
    }

    fn untouched(&self, x1: usize) -> bool {
        let mut stack = vec![x1];
        while let Some(y) = stack.pop() {
            if self.psi[y].is_some() {
                return false;
            }
            stack.extend(self.v1.out[y].iter().copied());
        }
        true
    }

    fn candidates(&self, x2: usize) -> Vec<usize> {
        let anchor = self.v2.neighbours(x2).find_map(|y2| self.phi[y2]);
        let mut pool: Vec<usize> = match anchor {
            Some(y1) => self.v1.neighbours(y1).collect(),
            None => (0..self.v1.n()).collect(),
        };
        pool.sort_unstable();
        pool.dedup();
        let mut out: Vec<usize> = Vec::new();
        let mut seen_trees: Vec<(usize, u32)> = Vec::new();
        for x1 in pool {
            if self.psi[x1].is_some() || !self.consistent(x2, x1) {
                continue;
            }
            // Untouched isomorphic pendant trees under one parent are
            // exchanged by an automorphism fixing everything decided so far.
            if let Some(t) = self.trees[x1] {
                if self.untouched(x1) {
                    if seen_trees.contains(&t) {
                        continue;
                    }
                    seen_trees.push(t);
                }
            }
            out.push(x1);
        }
        out
    }

    fn tick(&mut self) -> Result<()> {
        self.explored += 1;
        if self.explored > WAP_NODE_LIMIT {
            return Err(Error::resource(format!("amalgam search exceeded {WAP_NODE_LIMIT} nodes")));
        }
        Ok(())
    }

    fn mark_decided(&mut self, x2: usize, separate: bool, sign: isize) {
        if !self.v2.directed {
            return;
        }
        for i in 0..self.v2.inn[x2].len() {
            let p = self.v2.inn[x2][i];
            self.open_out[p] = (self.open_out[p] as isize - sign) as usize;
            if separate {
                self.sep_out[p] = (self.sep_out[p] as isize + sign) as usize;
            }
        }
    }

    /// Depth-first over the vertices of the second structure in `order`,
    /// with an explicit stack so deep gadgets do not exhaust the call stack.
    fn search(&mut self) -> Result<Option<AmalgamResult>> {
        self.tick()?;
        if self.order.is_empty() {
            return self.finish();
        }
        let mut stack = vec![Frame::new(self.order[0])];
        while let Some(f) = stack.last_mut() {
            let x2 = f.x2;
            match std::mem::replace(&mut f.applied, Applied::Nothing) {
                Applied::Separate => {
                    self.mark_decided(x2, true, -1);
                    self.separate -= 1;
                }
                Applied::Glued(x1) => {
                    self.mark_decided(x2, false, -1);
                    self.phi[x2] = None;
                    self.psi[x1] = None;
                }
                Applied::Nothing => {}
            }
            if !f.tried_separate {
                f.tried_separate = true;
                if self.v1.n() + self.separate < self.bound {
                    self.separate += 1;
                    self.mark_decided(x2, true, 1);
                    if self.feasible_around(x2) {
                        f.applied = Applied::Separate;
                    } else {
                        self.mark_decided(x2, true, -1);
                        self.separate -= 1;
                    }
                }
            }
            if matches!(f.applied, Applied::Nothing) {
                let cands = f.candidates.get_or_insert_with(|| self.candidates(x2));
                while f.next < cands.len() {
                    let x1 = cands[f.next];
                    f.next += 1;
                    self.phi[x2] = Some(x1);
                    self.psi[x1] = Some(x2);
                    self.mark_decided(x2, false, 1);
                    if self.feasible_around(x2) {
                        f.applied = Applied::Glued(x1);
                        break;
                    }
                    self.mark_decided(x2, false, -1);
                    self.phi[x2] = None;
                    self.psi[x1] = None;
                }
            }
            if matches!(f.applied, Applied::Nothing) {
                stack.pop();
                continue;
            }
            self.tick()?;
            let pos = stack.len();
            if pos == self.order.len() {
                if let Some(r) = self.finish()? {
                    return Ok(Some(r));
                }
            } else {
                stack.push(Frame::new(self.order[pos]));
            }
        }
        Ok(None)
    }

    fn finish(&self) -> Result<Option<AmalgamResult>> {
        let mut next = self.v1.ids.last().map_or(0, |v| v.0 + 1);
        let mut right: BTreeMap<VertexId, VertexId> = BTreeMap::new();
        for (i2, &id2) in self.v2.ids.iter().enumerate() {
            let image = match self.phi[i2] {
                Some(i1) => self.v1.ids[i1],
                None => {
                    next += 1;
                    VertexId(next - 1)
                }
            };
            right.insert(id2, image);
        }
        let vertices: Vec<VertexId> = self.v1.ids.iter().copied().chain(right.values().copied()).collect();
        let mut pairs: Vec<(VertexId, VertexId)> = Vec::new();
        for (v, s) in [(&self.v1, None), (&self.v2, Some(&right))] {
            for i in 0..v.n() {
                for &j in &v.out[i] {
                    if v.directed || i < j {
                        let map = |x: VertexId| s.map_or(x, |m| m[&x]);
                        pairs.push((map(v.ids[i]), map(v.ids[j])));
                    }
                }
            }
        }
        let mut vertices = vertices;
        vertices.sort_unstable();
        vertices.dedup();
        let d = match self.s1 {
            Structure::Graph(_) => {
                let mut edges: Vec<(VertexId, VertexId)> =
                    pairs.into_iter().map(|(u, v)| if u < v { (u, v) } else { (v, u) }).collect();
                edges.sort_unstable();
                edges.dedup();
                Structure::Graph(Graph::new(vertices, edges)?)
            }
            Structure::Oriented(o) => {
                pairs.sort_unstable();
                pairs.dedup();
                match Orientation::new(vertices, pairs, o.k()) {
                    Ok(x) => Structure::Oriented(x),
                    Err(_) => return Ok(None),
                }
            }
        };
        if !class_membership(&d, self.spec)?.member {
            return Ok(None);
        }
        let img1: VertexSet = self.v1.ids.iter().copied().collect();
        let img2: VertexSet = right.values().copied().collect();
        if !probe_strong(self.spec, &d, &img1)? || !probe_strong(self.spec, &d, &img2)? {
            return Ok(None);
        }
        Ok(Some(AmalgamResult {
            amalgam: d,
            left_embedding: Embedding::identity(self.v1.ids.iter().copied()),
            right_embedding: Embedding::new(right),
            in_class: true,
        }))
    }
}

fn check_base(a: &Structure, c: &Structure) -> Result<()> {
    let members: VertexSet = a.vertices().iter().copied().collect();
    if !members.iter().all(|v| c.vertices().contains(v)) {
        return Err(Error::domain("base vertices missing from an extension"));
    }
    if c.induced(&members)? != *a {
        return Err(Error::domain("extension does not induce the base structure"));
    }
    Ok(())
}

/// Searches for `D` in the class with `|D| <= bound` and strong embeddings
/// `g_i : c_i -> D` that agree on `a` (whose vertex ids are shared by `c1`
/// and `c2`). For orientation classes strongness is judged on undirected
/// reducts.
///
/// Only unions of the two images without cross relations are searched:
/// deleting extra vertices or cross relations keeps a witness in the class
/// and keeps both images strong. Identifications are explored keeping each
/// vertex of `c2` apart first, then gluing it to vertices of `c1` in
/// ascending order, so the first witness found is deterministic.
pub fn wap_probe(
    spec: &ClassSpec,
    a: &Structure,
    c1: &Structure,
    c2: &Structure,
    bound: usize,
) -> Result<ProbeOutcome<AmalgamResult>> {
    spec.validate()?;
    for s in [a, c1, c2] {
        spec.check_kind(s)?;
    }
    if bound < c1.vertex_count().max(c2.vertex_count()) {
        return Err(Error::domain(format!(
            "bound {bound} is below the size of an extension ({} and {})",
            c1.vertex_count(),
            c2.vertex_count()
        )));
    }
    check_base(a, c1)?;
    check_base(a, c2)?;
    let base: VertexSet = a.vertices().iter().copied().collect();
    for c in [c1, c2] {
        if !class_membership(c, spec)?.member {
            return Err(Error::domain("an extension is not in the class"));
        }
        if !probe_strong(spec, c, &base)? {
            return Err(Error::domain("the base is not strong in an extension"));
        }
    }
    let v1 = View::new(c1);
    let v2 = View::new(c2);
    let mut phi = vec![None; v2.n()];
    let mut psi = vec![None; v1.n()];
    let mut base2 = vec![false; v2.n()];
    for &b in &base {
        let (i1, i2) = (v1.index(b).expect("checked"), v2.index(b).expect("checked"));
        phi[i2] = Some(i1);
        psi[i1] = Some(i2);
        base2[i2] = true;
    }
    // Breadth first from the base, successors before predecessors.
    let mut order = Vec::new();
    let mut seen = base2.clone();
    let mut queue: std::collections::VecDeque<usize> = (0..v2.n()).filter(|&i| base2[i]).collect();
    loop {
        while let Some(x) = queue.pop_front() {
            for y in v2.neighbours(x).collect::<Vec<_>>() {
                if !seen[y] {
                    seen[y] = true;
                    order.push(y);
                    queue.push_back(y);
                }
            }
        }
        match (0..v2.n()).find(|&i| !seen[i]) {
            Some(i) => {
                seen[i] = true;
                order.push(i);
                queue.push_back(i);
            }
            None => break,
        }
    }
    let open_out: Vec<usize> =
        (0..v2.n()).map(|i| if v2.directed { v2.out[i].iter().filter(|&&j| !base2[j]).count() } else { 0 }).collect();
    let trees = pendant_trees(&v1);
    let mut w = Wap {
        spec,
        s1: c1,
        k: spec.k as usize,
        bound,
        order,
        phi,
        psi,
        sep_out: vec![0; v2.n()],
        open_out,
        separate: 0,
        trees,
        explored: 0,
        base2,
        v1,
        v2,
    };
    if (0..w.v2.n()).filter(|&i| w.base2[i]).any(|i| !w.feasible_at(i)) {
        return Ok(ProbeOutcome::Exhausted { explored: 0 });
    }
    match w.search()? {
        Some(r) => Ok(ProbeOutcome::Found(r)),
        None => Ok(ProbeOutcome::Exhausted { explored: w.explored }),
    }
}

/// An extension `B` of `a` in which every strong partial automorphism of
/// `a` extends to an automorphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EppaWitness {
    pub extension: Structure,
    /// Number of strong partial automorphisms of `a` (identity maps excluded).
    pub partial_automorphisms: usize,
}

/// Largest structure whose subsets the extension search enumerates.
const EPPA_BASE_LIMIT: usize = 16;

fn strong_partial_automorphisms(spec: &ClassSpec, a: &Structure) -> Result<Vec<Vec<(VertexId, VertexId)>>> {
    let n = a.vertex_count();
    if n > EPPA_BASE_LIMIT {
        return Err(Error::resource(format!("{n} vertices is too many to list partial automorphisms")));
    }
    let vs = a.vertices();
    let mut strong: Vec<VertexSet> = Vec::new();
    for mask in 0u32..1 << n {
        let s: VertexSet = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| vs[i]).collect();
        if spec.is_strong_in(a, &s)? {
            strong.push(s);
        }
    }
    strong.sort_by_key(|s| (s.len(), s.iter().copied().collect::<Vec<_>>()));
    let mut maps = Vec::new();
    for d in &strong {
        let sd = a.induced(d)?;
        for e in strong.iter().filter(|e| e.len() == d.len()) {
            let se = a.induced(e)?;
            for image in embeddings(&sd, &se) {
                let pairs: Vec<(VertexId, VertexId)> = sd.vertices().iter().copied().zip(image).collect();
                if pairs.iter().any(|(x, y)| x != y) {
                    maps.push(pairs);
                }
            }
        }
    }
    Ok(maps)
}

fn extends_all(b: &Structure, maps: &[Vec<(VertexId, VertexId)>]) -> bool {
    let m = RelMatrix::from_structure(b);
    let colors = vec![0; b.vertex_count()];
    let idx = |v: VertexId| b.vertices().binary_search(&v).expect("vertex of the extension");
    maps.iter().all(|pairs| {
        let mut partial = vec![None; b.vertex_count()];
        for &(x, y) in pairs {
            partial[idx(x)] = Some(idx(y));
        }
        extend_partial(&m, &colors, &partial).is_some()
    })
}

/// One-vertex extensions of `b` by a vertex with id `new`.
pub(crate) fn augmentations(b: &Structure, new: VertexId) -> Result<Vec<Structure>> {
    let n = b.vertex_count();
    let vs = b.vertices();
    let mut out = Vec::new();
    match b {
        Structure::Graph(g) => {
            if n > 20 {
                return Err(Error::resource("too many neighbour patterns"));
            }
            for mask in 0u32..1 << n {
                let mut edges = g.edges().to_vec();
                edges.extend((0..n).filter(|&i| mask >> i & 1 == 1).map(|i| (vs[i], new)));
                out.push(Structure::Graph(Graph::new(vs.iter().copied().chain([new]), edges)?));
            }
        }
        Structure::Oriented(o) => {
            if n > 12 {
                return Err(Error::resource("too many arc patterns"));
            }
            for code in 0..3u32.pow(n as u32) {
                let mut arcs = o.arcs().to_vec();
                let mut c = code;
                for &v in vs {
                    match c % 3 {
                        1 => arcs.push((v, new)),
                        2 => arcs.push((new, v)),
                        _ => {}
                    }
                    c /= 3;
                }
                if let Ok(x) = Orientation::new(vs.iter().copied().chain([new]), arcs, o.k()) {
                    out.push(Structure::Oriented(x));
                }
            }
        }
    }
    Ok(out)
}

/// Searches extensions `a <= B` in the class with `|B| <= bound` such that
/// every strong partial automorphism of `a` extends to an automorphism of
/// `B`. Candidates are grown one vertex at a time, up to isomorphism over
/// `a`; those outside the class or over which `a` is not strong are dropped,
/// since no further extension can repair either.
pub fn eppa_probe(spec: &ClassSpec, a: &Structure, bound: usize) -> Result<ProbeOutcome<EppaWitness>> {
    spec.validate()?;
    spec.check_kind(a)?;
    if !class_membership(a, spec)?.member {
        return Err(Error::domain("structure is not in the class"));
    }
    let maps = strong_partial_automorphisms(spec, a)?;
    let base: VertexSet = a.vertices().iter().copied().collect();
    let fixed: Vec<VertexId> = a.vertices().to_vec();
    let mut level = vec![a.clone()];
    let mut explored = 0u64;
    let mut size = a.vertex_count();
    while size <= bound && !level.is_empty() {
        for b in &level {
            explored += 1;
            if extends_all(b, &maps) {
                return Ok(ProbeOutcome::Found(EppaWitness { extension: b.clone(), partial_automorphisms: maps.len() }));
            }
        }
        if size == bound {
            break;
        }
        let mut next: BTreeMap<Vec<u32>, Structure> = BTreeMap::new();
        for b in &level {
            let new = VertexId(b.vertices().last().map_or(0, |v| v.0 + 1));
            for c in augmentations(b, new)? {
                let key = iso_key(&c, &fixed);
                if next.contains_key(&key) {
                    continue;
                }
                if class_membership(&c, spec)?.member && spec.is_strong_in(&c, &base)? {
                    next.insert(key, c);
                    if next.len() > EPPA_LEVEL_LIMIT {
                        return Err(Error::resource(format!("more than {EPPA_LEVEL_LIMIT} candidate extensions")));
                    }
                }
            }
        }
        level = next.into_values().collect();
        size += 1;
    }
    Ok(ProbeOutcome::Exhausted { explored })
}
