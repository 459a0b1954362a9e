//! Strong classes of sparse graphs and orientations: membership, free
//! amalgamation, strong copies, and bounded amalgamation/extension probes.

pub mod growth;
pub mod probes;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dynamics::fine::is_fine;
use crate::error::{Error, Result};
use crate::graph::{Embedding, Graph, Orientation, Structure, VertexId, VertexSet};
use crate::orientability::check_sparsity;
use crate::predimension::{is_strong, is_strong_in_orientation, StrongKind};

pub use growth::{growth_check, GrowthFunction, GrowthReport};
pub use probes::{eppa_probe, wap_probe, ProbeOutcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ClassKind {
    /// k-sparse graphs with ≤_s.
    #[serde(rename = "C0_s")]
    C0S,
    /// Graphs with δ(X) >= F(|X|) for all X, with ≤_d.
    #[serde(rename = "CF_d")]
    CFD,
    /// k-orientations with ⊑_s (successor-closed subsets).
    #[serde(rename = "D0_s")]
    D0S,
    /// k-orientations of graphs in the F-class, with ⊑_d.
    #[serde(rename = "DF_d")]
    DFD,
    /// Fine orientations in D0.
    #[serde(rename = "E0_fine")]
    E0Fine,
    /// d-fine orientations in DF.
    #[serde(rename = "EF_dfine")]
    EFDFine,
}

impl ClassKind {
    pub fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "C0_s" | "c0" => ClassKind::C0S,
            "CF_d" | "cf" => ClassKind::CFD,
            "D0_s" | "d0" => ClassKind::D0S,
            "DF_d" | "df" => ClassKind::DFD,
            "E0_fine" | "e0" => ClassKind::E0Fine,
            "EF_dfine" | "ef" => ClassKind::EFDFine,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            ClassKind::C0S => "C0_s",
            ClassKind::CFD => "CF_d",
            ClassKind::D0S => "D0_s",
            ClassKind::DFD => "DF_d",
            ClassKind::E0Fine => "E0_fine",
            ClassKind::EFDFine => "EF_dfine",
        }
    }

    pub fn needs_growth(self) -> bool {
        matches!(self, ClassKind::CFD | ClassKind::DFD | ClassKind::EFDFine)
    }

    pub fn is_oriented(self) -> bool {
        !matches!(self, ClassKind::C0S | ClassKind::CFD)
    }

    /// The predimension relation behind the class's strong substructures.
    pub fn strong_kind(self) -> StrongKind {
        if self.needs_growth() {
            StrongKind::D
        } else {
            StrongKind::S
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassSpec {
    pub kind: ClassKind,
    pub k: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub growth: Option<GrowthFunction>,
}

impl ClassSpec {
    pub fn new(kind: ClassKind, k: u32, growth: Option<GrowthFunction>) -> Result<Self> {
        let s = ClassSpec { kind, k, growth };
        s.validate()?;
        Ok(s)
    }

    pub fn c0(k: u32) -> Self {
        ClassSpec { kind: ClassKind::C0S, k, growth: None }
    }

    pub fn cf(k: u32, f: GrowthFunction) -> Self {
        ClassSpec { kind: ClassKind::CFD, k, growth: Some(f) }
    }

    pub fn d0(k: u32) -> Self {
        ClassSpec { kind: ClassKind::D0S, k, growth: None }
    }

    pub fn df(k: u32, f: GrowthFunction) -> Self {
        ClassSpec { kind: ClassKind::DFD, k, growth: Some(f) }
    }

    /// The k = 2 class cut out by [`GrowthFunction::girth_five`].
    pub fn girth_five() -> Self {
        Self::cf(2, GrowthFunction::girth_five())
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::domain("k must be at least 1"));
        }
        match (&self.growth, self.kind.needs_growth()) {
            (None, true) => Err(Error::domain(format!("class {} needs a growth function", self.kind.name()))),
            (Some(_), false) => Err(Error::domain(format!("class {} takes no growth function", self.kind.name()))),
            (Some(f), true) => f.validate(),
            (None, false) => Ok(()),
        }
    }

    pub(crate) fn growth_fn(&self) -> Result<&GrowthFunction> {
        self.growth
            .as_ref()
            .ok_or_else(|| Error::domain(format!("class {} needs a growth function", self.kind.name())))
    }

    /// Whether `a` is a strong substructure of `s` under the class relation:
    /// ≤_s / ≤_d on graphs, ⊑_s / ⊑_d on orientations.
    pub fn is_strong_in(&self, s: &Structure, a: &VertexSet) -> Result<bool> {
        match s {
            Structure::Graph(g) => Ok(is_strong(g, a, self.kind.strong_kind(), self.k)?.strong),
            Structure::Oriented(o) => is_strong_in_orientation(o, a, self.kind.strong_kind()),
        }
    }

    /// Same kind of structure as the class (graph or orientation with this k).
    pub(crate) fn check_kind(&self, s: &Structure) -> Result<()> {
        match (s, self.kind.is_oriented()) {
            (Structure::Graph(_), false) => Ok(()),
            (Structure::Oriented(o), true) if o.k() == self.k => Ok(()),
            (Structure::Oriented(o), true) => {
                Err(Error::domain(format!("orientation has k = {} but the class has k = {}", o.k(), self.k)))
            }
            (Structure::Graph(_), true) => {
                Err(Error::domain(format!("class {} expects an orientation", self.kind.name())))
            }
            (Structure::Oriented(_), false) => {
                Err(Error::domain(format!("class {} expects an undirected graph", self.kind.name())))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipVerdict {
    pub member: bool,
    pub violator: Option<VertexSet>,
}

impl MembershipVerdict {
    fn yes() -> Self {
        MembershipVerdict { member: true, violator: None }
    }

    fn no(v: Option<VertexSet>) -> Self {
        MembershipVerdict { member: false, violator: v }
    }
}

/// Cap on the number of subsets the F-class search visits.
pub const SUBSET_VISIT_LIMIT: u64 = 50_000_000;

/// Vertices of the k-core: repeatedly strip vertices of degree below `k`.
fn k_core(g: &Graph, k: u32) -> Vec<bool> {
    let n = g.vertex_count();
    let mut alive = vec![true; n];
    let mut deg: Vec<usize> = (0..n).map(|i| g.adjacent_indices(i).len()).collect();
    let mut stack: Vec<usize> = (0..n).filter(|&i| deg[i] < k as usize).collect();
    while let Some(v) = stack.pop() {
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        for &w in g.adjacent_indices(v) {
            if alive[w] {
                deg[w] -= 1;
                if deg[w] < k as usize {
                    stack.push(w);
                }
            }
        }
    }
    alive
}

struct ConnectedSearch<'a> {
    g: &'a Graph,
    allowed: &'a [bool],
    max_size: usize,
    k: i64,
    f: &'a GrowthFunction,
    visits: u64,
    cover: Vec<u32>,
    in_sub: Vec<bool>,
}

impl ConnectedSearch<'_> {
    /// Enumerates connected subsets whose least vertex is `root`; returns a
    /// violating subset if one is met.
    fn extend(&mut self, sub: &mut Vec<usize>, ext: Vec<usize>, root: usize, delta: i64) -> Result<Option<Vec<usize>>> {
        self.visits += 1;
        if self.visits > SUBSET_VISIT_LIMIT {
            return Err(Error::resource("connected subset enumeration exceeded its visit limit"));
        }
        if !self.f.admits(sub.len(), delta) {
            return Ok(Some(sub.clone()));
        }
        if sub.len() == self.max_size {
            return Ok(None);
        }
        let mut ext = ext;
        while let Some(w) = ext.pop() {
            let mut next = ext.clone();
            for &u in self.g.adjacent_indices(w) {
                if u > root && self.allowed[u] && self.cover[u] == 0 && !next.contains(&u) {
                    next.push(u);
                }
            }
            let into = self.g.adjacent_indices(w).iter().filter(|&&u| self.in_sub[u]).count() as i64;
            self.add(w, 1);
            sub.push(w);
            let found = self.extend(sub, next, root, delta + self.k - into)?;
            sub.pop();
            self.add(w, -1);
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }

    fn add(&mut self, w: usize, sign: i32) {
        self.in_sub[w] = sign > 0;
        let bump = |c: &mut u32| *c = (*c as i32 + sign) as u32;
        bump(&mut self.cover[w]);
        for i in 0..self.g.adjacent_indices(w).len() {
            let u = self.g.adjacent_indices(w)[i];
            bump(&mut self.cover[u]);
        }
    }

    fn run(&mut self) -> Result<Option<Vec<usize>>> {
        for root in 0..self.g.vertex_count() {
            if !self.allowed[root] {
                continue;
            }
            let ext: Vec<usize> =
                self.g.adjacent_indices(root).iter().copied().filter(|&u| u > root && self.allowed[u]).collect();
            self.add(root, 1);
            let mut sub = vec![root];
            let found = self.extend(&mut sub, ext, root, self.k)?;
            self.add(root, -1);
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }
}

fn all_subsets_violator(
    g: &Graph,
    allowed: &[bool],
    sizes: impl Fn(usize) -> bool,
    k: u32,
    f: &GrowthFunction,
) -> Result<Option<Vec<usize>>> {
    let pool: Vec<usize> = (0..g.vertex_count()).filter(|&i| allowed[i]).collect();
    if pool.len() > 26 {
        return Err(Error::resource(format!(
            "{} candidate vertices is too many for the all-subsets search",
            pool.len()
        )));
    }
    for mask in 1u64..(1u64 << pool.len()) {
        let size = mask.count_ones() as usize;
        if !sizes(size) {
            continue;
        }
        let mut inside = vec![false; g.vertex_count()];
        for (b, &v) in pool.iter().enumerate() {
            inside[v] = mask >> b & 1 == 1;
        }
        let d = crate::predimension::delta_mask(g, &inside, k);
        if !f.admits(size, d) {
            return Ok(Some((0..g.vertex_count()).filter(|&i| inside[i]).collect()));
        }
    }
    Ok(None)
}

/// Some `X` with `δ(X) < F(|X|)`, if any.
///
/// An inclusion-minimal violator of size `s` with `F(s) - F(s-1) <= 1` has
/// minimum degree at least `k` (dropping a vertex of lower degree lowers δ by
/// at least 1), so it lies in the k-core; when `F` is concave it is also
/// connected. Only the remaining "steep" sizes are searched in the whole
/// graph.
pub fn growth_violator(g: &Graph, k: u32, f: &GrowthFunction) -> Result<Option<VertexSet>> {
    let n = g.vertex_count();
    let steep: Vec<bool> = (0..=n).map(|s| s > 0 && f.eval(s as f64) - f.eval(s as f64 - 1.0) > 1.0 + 1e-9).collect();
    let core = k_core(g, k);
    let everything = vec![true; n];
    let found = if f.is_concave() {
        let max_steep = (0..=n).rev().find(|&s| steep[s]).unwrap_or(0);
        let mut hit = None;
        for (allowed, max_size) in [(&everything, max_steep), (&core, n)] {
            if max_size == 0 {
                continue;
            }
            let mut s = ConnectedSearch {
                g,
                allowed,
                max_size,
                k: i64::from(k),
                f,
                visits: 0,
                cover: vec![0; n],
                in_sub: vec![false; n],
            };
            hit = s.run()?;
            if hit.is_some() {
                break;
            }
        }
        hit
    } else {
        match all_subsets_violator(g, &everything, |s| steep[s], k, f) {
            Ok(Some(v)) => Some(v),
            Ok(None) => all_subsets_violator(g, &core, |_| true, k, f)?,
            Err(_) if steep.iter().all(|&b| !b) => all_subsets_violator(g, &core, |_| true, k, f)?,
            Err(e) => return Err(e),
        }
    };
    Ok(found.map(|v| v.into_iter().map(|i| g.vertex_at(i)).collect()))
}

fn graph_membership(g: &Graph, spec: &ClassSpec) -> Result<MembershipVerdict> {
    let sparse = check_sparsity(g, spec.k)?;
    if !sparse.sparse {
        return Ok(MembershipVerdict::no(sparse.violator));
    }
    if spec.kind.needs_growth() {
        if let Some(v) = growth_violator(g, spec.k, spec.growth_fn()?)? {
            return Ok(MembershipVerdict::no(Some(v)));
        }
    }
    Ok(MembershipVerdict::yes())
}

/// Membership of `s` in the class described by `spec`.
pub fn class_membership(s: &Structure, spec: &ClassSpec) -> Result<MembershipVerdict> {
    spec.validate()?;
    spec.check_kind(s)?;
    match s {
        Structure::Graph(g) => graph_membership(g, spec),
        Structure::Oriented(o) => {
            let base = graph_membership(&o.undirected_reduct(), spec)?;
            if !base.member {
                return Ok(base);
            }
            match spec.kind {
                ClassKind::E0Fine | ClassKind::EFDFine => {
                    if is_fine(o, spec.kind.strong_kind())? {
                        Ok(MembershipVerdict::yes())
                    } else {
                        Ok(MembershipVerdict::no(None))
                    }
                }
                _ => Ok(MembershipVerdict::yes()),
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmalgamResult {
    pub amalgam: Structure,
    pub left_embedding: Embedding,
    pub right_embedding: Embedding,
    pub in_class: bool,
}

/// Free amalgam of `b1` and `b2` over a common `A`, given by embeddings
/// `base1: A -> b1` and `base2: A -> b2` with the same domain.
///
/// `b1` keeps its vertex ids; the vertices of `b2` outside the base get
/// fresh ids above those of `b1`, in ascending order.
pub fn free_amalgam(
    b1: &Structure,
    b2: &Structure,
    base1: &Embedding,
    base2: &Embedding,
    spec: Option<&ClassSpec>,
) -> Result<AmalgamResult> {
    match (b1, b2) {
        (Structure::Graph(_), Structure::Graph(_)) => {}
        (Structure::Oriented(x), Structure::Oriented(y)) if x.k() == y.k() => {}
        _ => return Err(Error::domain("cannot amalgamate structures of different kinds")),
    }
    if base1.map.keys().ne(base2.map.keys()) {
        return Err(Error::domain("base embeddings have different domains"));
    }
    for (&x, &y) in base1.map.values().zip(base2.map.values()) {
        if !b1.vertices().contains(&x) || !b2.vertices().contains(&y) {
            return Err(Error::domain("base embedding image outside its structure"));
        }
    }
    let img1 = base1.image();
    let img2 = base2.image();
    if img1.len() != base1.map.len() || img2.len() != base2.map.len() {
        return Err(Error::domain("base embeddings are not injective"));
    }
    // The two images must be copies of the same A via the common domain.
    let pairs: Vec<(VertexId, VertexId)> = base1.map.values().copied().zip(base2.map.values().copied()).collect();
    for &(x1, x2) in &pairs {
        for &(y1, y2) in &pairs {
            if x1 != y1 && b1.related(x1, y1) != b2.related(x2, y2) {
                return Err(Error::domain("base images are not isomorphic copies of the common substructure"));
            }
        }
    }
    if let Some(spec) = spec {
        spec.validate()?;
        spec.check_kind(b1)?;
        spec.check_kind(b2)?;
        if !spec.is_strong_in(b1, &img1)? || !spec.is_strong_in(b2, &img2)? {
            return Err(Error::domain("the common substructure is not strong in both factors"));
        }
    }
    let mut next = b1.vertices().last().map_or(0, |v| v.0 + 1);
    let mut right: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    for &(x1, x2) in &pairs {
        right.insert(x2, x1);
    }
    for &v in b2.vertices() {
        if !right.contains_key(&v) {
            right.insert(v, VertexId(next));
            next += 1;
        }
    }
    let vertices: Vec<VertexId> = b1.vertices().iter().copied().chain(b2.vertices().iter().filter(|v| !img2.contains(v)).map(|v| right[v])).collect();
    let amalgam = match (b1, b2) {
        (Structure::Graph(g1), Structure::Graph(g2)) => {
            let mut edges: Vec<(VertexId, VertexId)> = g1.edges().to_vec();
            for &(u, v) in g2.edges() {
                let e = (right[&u], right[&v]);
                let e = if e.0 < e.1 { e } else { (e.1, e.0) };
                if !(img2.contains(&u) && img2.contains(&v)) {
                    edges.push(e);
                }
            }
            Structure::Graph(Graph::new(vertices, edges)?)
        }
        (Structure::Oriented(o1), Structure::Oriented(o2)) => {
            let mut arcs: Vec<(VertexId, VertexId)> = o1.arcs().to_vec();
            for &(u, v) in o2.arcs() {
                if !(img2.contains(&u) && img2.contains(&v)) {
                    arcs.push((right[&u], right[&v]));
                }
            }
            Structure::Oriented(Orientation::new(vertices, arcs, o1.k())?)
        }
        _ => unreachable!("kinds checked above"),
    };
    let in_class = match spec {
        Some(spec) => class_membership(&amalgam, spec)?.member,
        None => false,
    };
    Ok(AmalgamResult {
        amalgam,
        left_embedding: Embedding::identity(b1.vertices().iter().copied()),
        right_embedding: Embedding::new(right),
        in_class,
    })
}

/// Free amalgam over vertex ids shared by both structures (identity base maps).
pub fn free_amalgam_shared(b1: &Structure, b2: &Structure, shared: &VertexSet, spec: Option<&ClassSpec>) -> Result<AmalgamResult> {
    let base = Embedding::identity(shared.iter().copied());
    free_amalgam(b1, b2, &base, &base, spec)
}

/// All embeddings of `a` into `b` whose image is strong in `b`, in
/// lexicographic order of the image tuple.
pub fn enumerate_strong_copies(a: &Structure, b: &Structure, spec: &ClassSpec) -> Result<Vec<Embedding>> {
    spec.validate()?;
    spec.check_kind(a)?;
    spec.check_kind(b)?;
    let mut out = Vec::new();
    for map in embeddings(a, b) {
        let image: VertexSet = map.iter().copied().collect();
        if spec.is_strong_in(b, &image)? {
            out.push(Embedding::new(a.vertices().iter().copied().zip(map).collect()));
        }
    }
    Ok(out)
}

/// All embeddings of `a` into `b` as image lists aligned with `a.vertices()`.
pub(crate) fn embeddings(a: &Structure, b: &Structure) -> Vec<Vec<VertexId>> {
    let av = a.vertices();
    let bv = b.vertices();
    let mut out = Vec::new();
    let mut cur: Vec<VertexId> = Vec::new();
    let mut used = vec![false; bv.len()];
    fn go(
        a: &Structure,
        b: &Structure,
        av: &[VertexId],
        bv: &[VertexId],
        cur: &mut Vec<VertexId>,
        used: &mut [bool],
        out: &mut Vec<Vec<VertexId>>,
    ) {
        let i = cur.len();
        if i == av.len() {
            out.push(cur.clone());
            return;
        }
        for (j, &w) in bv.iter().enumerate() {
            if used[j] {
                continue;
            }
            let ok = (0..i).all(|p| a.related(av[p], av[i]) == b.related(cur[p], w) && a.related(av[i], av[p]) == b.related(w, cur[p]));
            if ok {
                used[j] = true;
                cur.push(w);
                go(a, b, av, bv, cur, used, out);
                cur.pop();
                used[j] = false;
            }
        }
    }
    go(a, b, av, bv, &mut cur, &mut used, &mut out);
    out
}
