//! Refinement between orientations of one graph and fine (refinement-maximal)
//! orientations.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Orientation, VertexSet};
use crate::orientability::enumerate_orientations;
use crate::predimension::{scl_mask, StrongKind};

/// Orientation spaces larger than this are not searched for refinements.
pub const MAX_SPACE_POINTS: usize = 1 << 20;

/// Roots beyond this make kind-d closed-set enumeration a resource error.
const MAX_ROOTS: usize = 22;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefinementVerdict {
    pub is_refinement: bool,
    /// A closed set of the first orientation that is not closed in the second.
    pub witness: Option<VertexSet>,
    pub proper: bool,
}

type Mask = u128;

fn mask_of(bits: &[bool]) -> Mask {
    bits.iter().enumerate().filter(|&(_, &b)| b).fold(0, |m, (i, _)| m | 1 << i)
}

fn mask_to_set(o: &Orientation, m: Mask) -> VertexSet {
    (0..o.vertex_count()).filter(|&i| m >> i & 1 == 1).map(|i| o.vertex_at(i)).collect()
}

/// Closed-set data: successor closures of single vertices (kind s) or the
/// full family of ⊑_d-closed sets (kind d).
#[derive(Clone, Debug, PartialEq, Eq)]
enum Signature {
    S(Vec<Mask>),
    D(BTreeSet<Mask>),
}

fn unary_closures(o: &Orientation) -> Vec<Mask> {
    (0..o.vertex_count()).map(|v| mask_of(&scl_mask(o, &[v]))).collect()
}

/// The ⊑_d-closed sets are `{v : roots(scl v) ⊆ R}` for sets `R` of roots.
fn d_closed_family(o: &Orientation) -> Result<BTreeSet<Mask>> {
    let n = o.vertex_count();
    let k = o.k() as usize;
    let roots: Vec<usize> = (0..n).filter(|&i| o.out_indices(i).len() < k).collect();
    if roots.len() > MAX_ROOTS {
        return Err(Error::resource(format!("{} roots is too many to enumerate closed sets", roots.len())));
    }
    let root_mask: Mask = roots.iter().fold(0, |m, &r| m | 1 << r);
    let need: Vec<Mask> = unary_closures(o).into_iter().map(|s| s & root_mask).collect();
    let mut family = BTreeSet::new();
    for sub in 0u64..1 << roots.len() {
        let r: Mask = roots.iter().enumerate().filter(|&(b, _)| sub >> b & 1 == 1).fold(0, |m, (_, &x)| m | 1 << x);
        let x = (0..n).filter(|&v| need[v] & !r == 0).fold(0, |m, v| m | 1 << v);
        family.insert(x);
    }
    Ok(family)
}

fn check_size(o: &Orientation) -> Result<()> {
    if o.vertex_count() > Mask::BITS as usize {
        Err(Error::resource(format!("{} vertices is too many for closed-set comparison", o.vertex_count())))
    } else {
        Ok(())
    }
}

fn signature(o: &Orientation, kind: StrongKind) -> Result<Signature> {
    check_size(o)?;
    Ok(match kind {
        StrongKind::S => Signature::S(unary_closures(o)),
        StrongKind::D => Signature::D(d_closed_family(o)?),
    })
}

/// Whether `b` refines `a`, with the first closed set of `a` that is not
/// closed in `b` otherwise.
fn refines(a: &Signature, b: &Signature) -> std::result::Result<(), Mask> {
    match (a, b) {
        (Signature::S(sa), Signature::S(sb)) => match sa.iter().zip(sb).find(|&(x, y)| y & !x != 0) {
            Some((x, _)) => Err(*x),
            None => Ok(()),
        },
        (Signature::D(fa), Signature::D(fb)) => match fa.iter().find(|x| !fb.contains(x)) {
            Some(x) => Err(*x),
            None => Ok(()),
        },
        _ => unreachable!("signatures of one kind"),
    }
}

fn same_space(a: &Orientation, b: &Orientation) -> Result<()> {
    if a.k() != b.k() || a.vertices() != b.vertices() || a.undirected_reduct() != b.undirected_reduct() {
        return Err(Error::domain("orientations do not orient the same graph with the same k"));
    }
    Ok(())
}

/// Whether every closed set of `a` is closed in `b`.
pub fn is_refinement(a: &Orientation, b: &Orientation, kind: StrongKind) -> Result<RefinementVerdict> {
    same_space(a, b)?;
    let (sa, sb) = (signature(a, kind)?, signature(b, kind)?);
    Ok(match refines(&sa, &sb) {
        Ok(()) => RefinementVerdict { is_refinement: true, witness: None, proper: refines(&sb, &sa).is_err() },
        Err(x) => RefinementVerdict { is_refinement: false, witness: Some(mask_to_set(a, x)), proper: false },
    })
}

struct Space {
    points: Vec<Orientation>,
    sigs: Vec<Signature>,
}

fn space_of(g: &Graph, k: u32, kind: StrongKind) -> Result<Space> {
    let space = enumerate_orientations(g, k, Some(MAX_SPACE_POINTS))?;
    if space.truncated {
        return Err(Error::resource(format!("more than {MAX_SPACE_POINTS} orientations")));
    }
    if g.vertex_count() > Mask::BITS as usize {
        return Err(Error::resource("graph too large for closed-set comparison"));
    }
    let sigs = space.points.par_iter().map(|o| signature(o, kind)).collect::<Result<Vec<_>>>()?;
    Ok(Space { points: space.points, sigs })
}

fn has_proper_refinement(sp: &Space, sig: &Signature) -> bool {
    sp.sigs.par_iter().any(|t| refines(sig, t).is_ok() && refines(t, sig).is_err())
}

/// Whether no orientation of the same graph properly refines `o`.
pub fn is_fine(o: &Orientation, kind: StrongKind) -> Result<bool> {
    let sp = space_of(&o.undirected_reduct(), o.k(), kind)?;
    let sig = signature(o, kind)?;
    Ok(!has_proper_refinement(&sp, &sig))
}

/// The fine points of the orientation space, in enumeration order.
pub fn fine_orientations(g: &Graph, k: u32, kind: StrongKind) -> Result<Vec<Orientation>> {
    let sp = space_of(g, k, kind)?;
    let fine: Vec<bool> = sp.sigs.par_iter().map(|s| !has_proper_refinement(&sp, s)).collect();
    Ok(sp.points.into_iter().zip(fine).filter(|&(_, f)| f).map(|(o, _)| o).collect())
}

/// A fine refinement of `o`: `o` itself when already fine, otherwise the one
/// with least canonical encoding.
pub fn refine_to_fine(o: &Orientation, kind: StrongKind) -> Result<Orientation> {
    let sp = space_of(&o.undirected_reduct(), o.k(), kind)?;
    let sig = signature(o, kind)?;
    if !has_proper_refinement(&sp, &sig) {
        return Ok(o.clone());
    }
    sp.points
        .iter()
        .zip(&sp.sigs)
        .filter(|(_, s)| refines(&sig, s).is_ok() && !has_proper_refinement(&sp, s))
        .map(|(p, _)| p)
        .min_by_key(|p| crate::graph::canonical_encode_orientation(p))
        .cloned()
        .ok_or_else(|| Error::domain("no fine refinement found"))
}
