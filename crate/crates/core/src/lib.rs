//! Combinatorics of k-sparse graphs: constructive orientations, predimension
//! and closure operators, free amalgamation classes, tree gadgets, finite
//! approximations of generic structures and symmetry computations.

pub mod classes;
pub mod corpus;
pub mod dot;
pub mod dynamics;
pub mod error;
pub mod gadgets;
pub mod generic;
pub mod graph;
mod matching;
pub mod orientability;
pub mod predimension;

pub use error::{Error, Result};
pub use graph::{
    canonical_decode, canonical_encode_graph, canonical_encode_orientation, induced_subgraph,
    undirected_reduct, vset, Embedding, Graph, Orientation, Structure, SubsetHandle, VertexId,
    VertexSet,
};
pub use classes::{
    class_membership, enumerate_strong_copies, free_amalgam, free_amalgam_shared, growth_violator, AmalgamResult,
    ClassKind, ClassSpec, GrowthFunction, MembershipVerdict, ProbeOutcome,
};
pub use gadgets::{attach_gadgets, build_t0, build_t1, iterated_free_amalgam, AttachedGadgets, RootedGadget};
pub use generic::{build_generic, reduct_consistency, verify_extension_property, GenericApproximation};
pub use orientability::{check_sparsity, enumerate_orientations, orient, ArcConstraint, OrientationSpace};
pub use predimension::{d_closure, delta, is_strong, successor_closure, successor_d_closure, StrongKind};
