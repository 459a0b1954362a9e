//! Symmetry and refinement computations on orientation spaces.

pub mod automorphism;
pub mod balls;
pub mod canon;
pub mod fine;
pub mod orbits;

pub use automorphism::{automorphisms, automorphisms_with_limit, AutomorphismGroup, DEFAULT_VERTEX_LIMIT};
pub use balls::{ball_bound, power_bound, reachability_ball, s_recursion, BallReport};
pub use canon::{canonical_graph, canonical_orientation, iso_key, isomorphic};
pub use fine::{fine_orientations, is_fine, is_refinement, refine_to_fine, RefinementVerdict};
pub use orbits::{direction_count_check, orientation_orbits, orientation_orbits_with_limit, DirectionReport, OrbitPartition};
