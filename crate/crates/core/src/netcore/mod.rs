//! Scenario definitions, behavior vectors and cardinality-bound arithmetic.

mod behavior;
mod bounds;
mod network;

pub use behavior::{
    is_nonsignaling, AnyBehavior, Behavior, BehaviorFile, NetworkRef, NonsignalingReport, SignalingViolation,
};
pub use bounds::{
    affine_dimension, cardinality_bound_basic, cardinality_bound_refined, relaxation_size, RefinedBound, RelaxationSize,
};
pub use network::{Network, NetworkJson, Party, PartyJson, PartySplit};
