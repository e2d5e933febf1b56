//! Finite local hidden-variable models: evaluation, conditional families and
//! exact source compression.

mod builders;
mod caratheodory;
mod compress;
mod model;

pub use builders::{p_eq, p_neq, threshold_triangle_model, two_bit_triangle_model, uneven_threshold_model};
pub use caratheodory::caratheodory_reduce;
pub use compress::{compress_source, Compression};
pub use model::{
    conditional_family, evaluate, evaluate_with, AnyModel, ConditionalBehaviorFamily, EvalConfig, FamilyMember,
    FiniteLocalModel, ModelFile, ResponseJson, ResponseTable, DEFAULT_GRID_CAP,
};
