//! Support-pattern search for finite triangle models and the possibilistic
//! feasibility checker.
//!
//! Sources are ordered α, β, γ; party A reads (β, γ), B reads (α, γ) and C
//! reads (α, β). Outcome `(a, b, c)` has index `4a + 2b + c`.

mod enumerate;
mod numeric;
mod pattern;
mod possibilistic;
mod symmetry;

pub use enumerate::{enumerate_and_prune, EnumerationReport};
pub use numeric::{numeric_feasibility, FeasibilityProblem, NumericConfig, NumericOutcome, Unknown};
pub use pattern::{support_mask, Mark, SupportPattern};
pub use possibilistic::{achievable_supports, possibilistic_feasible, Possibilistic, SearchMode};
pub use symmetry::TriangleSymmetry;

use crate::error::{domain, Result};
use crate::netcore::Network;

/// Triangle with one input and two outputs per party.
pub(crate) fn require_binary_triangle(network: &Network) -> Result<()> {
    let tri = Network::triangle();
    if network.incidence() != tri.incidence() || network.parties() != tri.parties() {
        return domain("expected the triangle network with binary outputs and no inputs");
    }
    Ok(())
}
