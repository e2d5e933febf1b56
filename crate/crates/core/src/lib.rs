//! Classical correlations in causal networks.
//!
//! Finite local hidden-variable models and their compression, universal
//! cardinality bounds, exact Bell-polytope membership and facets, a support
//! pattern search for triangle models, an exact polynomial certificate for the
//! bilocal detection-efficiency bound, and the quantum correlators it is checked
//! against.

pub mod bellpoly;
pub mod error;
pub mod finitemodel;
pub mod linalg;
pub mod netcore;
pub mod polysos;
pub mod quantumcorr;
pub mod scalar;
pub mod simplex;
pub mod trianglesearch;

pub use error::{Error, Result};
pub use scalar::{Flavor, Rational, Scalar};
