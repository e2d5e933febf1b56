//! Single-source Bell polytopes: deterministic strategies, exact membership
//! with dual certificates, and facets in the Collins–Gisin chart.

mod facets;
mod membership;
mod strategies;

pub use facets::{facet_enumeration, CollinsGisin, Facet, FACET_STRATEGY_CAP};
pub use membership::{membership_lp, Decomposition, LocalityCertificate, Membership};
pub use strategies::{enumerate_strategies, StrategyMatrix};
