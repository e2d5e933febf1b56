use rayon::prelude::*;

use super::pattern::{support_mask, SupportPattern};
use super::symmetry::TriangleSymmetry;
use crate::error::Result;
use crate::netcore::Behavior;
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct EnumerationReport {
    /// Outcome bitmask of the target's support.
    pub support: u8,
    /// Patterns scanned (`3^12`).
    pub total: u64,
    /// Patterns whose possible-outcome set equals the support.
    pub matching: u64,
    /// Order of the target's stabilizer used for the reduction.
    pub stabilizer_order: usize,
    /// Canonical representatives, sorted by code.
    pub survivors: Vec<SupportPattern>,
}

/// Scans every (2, 2, 2) pattern, keeps those whose possible outcomes are exactly
/// the target's support, and reduces them modulo the target's stabilizer.
///
/// Equality of possible-outcome sets subsumes the zero-probability pruning: a
/// pattern allowing an outcome with target probability 0 can never be fixed by
/// choosing interior values, and one missing a supported outcome cannot produce it.
pub fn enumerate_and_prune<S: Scalar>(target: &Behavior<S>) -> Result<EnumerationReport> {
    let stabilizer = TriangleSymmetry::stabilizer(target)?;
    let support = support_mask(target.values());
    let total = 3u64.pow(12);
    let matching: Vec<SupportPattern> = (0..total)
        .into_par_iter()
        .map(SupportPattern::from_code)
        .filter(|p| p.possible_outcomes() == support)
        .collect();
    let mut survivors: Vec<SupportPattern> =
        matching.par_iter().map(|p| TriangleSymmetry::canonical(p, &stabilizer)).collect();
    survivors.sort();
    survivors.dedup();
    Ok(EnumerationReport {
        support,
        total,
        matching: matching.len() as u64,
        stabilizer_order: stabilizer.len(),
        survivors,
    })
}
