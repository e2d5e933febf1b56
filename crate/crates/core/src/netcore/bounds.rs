use serde::Serialize;

use crate::error::{domain, Result};
use crate::netcore::{Network, PartySplit};

/// Affine dimension of the nonsignaling set for parties with the given input and
/// output alphabet sizes: `∏ (X_i (A_i - 1) + 1) - 1`. The empty party list gives 0.
pub fn affine_dimension(inputs: &[usize], outputs: &[usize]) -> u128 {
    assert_eq!(inputs.len(), outputs.len(), "one input and one output size per party");
    inputs
        .iter()
        .zip(outputs)
        .map(|(&x, &a)| (x as u128) * (a.saturating_sub(1) as u128) + 1)
        .try_fold(1u128, |acc, f| acc.checked_mul(f))
        .expect("affine dimension overflows u128")
        - 1
}

fn affine_dimension_of(network: &Network, parties: &[usize]) -> u128 {
    let x: Vec<usize> = parties.iter().map(|&i| network.party(i).inputs).collect();
    let a: Vec<usize> = parties.iter().map(|&i| network.party(i).outputs).collect();
    affine_dimension(&x, &a)
}

/// `d + 1` with `d` the behavior dimension.
pub fn cardinality_bound_basic(network: &Network) -> u128 {
    network.dimension() as u128 + 1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RefinedBound {
    pub value: u128,
    pub split: PartySplit,
    pub affdim_all: u128,
    pub affdim_b_side: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// `affdim(all parties) - affdim(parties not reading the source)`.
pub fn cardinality_bound_refined(network: &Network, source: usize) -> Result<RefinedBound> {
    let split = network.party_split(source)?;
    let all: Vec<usize> = (0..network.party_count()).collect();
    let affdim_all = affine_dimension_of(network, &all);
    let affdim_b_side = affine_dimension_of(network, &split.b_side);
    let note = split
        .b_side
        .is_empty()
        .then(|| "every party reads this source; the bound is the whole nonsignaling space".to_string());
    Ok(RefinedBound { value: affdim_all - affdim_b_side, split, affdim_all, affdim_b_side, note })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RelaxationSize {
    pub rank: u128,
    pub degrees_of_freedom: u128,
    pub moment_matrix_side: u128,
}

/// Size of the degree-2 moment relaxation for the triangle at source rank `r`:
/// `D = 3(r² + r - 1)` unknowns and a `D(D+1)/2` square moment matrix.
pub fn relaxation_size(rank: u128) -> Result<RelaxationSize> {
    if rank == 0 {
        return domain("relaxation rank must be at least 1");
    }
    let d = 3 * (rank * rank + rank - 1);
    Ok(RelaxationSize { rank, degrees_of_freedom: d, moment_matrix_side: d * (d + 1) / 2 })
}
