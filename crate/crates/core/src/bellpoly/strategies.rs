use crate::error::{Error, Result};
use crate::netcore::{Behavior, Network};
use crate::scalar::Rational;

/// Deterministic behaviors of a single-source scenario, one per joint strategy.
#[derive(Clone, Debug)]
pub struct StrategyMatrix {
    network: Network,
    /// `strategies[λ][i][x]` is party `i`'s output on input `x`.
    strategies: Vec<Vec<Vec<usize>>>,
    columns: Vec<Behavior<Rational>>,
}

impl StrategyMatrix {
    pub fn network(&self) -> &Network {
        &self.network
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn columns(&self) -> &[Behavior<Rational>] {
        &self.columns
    }

    pub fn column(&self, lambda: usize) -> &[Rational] {
        self.columns[lambda].values()
    }

    pub fn strategy(&self, lambda: usize) -> &[Vec<usize>] {
        &self.strategies[lambda]
    }
}

fn is_bell(network: &Network) -> bool {
    network.source_count() == 1 && (0..network.party_count()).all(|i| network.connected(i, 0))
}

pub(crate) fn bell_only(network: &Network) -> Result<()> {
    if is_bell(network) {
        return Ok(());
    }
    Err(Error::Domain(format!(
        "Bell-polytope tools need one source shared by every party, network has {} sources; \
         use the triangle search for multi-source networks",
        network.source_count()
    )))
}

/// All `∏ A_i^{X_i}` joint strategies in lexicographic order: party 0 first,
/// and within a party, the output on input 0 is the most significant digit.
pub fn enumerate_strategies(network: &Network) -> Result<StrategyMatrix> {
    bell_only(network)?;
    let radices: Vec<usize> = network.parties().iter().flat_map(|p| std::iter::repeat_n(p.outputs, p.inputs)).collect();
    let count = radices
        .iter()
        .try_fold(1usize, |acc, &r| acc.checked_mul(r))
        .ok_or_else(|| Error::Resource("strategy count overflows".into()))?;
    let mut strategies = Vec::with_capacity(count);
    let mut columns = Vec::with_capacity(count);
    for lambda in 0..count {
        let mut digits = vec![0; radices.len()];
        let mut rest = lambda;
        for k in (0..radices.len()).rev() {
            digits[k] = rest % radices[k];
            rest /= radices[k];
        }
        let mut it = digits.into_iter();
        let strategy: Vec<Vec<usize>> =
            network.parties().iter().map(|p| it.by_ref().take(p.inputs).collect()).collect();
        let column = Behavior::deterministic(network.clone(), |xs| {
            xs.iter().enumerate().map(|(i, &x)| strategy[i][x]).collect()
        })?;
        strategies.push(strategy);
        columns.push(column);
    }
    Ok(StrategyMatrix { network: network.clone(), strategies, columns })
}
