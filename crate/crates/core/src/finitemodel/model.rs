use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::netcore::{Behavior, Network, NetworkRef};
use crate::scalar::{Flavor, Rational, Scalar};

/// Default cap on source-grid points per input tuple.
pub const DEFAULT_GRID_CAP: u128 = 100_000_000;

/// `P_i(a | x, λ_[i])` for one party. Columns enumerate the values of the sources
/// the party reads, in ascending source order, last source fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct ResponseTable<S> {
    inputs: usize,
    outputs: usize,
    column_cards: Vec<usize>,
    probs: Vec<S>,
}

impl<S: Scalar> ResponseTable<S> {
    pub fn columns(&self) -> usize {
        self.column_cards.iter().product()
    }

    pub fn column_cards(&self) -> &[usize] {
        &self.column_cards
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn column_of(&self, lambdas: &[usize]) -> usize {
        lambdas.iter().zip(&self.column_cards).fold(0, |acc, (&l, &c)| acc * c + l)
    }

    pub fn column_values(&self, mut col: usize) -> Vec<usize> {
        let mut v = vec![0; self.column_cards.len()];
        for (k, &c) in self.column_cards.iter().enumerate().rev() {
            v[k] = col % c;
            col /= c;
        }
        v
    }

    /// Output distribution for input `x` and column `col`.
    pub fn dist(&self, x: usize, col: usize) -> &[S] {
        let start = (x * self.columns() + col) * self.outputs;
        &self.probs[start..start + self.outputs]
    }

    pub fn probs(&self) -> &[S] {
        &self.probs
    }
}

/// Independent finite sources with discrete weights, and one response table per party.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteLocalModel<S> {
    network: Network,
    sources: Vec<Vec<S>>,
    responses: Vec<ResponseTable<S>>,
}

impl<S: Scalar> FiniteLocalModel<S> {
    /// `responses[i]` is the flat table of party `i`, ordered (input, column, output).
    pub fn new(network: Network, sources: Vec<Vec<S>>, responses: Vec<Vec<S>>) -> Result<Self> {
        if sources.len() != network.source_count() {
            return domain(format!(
                "model has {} source distributions, network has {} sources",
                sources.len(),
                network.source_count()
            ));
        }
        if responses.len() != network.party_count() {
            return domain(format!(
                "model has {} response tables, network has {} parties",
                responses.len(),
                network.party_count()
            ));
        }
        for (j, w) in sources.iter().enumerate() {
            if w.is_empty() {
                return domain(format!("source {j} has an empty value set"));
            }
            if w.iter().any(Scalar::is_negative_tol) {
                return domain(format!("source {j} has a negative weight"));
            }
            let total = w.iter().cloned().fold(S::zero(), |a, b| a + b);
            if !total.approx_eq(&S::one()) {
                return domain(format!("source {j} weights sum to {total:?}, not 1"));
            }
        }
        let cards: Vec<usize> = sources.iter().map(Vec::len).collect();
        let mut tables = Vec::with_capacity(responses.len());
        for (i, probs) in responses.into_iter().enumerate() {
            let party = network.party(i);
            let column_cards: Vec<usize> = network.sources_of(i).iter().map(|&j| cards[j]).collect();
            let table = ResponseTable { inputs: party.inputs, outputs: party.outputs, column_cards, probs };
            let expected = party.inputs * table.columns() * party.outputs;
            if table.probs.len() != expected {
                return domain(format!(
                    "response table of party {i} has {} entries, expected {expected}",
                    table.probs.len()
                ));
            }
            for (k, dist) in table.probs.chunks(party.outputs).enumerate() {
                if dist.iter().any(Scalar::is_negative_tol) {
                    return domain(format!("party {i} response column {k} has a negative entry"));
                }
                let total = dist.iter().cloned().fold(S::zero(), |a, b| a + b);
                if !total.approx_eq(&S::one()) {
                    return domain(format!("party {i} response column {k} sums to {total:?}, not 1"));
                }
            }
            tables.push(table);
        }
        Ok(FiniteLocalModel { network, sources, responses: tables })
    }

    /// Builds party tables from a closure `f(party, x, source values) -> distribution`.
    pub fn from_fn(
        network: Network,
        sources: Vec<Vec<S>>,
        f: impl Fn(usize, usize, &[usize]) -> Vec<S>,
    ) -> Result<Self> {
        Self::try_from_fn(network, sources, |i, x, lam| Ok(f(i, x, lam)))
    }

    pub fn try_from_fn(
        network: Network,
        sources: Vec<Vec<S>>,
        mut f: impl FnMut(usize, usize, &[usize]) -> Result<Vec<S>>,
    ) -> Result<Self> {
        let cards: Vec<usize> = sources.iter().map(Vec::len).collect();
        let mut responses = Vec::new();
        for i in 0..network.party_count() {
            let col_cards: Vec<usize> = network.sources_of(i).iter().map(|&j| cards[j]).collect();
            let ncols: usize = col_cards.iter().product();
            let mut flat = Vec::new();
            for x in 0..network.party(i).inputs {
                for col in 0..ncols {
                    let mut lam = vec![0; col_cards.len()];
                    let mut c = col;
                    for k in (0..col_cards.len()).rev() {
                        lam[k] = c % col_cards[k];
                        c /= col_cards[k];
                    }
                    let dist = f(i, x, &lam)?;
                    if dist.len() != network.party(i).outputs {
                        return domain(format!("party {i} distribution has wrong length"));
                    }
                    flat.extend(dist);
                }
            }
            responses.push(flat);
        }
        FiniteLocalModel::new(network, sources, responses)
    }

    pub fn network(&self) -> &Network {
        &self.network
    }

    pub fn cards(&self) -> Vec<usize> {
        self.sources.iter().map(Vec::len).collect()
    }

    pub fn source(&self, j: usize) -> &[S] {
        &self.sources[j]
    }

    pub fn sources(&self) -> &[Vec<S>] {
        &self.sources
    }

    pub fn response(&self, party: usize) -> &ResponseTable<S> {
        &self.responses[party]
    }

    /// Same model with source `j` replaced by the point mass at `value`.
    pub fn pinned(&self, j: usize, value: usize) -> Self {
        let mut m = self.clone();
        m.sources[j] = (0..self.sources[j].len()).map(|k| if k == value { S::one() } else { S::zero() }).collect();
        m
    }

    /// Restricts source `j` to `kept` values (in that order) with new `weights`,
    /// dropping the matching columns from every party reading `j`.
    pub(crate) fn restrict_source(&self, j: usize, kept: &[usize], weights: Vec<S>) -> Self {
        let mut sources = self.sources.clone();
        sources[j] = weights;
        let mut responses = Vec::with_capacity(self.responses.len());
        for (i, t) in self.responses.iter().enumerate() {
            let srcs = self.network.sources_of(i);
            let Some(pos) = srcs.iter().position(|&s| s == j) else {
                responses.push(t.clone());
                continue;
            };
            let mut column_cards = t.column_cards.clone();
            column_cards[pos] = kept.len();
            let new_cols: usize = column_cards.iter().product();
            let mut probs = Vec::with_capacity(t.inputs * new_cols * t.outputs);
            let new_table = ResponseTable { inputs: t.inputs, outputs: t.outputs, column_cards, probs: Vec::new() };
            for x in 0..t.inputs {
                for col in 0..new_cols {
                    let mut lam = new_table.column_values(col);
                    lam[pos] = kept[lam[pos]];
                    probs.extend_from_slice(t.dist(x, t.column_of(&lam)));
                }
            }
            responses.push(ResponseTable { probs, ..new_table });
        }
        FiniteLocalModel { network: self.network.clone(), sources, responses }
    }

    pub fn to_file(&self) -> ModelFile {
        let responses = self
            .responses
            .iter()
            .enumerate()
            .map(|(party, t)| {
                let mut table = BTreeMap::new();
                for x in 0..t.inputs {
                    for col in 0..t.columns() {
                        let key = std::iter::once(x)
                            .chain(t.column_values(col))
                            .map(|v| v.to_string())
                            .collect::<Vec<_>>()
                            .join(",");
                        table.insert(key, t.dist(x, col).iter().map(Scalar::to_json).collect());
                    }
                }
                ResponseJson { party, table }
            })
            .collect();
        ModelFile {
            network: NetworkRef::Inline(self.network.to_json()),
            flavor: Some(S::FLAVOR),
            cards: self.cards(),
            sources: self.sources.iter().map(|w| w.iter().map(Scalar::to_json).collect()).collect(),
            responses,
        }
    }
}

impl FiniteLocalModel<Rational> {
    pub fn to_float(&self) -> FiniteLocalModel<f64> {
        let conv = |v: &[Rational]| v.iter().map(Scalar::to_f64).collect::<Vec<f64>>();
        FiniteLocalModel {
            network: self.network.clone(),
            sources: self.sources.iter().map(|w| conv(w)).collect(),
            responses: self
                .responses
                .iter()
                .map(|t| ResponseTable {
                    inputs: t.inputs,
                    outputs: t.outputs,
                    column_cards: t.column_cards.clone(),
                    probs: conv(&t.probs),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct EvalConfig {
    /// Maximum number of source-grid points per input tuple.
    pub grid_cap: u128,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig { grid_cap: DEFAULT_GRID_CAP }
    }
}

pub fn evaluate<S: Scalar>(model: &FiniteLocalModel<S>) -> Result<Behavior<S>> {
    evaluate_with(model, &EvalConfig::default())
}

/// Sums `∏_j ρ_j(λ_j) ∏_i P_i(a_i | x_i λ_[i])` over the dense source grid.
pub fn evaluate_with<S: Scalar>(model: &FiniteLocalModel<S>, config: &EvalConfig) -> Result<Behavior<S>> {
    let net = &model.network;
    let cards = model.cards();
    let grid = cards.iter().try_fold(1u128, |acc, &c| acc.checked_mul(c as u128)).unwrap_or(u128::MAX);
    if grid > config.grid_cap {
        return Err(Error::Resource(format!(
            "source grid has {grid} points per input tuple, cap is {}",
            config.grid_cap
        )));
    }
    let grid = grid as usize;
    let m = net.party_count();
    let outs = net.output_tuple_count();
    let out_tuples: Vec<Vec<usize>> = (0..outs).map(|r| net.output_tuple(r)).collect();
    let party_sources: Vec<Vec<usize>> = (0..m).map(|i| net.sources_of(i)).collect();
    let mut values = vec![S::zero(); net.dimension()];
    let mut lambda = vec![0usize; cards.len()];
    for x_rank in 0..net.input_tuple_count() {
        let xs = net.input_tuple(x_rank);
        let block = &mut values[x_rank * outs..(x_rank + 1) * outs];
        for g in 0..grid {
            let mut rest = g;
            for j in (0..cards.len()).rev() {
                lambda[j] = rest % cards[j];
                rest /= cards[j];
            }
            let w = lambda.iter().enumerate().fold(S::one(), |acc, (j, &l)| acc * model.sources[j][l].clone());
            if w.is_zero() {
                continue;
            }
            let dists: Vec<&[S]> = (0..m)
                .map(|i| {
                    let lam: Vec<usize> = party_sources[i].iter().map(|&j| lambda[j]).collect();
                    let t = &model.responses[i];
                    t.dist(xs[i], t.column_of(&lam))
                })
                .collect();
            for (slot, a) in block.iter_mut().zip(&out_tuples) {
                let mut p = w.clone();
                for i in 0..m {
                    let f = &dists[i][a[i]];
                    if f.is_zero() {
                        p = S::zero();
                        break;
                    }
                    p = p * f.clone();
                }
                if !p.is_zero() {
                    *slot = slot.clone() + p;
                }
            }
        }
    }
    Ok(Behavior::new_unchecked(net.clone(), values))
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilyMember<S> {
    pub value: usize,
    pub weight: S,
    pub behavior: Behavior<S>,
}

/// Behaviors obtained by pinning one source to each of its values.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionalBehaviorFamily<S> {
    pub source: usize,
    pub members: Vec<FamilyMember<S>>,
}

impl<S: Scalar> ConditionalBehaviorFamily<S> {
    /// Weighted average of the members.
    pub fn mean(&self) -> Vec<S> {
        let d = self.members.first().map_or(0, |m| m.behavior.values().len());
        let mut acc = vec![S::zero(); d];
        for m in &self.members {
            for (a, v) in acc.iter_mut().zip(m.behavior.values()) {
                *a = a.clone() + m.weight.clone() * v.clone();
            }
        }
        acc
    }
}

pub fn conditional_family<S: Scalar>(
    model: &FiniteLocalModel<S>,
    source: usize,
) -> Result<ConditionalBehaviorFamily<S>> {
    if source >= model.network.source_count() {
        return domain(format!("source {source} out of range"));
    }
    let members = (0..model.sources[source].len())
        .map(|mu| {
            Ok(FamilyMember {
                value: mu,
                weight: model.sources[source][mu].clone(),
                behavior: evaluate(&model.pinned(source, mu))?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConditionalBehaviorFamily { source, members })
}

#[derive(Clone, Debug, PartialEq)]
pub enum AnyModel {
    Exact(FiniteLocalModel<Rational>),
    Float(FiniteLocalModel<f64>),
}

impl AnyModel {
    pub fn network(&self) -> &Network {
        match self {
            AnyModel::Exact(m) => m.network(),
            AnyModel::Float(m) => m.network(),
        }
    }

    pub fn to_file(&self) -> ModelFile {
        match self {
            AnyModel::Exact(m) => m.to_file(),
            AnyModel::Float(m) => m.to_file(),
        }
    }

    /// Converts to the requested flavor; exact to float is lossy, float to exact is refused.
    pub fn with_flavor(self, flavor: Flavor) -> Result<AnyModel> {
        match (self, flavor) {
            (AnyModel::Exact(m), Flavor::Float) => Ok(AnyModel::Float(m.to_float())),
            (AnyModel::Float(_), Flavor::Exact) => domain("a float-flavor model cannot be promoted to exact flavor"),
            (m, _) => Ok(m),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ResponseJson {
    pub party: usize,
    /// Keys are `"x,λ1,λ2,.."` with the party's sources in ascending order.
    pub table: BTreeMap<String, Vec<serde_json::Value>>,
}

/// `{"network":..,"cards":[..],"sources":[[w..]..],"responses":[{"party":i,"table":{..}}..]}`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelFile {
    pub network: NetworkRef,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flavor: Option<Flavor>,
    pub cards: Vec<usize>,
    pub sources: Vec<Vec<serde_json::Value>>,
    pub responses: Vec<ResponseJson>,
}

impl ModelFile {
    fn inferred_flavor(&self) -> Flavor {
        let is_exact = |v: &serde_json::Value| match v {
            serde_json::Value::String(_) => true,
            serde_json::Value::Number(n) => n.is_i64() || n.is_u64(),
            _ => false,
        };
        let all_exact = self.sources.iter().flatten().all(is_exact)
            && self.responses.iter().flat_map(|r| r.table.values().flatten()).all(is_exact);
        if all_exact {
            Flavor::Exact
        } else {
            Flavor::Float
        }
    }

    fn build<S: Scalar>(&self, network: Network) -> Result<FiniteLocalModel<S>> {
        if self.cards.len() != network.source_count()
            || self.cards.iter().zip(&self.sources).any(|(&c, w)| c != w.len())
            || self.sources.len() != self.cards.len()
        {
            return domain("cards do not match the source weight lists");
        }
        let sources = self
            .sources
            .iter()
            .map(|w| w.iter().map(S::from_json).collect::<Result<Vec<S>>>())
            .collect::<Result<Vec<_>>>()?;
        let mut tables: Vec<Option<&ResponseJson>> = vec![None; network.party_count()];
        for r in &self.responses {
            match tables.get_mut(r.party) {
                Some(slot @ None) => *slot = Some(r),
                Some(Some(_)) => return domain(format!("duplicate response table for party {}", r.party)),
                None => return domain(format!("response table for unknown party {}", r.party)),
            }
        }
        FiniteLocalModel::try_from_fn(network, sources, |i, x, lam| {
            let r = tables[i].ok_or_else(|| Error::Domain(format!("missing response table for party {i}")))?;
            let key =
                std::iter::once(x).chain(lam.iter().copied()).map(|v| v.to_string()).collect::<Vec<_>>().join(",");
            let dist =
                r.table.get(&key).ok_or_else(|| Error::Domain(format!("party {i} table has no entry {key:?}")))?;
            dist.iter().map(S::from_json).collect()
        })
    }

    pub fn into_model(self, base_dir: Option<&Path>) -> Result<AnyModel> {
        let network = self.network.resolve(base_dir)?;
        let flavor = self.flavor.unwrap_or_else(|| self.inferred_flavor());
        Ok(match flavor {
            Flavor::Exact => AnyModel::Exact(self.build(network)?),
            Flavor::Float => AnyModel::Float(self.build(network)?),
        })
    }

    pub fn read(path: &Path) -> Result<AnyModel> {
        let text = std::fs::read_to_string(path)?;
        let file: ModelFile = serde_json::from_str(&text)?;
        file.into_model(path.parent())
    }
}
