use num_traits::{One, Signed, Zero};

use super::strategies::{bell_only, enumerate_strategies, StrategyMatrix};
use crate::error::{Error, Result};
use crate::linalg::{affine_dimension, rank};
use crate::netcore::Network;
use crate::scalar::{dot, primitive_integer, Rational};

/// Largest strategy count accepted by [`facet_enumeration`].
pub const FACET_STRATEGY_CAP: usize = 64;

/// Collins–Gisin chart: one coordinate per nonempty party subset `S`, inputs of
/// `S`, and outputs `a_i < A_i - 1` for `i ∈ S`. The coordinate is the marginal
/// `P(a_S | x_S)` read with the remaining parties on input 0.
#[derive(Clone, Debug)]
pub struct CollinsGisin {
    network: Network,
    /// `(parties, inputs, outputs)` per coordinate.
    labels: Vec<(Vec<usize>, Vec<usize>, Vec<usize>)>,
}

impl CollinsGisin {
    pub fn new(network: &Network) -> Self {
        let m = network.party_count();
        let mut labels = Vec::new();
        for mask in 1usize..1 << m {
            let parties: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
            let radices: Vec<usize> = parties
                .iter()
                .map(|&i| network.party(i).inputs)
                .chain(parties.iter().map(|&i| network.party(i).outputs - 1))
                .collect();
            let count: usize = radices.iter().product();
            for rank in 0..count {
                let mut digits = vec![0; radices.len()];
                let mut rest = rank;
                for k in (0..radices.len()).rev() {
                    digits[k] = rest % radices[k];
                    rest /= radices[k];
                }
                let outputs = digits.split_off(parties.len());
                labels.push((parties.clone(), digits, outputs));
            }
        }
        CollinsGisin { network: network.clone(), labels }
    }

    pub fn dimension(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[(Vec<usize>, Vec<usize>, Vec<usize>)] {
        &self.labels
    }

    /// Full-coordinate indicator of coordinate `k`: summing a behavior against it
    /// gives the marginal.
    pub fn indicator(&self, k: usize) -> Vec<Rational> {
        let net = &self.network;
        let (parties, inputs, outputs) = &self.labels[k];
        let mut x = vec![0; net.party_count()];
        for (&i, &xi) in parties.iter().zip(inputs) {
            x[i] = xi;
        }
        let x_rank = net.input_tuple_rank(&x);
        let outs = net.output_tuple_count();
        let mut v = vec![Rational::zero(); net.dimension()];
        for a_rank in 0..outs {
            let a = net.output_tuple(a_rank);
            if parties.iter().zip(outputs).all(|(&i, &ai)| a[i] == ai) {
                v[x_rank * outs + a_rank] = Rational::one();
            }
        }
        v
    }

    pub fn project(&self, behavior: &[Rational]) -> Vec<Rational> {
        (0..self.dimension()).map(|k| dot(&self.indicator(k), behavior)).collect()
    }
}

/// `cgᵀ p ≥ constant` in the chart, equivalently `xiᵀ P ≥ 0` on full behaviors.
#[derive(Clone, Debug, PartialEq)]
pub struct Facet {
    pub cg: Vec<Rational>,
    pub constant: Rational,
    pub xi: Vec<Rational>,
    pub tight: Vec<usize>,
}

/// All facets of the local polytope of a single-source scenario, by double
/// description over the homogenized strategy vertices.
pub fn facet_enumeration(network: &Network) -> Result<Vec<Facet>> {
    bell_only(network)?;
    let count: usize = network
        .parties()
        .iter()
        .map(|p| p.outputs.checked_pow(p.inputs as u32).unwrap_or(usize::MAX))
        .try_fold(1usize, |a, b| a.checked_mul(b))
        .unwrap_or(usize::MAX);
    if count > FACET_STRATEGY_CAP {
        return Err(Error::Resource(format!(
            "{count} strategies exceed the facet enumeration cap of {FACET_STRATEGY_CAP}"
        )));
    }
    let strategies = enumerate_strategies(network)?;
    let chart = CollinsGisin::new(network);
    let vertices: Vec<Vec<Rational>> = strategies
        .columns()
        .iter()
        .map(|c| {
            let mut v = vec![Rational::one()];
            v.extend(chart.project(c.values()));
            v
        })
        .collect();
    let rays = double_description(&vertices);
    let mut facets: Vec<Facet> = rays.into_iter().map(|h| to_facet(&chart, &strategies, &vertices, h)).collect();
    facets.sort_by(|a, b| a.tight.cmp(&b.tight));
    Ok(facets)
}

fn zero_set(h: &[Rational], vertices: &[Vec<Rational>], upto: usize) -> u64 {
    (0..upto).filter(|&k| dot(h, &vertices[k]).is_zero()).fold(0, |m, k| m | 1 << k)
}

/// Extreme rays of `{h : hᵀv ≥ 0 for every vertex v}`.
fn double_description(vertices: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let dim = vertices[0].len();
    // initial basis: first vertices raising the rank
    let mut basis: Vec<usize> = Vec::new();
    for k in 0..vertices.len() {
        let mut trial: Vec<Vec<Rational>> = basis.iter().map(|&b| vertices[b].clone()).collect();
        trial.push(vertices[k].clone());
        if rank(&trial) == trial.len() {
            basis.push(k);
            if basis.len() == dim {
                break;
            }
        }
    }
    assert_eq!(basis.len(), dim, "strategy vertices span the chart");
    let m: Vec<Vec<Rational>> = basis.iter().map(|&b| vertices[b].clone()).collect();
    let inv = crate::linalg::inverse(&m).expect("basis is invertible");
    let mut rays: Vec<Vec<Rational>> =
        (0..dim).map(|c| primitive_integer(&inv.iter().map(|row| row[c].clone()).collect::<Vec<_>>())).collect();
    let mut processed: Vec<usize> = basis.clone();

    for k in 0..vertices.len() {
        if basis.contains(&k) {
            continue;
        }
        let v = &vertices[k];
        let vals: Vec<Rational> = rays.iter().map(|r| dot(r, v)).collect();
        let processed_mask = processed.iter().fold(0u64, |m, &p| m | 1 << p);
        let zeros: Vec<u64> = rays.iter().map(|r| zero_set(r, vertices, vertices.len()) & processed_mask).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        let mut next: Vec<Vec<Rational>> =
            (0..rays.len()).filter(|&i| !vals[i].is_negative()).map(|i| rays[i].clone()).collect();
        for &p in &pos {
            for &q in &neg {
                let common = zeros[p] & zeros[q];
                if (common.count_ones() as usize) < dim - 2 {
                    continue;
                }
                let adjacent = (0..rays.len()).filter(|&r| r != p && r != q).all(|r| zeros[r] & common != common);
                if !adjacent {
                    continue;
                }
                let h: Vec<Rational> =
                    rays[q].iter().zip(&rays[p]).map(|(rq, rp)| &vals[p] * rq - &vals[q] * rp).collect();
                next.push(primitive_integer(&h));
            }
        }
        rays = next;
        processed.push(k);
    }
    rays
}

fn to_facet(chart: &CollinsGisin, strategies: &StrategyMatrix, vertices: &[Vec<Rational>], h: Vec<Rational>) -> Facet {
    let constant = -h[0].clone();
    let cg = h[1..].to_vec();
    let net = strategies.network();
    let block = net.output_tuple_count();
    let mut xi = vec![Rational::zero(); net.dimension()];
    for (k, c) in cg.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for (x, ind) in xi.iter_mut().zip(chart.indicator(k)) {
            *x += c * ind;
        }
    }
    for x in xi[..block].iter_mut() {
        *x -= &constant;
    }
    let tight = (0..vertices.len()).filter(|&k| dot(&h, &vertices[k]).is_zero()).collect();
    Facet { cg, constant, xi, tight }
}

impl Facet {
    /// Affine dimension of the tight strategy columns.
    pub fn tight_dimension(&self, strategies: &StrategyMatrix) -> usize {
        let pts: Vec<Vec<Rational>> = self.tight.iter().map(|&k| strategies.column(k).to_vec()).collect();
        affine_dimension(&pts).unwrap_or(0)
    }
}
