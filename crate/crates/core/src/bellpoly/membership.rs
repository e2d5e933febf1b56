use num_traits::{One, Signed, Zero};
use serde_json::json;

use super::strategies::{enumerate_strategies, StrategyMatrix};
use crate::error::{Error, Result};
use crate::netcore::Behavior;
use crate::scalar::{dot, format_rational, primitive_integer, Rational};
use crate::simplex::{feasible, LpOutcome};

/// Weights `q_λ` over strategy columns reproducing a behavior.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub weights: Vec<Rational>,
}

impl Decomposition {
    pub fn support(&self) -> Vec<usize> {
        (0..self.weights.len()).filter(|&k| !self.weights[k].is_zero()).collect()
    }
}

/// An inequality `ξᵀP ≥ 0` valid on every deterministic strategy and violated by
/// the queried behavior, `value = ξᵀP < 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalityCertificate {
    pub xi: Vec<Rational>,
    pub value: Rational,
    pub tight_strategies: Vec<usize>,
}

impl LocalityCertificate {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "xi": self.xi.iter().map(format_rational).collect::<Vec<_>>(),
            "value": format_rational(&self.value),
            "tightStrategies": self.tight_strategies,
        })
    }

    /// Exact re-check against every strategy column and the behavior.
    pub fn verify(&self, strategies: &StrategyMatrix, behavior: &Behavior<Rational>) -> bool {
        strategies.columns().iter().all(|c| !dot(&self.xi, c.values()).is_negative())
            && dot(&self.xi, behavior.values()) == self.value
            && self.value.is_negative()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Membership {
    Local(Decomposition),
    Nonlocal(LocalityCertificate),
}

/// Decides `P = D q, q ≥ 0, Σ q = 1` exactly.
pub fn membership_lp(behavior: &Behavior<Rational>) -> Result<Membership> {
    let strategies = enumerate_strategies(behavior.network())?;
    let d = behavior.values().len();
    let n = strategies.len();
    let mut a: Vec<Vec<Rational>> = (0..d).map(|r| (0..n).map(|k| strategies.column(k)[r].clone()).collect()).collect();
    a.push(vec![Rational::one(); n]);
    let mut b = behavior.values().to_vec();
    b.push(Rational::one());

    match feasible(&a, &b)? {
        LpOutcome::Optimal { x, .. } => {
            let reproduced: Vec<Rational> =
                (0..d).map(|r| (0..n).map(|k| &strategies.column(k)[r] * &x[k]).sum()).collect();
            if reproduced != behavior.values() {
                return Err(Error::Verification("decomposition does not reproduce the behavior".into()));
            }
            Ok(Membership::Local(Decomposition { weights: x }))
        }
        LpOutcome::Infeasible { farkas } => {
            let cert = certificate_from_ray(&strategies, behavior, &farkas);
            if !cert.verify(&strategies, behavior) {
                return Err(Error::Verification("locality certificate failed exact re-check".into()));
            }
            Ok(Membership::Nonlocal(cert))
        }
        LpOutcome::Unbounded => unreachable!("feasibility problems have a zero objective"),
    }
}

/// Turns a Farkas ray `y` (with `yᵀ[D;1] ≤ 0`, `yᵀ[P;1] > 0`) into a normalized
/// certificate: constant folded into the first input block, minimum over
/// strategies shifted to zero, then scaled to a primitive integer vector.
fn certificate_from_ray(
    strategies: &StrategyMatrix,
    behavior: &Behavior<Rational>,
    farkas: &[Rational],
) -> LocalityCertificate {
    let d = behavior.values().len();
    let block = behavior.network().output_tuple_count();
    let mut xi: Vec<Rational> = farkas[..d].iter().map(|y| -y).collect();
    let constant = -farkas[d].clone();
    for v in xi[..block].iter_mut() {
        *v += &constant;
    }
    let min = strategies.columns().iter().map(|c| dot(&xi, c.values())).min().expect("at least one strategy");
    for v in xi[..block].iter_mut() {
        *v -= &min;
    }
    let xi = primitive_integer(&xi);
    let tight_strategies = (0..strategies.len()).filter(|&k| dot(&xi, strategies.column(k)).is_zero()).collect();
    let value = dot(&xi, behavior.values());
    LocalityCertificate { xi, value, tight_strategies }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netcore::{Network, Party};
    use crate::scalar::{int, rat};

    fn chsh() -> Network {
        Network::bell(vec![Party::new(2, 2); 2]).unwrap()
    }

    pub(crate) fn pr_box() -> Behavior<Rational> {
        let net = chsh();
        let values = (0..16)
            .map(|k| {
                let (x, y, a, b) = (k >> 3 & 1, k >> 2 & 1, k >> 1 & 1, k & 1);
                if a ^ b == x & y {
                    rat(1, 2)
                } else {
                    int(0)
                }
            })
            .collect();
        Behavior::new(net, values).unwrap()
    }

    #[test]
    fn uniform_is_local() {
        let b = Behavior::uniform(chsh(), rat(1, 4)).unwrap();
        assert!(matches!(membership_lp(&b).unwrap(), Membership::Local(_)));
    }

    #[test]
    fn vertices_are_local() {
        let s = enumerate_strategies(&chsh()).unwrap();
        for (k, col) in s.columns().iter().enumerate() {
            let Membership::Local(q) = membership_lp(col).unwrap() else { panic!() };
            assert_eq!(q.support(), vec![k]);
        }
    }

    #[test]
    fn pr_box_certificate() {
        let p = pr_box();
        let Membership::Nonlocal(cert) = membership_lp(&p).unwrap() else { panic!("PR box is nonlocal") };
        let s = enumerate_strategies(&chsh()).unwrap();
        assert!(cert.verify(&s, &p));
        let values: Vec<Rational> = s.columns().iter().map(|c| dot(&cert.xi, c.values())).collect();
        assert_eq!(values.iter().min().unwrap(), &int(0));
    }
}
