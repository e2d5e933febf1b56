use std::path::Path;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::netcore::{Network, NetworkJson};
use crate::scalar::{Flavor, Rational, Scalar};

/// Conditional distribution `P(a|x)` over a network, flattened per [`Network::behavior_index`].
#[derive(Clone, Debug, PartialEq)]
pub struct Behavior<S> {
    network: Network,
    values: Vec<S>,
}

impl<S: Scalar> Behavior<S> {
    /// Validates length, nonnegativity and per-input normalization.
    pub fn new(network: Network, values: Vec<S>) -> Result<Self> {
        let b = Behavior { network, values };
        b.validate()?;
        Ok(b)
    }

    pub(crate) fn new_unchecked(network: Network, values: Vec<S>) -> Self {
        Behavior { network, values }
    }

    fn validate(&self) -> Result<()> {
        let d = self.network.dimension();
        if self.values.len() != d {
            return domain(format!("behavior has {} entries, network dimension is {d}", self.values.len()));
        }
        if let Some(i) = self.values.iter().position(Scalar::is_negative_tol) {
            return domain(format!("behavior entry {i} is negative"));
        }
        let outs = self.network.output_tuple_count();
        for (x, block) in self.values.chunks(outs).enumerate() {
            let total = block.iter().cloned().fold(S::zero(), |a, b| a + b);
            if !total.approx_eq(&S::one()) {
                return domain(format!(
                    "behavior block for inputs {:?} sums to {:?}, not 1",
                    self.network.input_tuple(x),
                    total
                ));
            }
        }
        Ok(())
    }

    pub fn network(&self) -> &Network {
        &self.network
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn into_values(self) -> Vec<S> {
        self.values
    }

    pub fn get(&self, inputs: &[usize], outputs: &[usize]) -> Result<&S> {
        Ok(&self.values[self.network.behavior_index(inputs, outputs)?])
    }

    /// Deterministic behavior: outputs are a fixed function of inputs.
    pub fn deterministic(network: Network, response: impl Fn(&[usize]) -> Vec<usize>) -> Result<Self> {
        let mut values = vec![S::zero(); network.dimension()];
        for x in 0..network.input_tuple_count() {
            let xs = network.input_tuple(x);
            let a = response(&xs);
            values[network.behavior_index(&xs, &a)?] = S::one();
        }
        Behavior::new(network, values)
    }

    /// The uniform distribution on outputs for every input.
    pub fn uniform(network: Network, value: S) -> Result<Self> {
        let values = vec![value; network.dimension()];
        Behavior::new(network, values)
    }

    pub fn to_file(&self) -> BehaviorFile {
        BehaviorFile {
            network: NetworkRef::Inline(self.network.to_json()),
            flavor: S::FLAVOR,
            values: self.values.iter().map(Scalar::to_json).collect(),
        }
    }
}

impl Behavior<Rational> {
    pub fn to_float(&self) -> Behavior<f64> {
        Behavior { network: self.network.clone(), values: self.values.iter().map(Scalar::to_f64).collect() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AnyBehavior {
    Exact(Behavior<Rational>),
    Float(Behavior<f64>),
}

impl AnyBehavior {
    pub fn network(&self) -> &Network {
        match self {
            AnyBehavior::Exact(b) => b.network(),
            AnyBehavior::Float(b) => b.network(),
        }
    }

    pub fn flavor(&self) -> Flavor {
        match self {
            AnyBehavior::Exact(_) => Flavor::Exact,
            AnyBehavior::Float(_) => Flavor::Float,
        }
    }

    pub fn to_file(&self) -> BehaviorFile {
        match self {
            AnyBehavior::Exact(b) => b.to_file(),
            AnyBehavior::Float(b) => b.to_file(),
        }
    }

    pub fn exact(self) -> Result<Behavior<Rational>> {
        match self {
            AnyBehavior::Exact(b) => Ok(b),
            AnyBehavior::Float(_) => domain("this operation requires an exact-flavor behavior"),
        }
    }
}

/// A network given inline or as a path to a network JSON file.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NetworkRef {
    Inline(NetworkJson),
    Path(String),
}

impl NetworkRef {
    /// Resolves relative paths against `base_dir`.
    pub fn resolve(&self, base_dir: Option<&Path>) -> Result<Network> {
        match self {
            NetworkRef::Inline(j) => Network::try_from(j.clone()),
            NetworkRef::Path(p) => {
                let path = match base_dir {
                    Some(dir) if Path::new(p).is_relative() => dir.join(p),
                    _ => Path::new(p).to_path_buf(),
                };
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| Error::Parse(format!("cannot read network file {}: {e}", path.display())))?;
                let j: NetworkJson = serde_json::from_str(&text)?;
                Network::try_from(j)
            }
        }
    }
}

/// `{"network":<inline or path>,"flavor":"exact"|"float","values":[..]}`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BehaviorFile {
    pub network: NetworkRef,
    pub flavor: Flavor,
    pub values: Vec<serde_json::Value>,
}

impl BehaviorFile {
    pub fn into_behavior(self, base_dir: Option<&Path>) -> Result<AnyBehavior> {
        let network = self.network.resolve(base_dir)?;
        Ok(match self.flavor {
            Flavor::Exact => AnyBehavior::Exact(Behavior::new(
                network,
                self.values.iter().map(Rational::from_json).collect::<Result<_>>()?,
            )?),
            Flavor::Float => AnyBehavior::Float(Behavior::new(
                network,
                self.values.iter().map(f64::from_json).collect::<Result<_>>()?,
            )?),
        })
    }

    pub fn read(path: &Path) -> Result<AnyBehavior> {
        let text = std::fs::read_to_string(path)?;
        let file: BehaviorFile = serde_json::from_str(&text)?;
        file.into_behavior(path.parent())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignalingViolation {
    /// Party whose input change moves the others' marginal.
    pub party: usize,
    pub inputs: Vec<usize>,
    pub changed_input: usize,
    pub other_outputs: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NonsignalingReport {
    pub nonsignaling: bool,
    pub violations: Vec<SignalingViolation>,
}

/// Checks that, for every party, the joint marginal of the remaining parties does not
/// depend on that party's input. Single-party conditions generate every nonsignaling
/// constraint on a complete joint distribution.
pub fn is_nonsignaling<S: Scalar>(behavior: &Behavior<S>) -> NonsignalingReport {
    let net = behavior.network();
    let m = net.party_count();
    let mut violations = Vec::new();
    for i in 0..m {
        let p = net.party(i);
        if p.inputs == 1 {
            continue;
        }
        for x_rank in 0..net.input_tuple_count() {
            let xs = net.input_tuple(x_rank);
            if xs[i] != 0 {
                continue;
            }
            for a_rank in 0..net.output_tuple_count() {
                let a_rest = net.output_tuple(a_rank);
                if a_rest[i] != 0 {
                    continue;
                }
                let marginal = |xi: usize| {
                    let mut x = xs.clone();
                    x[i] = xi;
                    let mut a = a_rest.clone();
                    (0..p.outputs).fold(S::zero(), |acc, ai| {
                        a[i] = ai;
                        acc + behavior.values[net.behavior_index(&x, &a).expect("in range")].clone()
                    })
                };
                let base = marginal(0);
                for xi in 1..p.inputs {
                    if !marginal(xi).approx_eq(&base) {
                        let mut other_outputs = a_rest.clone();
                        other_outputs.remove(i);
                        violations.push(SignalingViolation {
                            party: i,
                            inputs: xs.clone(),
                            changed_input: xi,
                            other_outputs,
                        });
                    }
                }
            }
        }
    }
    NonsignalingReport { nonsignaling: violations.is_empty(), violations }
}

impl<S: Scalar> Behavior<S> {
    pub fn is_zero_at(&self, index: usize) -> bool {
        self.values[index].approx_eq(&S::zero())
    }

    /// Indices of entries that are not (approximately) zero.
    pub fn support(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&i| !self.is_zero_at(i)).collect()
    }
}

impl Behavior<Rational> {
    pub fn is_exactly_zero(&self, index: usize) -> bool {
        self.values[index].is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netcore::Party;
    use crate::scalar::{int, rat};

    fn chsh() -> Network {
        Network::bell(vec![Party::new(2, 2); 2]).unwrap()
    }

    fn pr_box() -> Behavior<Rational> {
        let net = chsh();
        let mut v = vec![int(0); 16];
        for x in 0..2 {
            for y in 0..2 {
                for a in 0..2 {
                    for b in 0..2 {
                        if (a ^ b) == (x & y) {
                            v[net.behavior_index(&[x, y], &[a, b]).unwrap()] = rat(1, 2);
                        }
                    }
                }
            }
        }
        Behavior::new(net, v).unwrap()
    }

    #[test]
    fn uniform_product_is_nonsignaling() {
        let b = Behavior::uniform(chsh(), rat(1, 4)).unwrap();
        assert!(is_nonsignaling(&b).nonsignaling);
    }

    #[test]
    fn pr_box_is_nonsignaling() {
        assert!(is_nonsignaling(&pr_box()).nonsignaling);
    }

    #[test]
    fn alice_output_equal_to_bobs_input_signals() {
        // a = y: Alice's marginal depends on Bob's input.
        let b: Behavior<Rational> = Behavior::deterministic(chsh(), |x| vec![x[1], 0]).unwrap();
        let report = is_nonsignaling(&b);
        assert!(!report.nonsignaling);
        assert!(report.violations.iter().all(|v| v.party == 1));
        // a = x is local and fine.
        let ok: Behavior<Rational> = Behavior::deterministic(chsh(), |x| vec![x[0], 0]).unwrap();
        assert!(is_nonsignaling(&ok).nonsignaling);
    }

    #[test]
    fn normalization_is_checked() {
        let net = Network::triangle();
        assert!(Behavior::new(net.clone(), vec![rat(1, 8); 7]).is_err());
        assert!(Behavior::new(net.clone(), vec![rat(1, 7); 8]).is_err());
        let mut v = vec![rat(1, 4); 8];
        v[0] = rat(-1, 4);
        v[1] = int(0);
        v[2] = int(0);
        v[3] = int(0);
        v[4] = int(0);
        assert!(Behavior::new(net.clone(), v).is_err());
        assert!(Behavior::new(net, vec![0.125 + 1e-14; 8]).is_ok());
    }

    #[test]
    fn file_round_trip() {
        let b = pr_box();
        let text = serde_json::to_string(&b.to_file()).unwrap();
        let back: BehaviorFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.into_behavior(None).unwrap(), AnyBehavior::Exact(b));
    }
}
