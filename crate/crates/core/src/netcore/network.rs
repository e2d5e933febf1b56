use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Party {
    pub inputs: usize,
    pub outputs: usize,
}

impl Party {
    pub fn new(inputs: usize, outputs: usize) -> Self {
        Party { inputs, outputs }
    }
}

/// A network of `m` parties reading `n` independent latent sources.
///
/// Behaviors on a network are flat vectors indexed inputs-major, outputs-minor,
/// with party 0 the most significant digit in both blocks.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Network {
    parties: Vec<Party>,
    incidence: Vec<Vec<bool>>,
}

/// Parties split by whether they read a designated source.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartySplit {
    pub source: usize,
    pub a_side: Vec<usize>,
    pub b_side: Vec<usize>,
}

impl Network {
    pub fn new(parties: Vec<Party>, incidence: Vec<Vec<bool>>) -> Result<Self> {
        if parties.is_empty() {
            return domain("a network needs at least one party");
        }
        if incidence.len() != parties.len() {
            return domain(format!("incidence matrix has {} rows for {} parties", incidence.len(), parties.len()));
        }
        let n = incidence[0].len();
        if n == 0 {
            return domain("a network needs at least one source");
        }
        for (i, (p, row)) in parties.iter().zip(&incidence).enumerate() {
            if p.inputs == 0 || p.outputs == 0 {
                return domain(format!("party {i} has an empty input or output alphabet"));
            }
            if row.len() != n {
                return domain(format!("incidence row {i} has {} columns, expected {n}", row.len()));
            }
            if !row.iter().any(|&b| b) {
                return domain(format!("party {i} is not connected to any source"));
            }
        }
        for j in 0..n {
            if !incidence.iter().any(|row| row[j]) {
                return domain(format!("source {j} is not connected to any party"));
            }
        }
        Ok(Network { parties, incidence })
    }

    /// Single-source Bell scenario where every party reads the one source.
    pub fn bell(parties: Vec<Party>) -> Result<Self> {
        let m = parties.len();
        Network::new(parties, vec![vec![true]; m])
    }

    /// The triangle: parties A, B, C with no inputs and binary outputs; source `j`
    /// is the one party `j` does not read (A reads β, γ; B reads α, γ; C reads α, β).
    pub fn triangle() -> Self {
        let incidence = (0..3).map(|i| (0..3).map(|j| i != j).collect()).collect();
        Network::new(vec![Party::new(1, 2); 3], incidence).expect("triangle is valid")
    }

    /// Bilocal chain A - B - C with binary inputs and outputs for everyone.
    pub fn bilocal() -> Self {
        Self::bilocal_with(vec![Party::new(2, 2); 3])
    }

    /// Bilocal chain with arbitrary alphabets; source 0 links A-B, source 1 links B-C.
    pub fn bilocal_with(parties: Vec<Party>) -> Self {
        let incidence = vec![vec![true, false], vec![true, true], vec![false, true]];
        Network::new(parties, incidence).expect("bilocal chain is valid")
    }

    pub fn party_count(&self) -> usize {
        self.parties.len()
    }

    pub fn source_count(&self) -> usize {
        self.incidence[0].len()
    }

    pub fn parties(&self) -> &[Party] {
        &self.parties
    }

    pub fn party(&self, i: usize) -> Party {
        self.parties[i]
    }

    pub fn connected(&self, party: usize, source: usize) -> bool {
        self.incidence[party][source]
    }

    pub fn incidence(&self) -> &[Vec<bool>] {
        &self.incidence
    }

    /// Sources read by `party`, ascending.
    pub fn sources_of(&self, party: usize) -> Vec<usize> {
        (0..self.source_count()).filter(|&j| self.incidence[party][j]).collect()
    }

    pub fn parties_of(&self, source: usize) -> Vec<usize> {
        (0..self.party_count()).filter(|&i| self.incidence[i][source]).collect()
    }

    pub fn party_split(&self, source: usize) -> Result<PartySplit> {
        if source >= self.source_count() {
            return domain(format!("source {source} out of range (network has {})", self.source_count()));
        }
        let (a_side, b_side) = (0..self.party_count()).partition(|&i| self.incidence[i][source]);
        Ok(PartySplit { source, a_side, b_side })
    }

    pub fn input_sizes(&self) -> Vec<usize> {
        self.parties.iter().map(|p| p.inputs).collect()
    }

    pub fn output_sizes(&self) -> Vec<usize> {
        self.parties.iter().map(|p| p.outputs).collect()
    }

    pub fn input_tuple_count(&self) -> usize {
        self.parties.iter().map(|p| p.inputs).product()
    }

    pub fn output_tuple_count(&self) -> usize {
        self.parties.iter().map(|p| p.outputs).product()
    }

    /// Length `d` of a behavior vector.
    pub fn dimension(&self) -> usize {
        self.input_tuple_count() * self.output_tuple_count()
    }

    pub fn behavior_index(&self, inputs: &[usize], outputs: &[usize]) -> Result<usize> {
        let m = self.party_count();
        if inputs.len() != m || outputs.len() != m {
            return domain(format!("expected {m} inputs and {m} outputs"));
        }
        let mut x_idx = 0;
        let mut a_idx = 0;
        for (i, p) in self.parties.iter().enumerate() {
            if inputs[i] >= p.inputs {
                return domain(format!("input {} of party {i} out of range 0..{}", inputs[i], p.inputs));
            }
            if outputs[i] >= p.outputs {
                return domain(format!("output {} of party {i} out of range 0..{}", outputs[i], p.outputs));
            }
            x_idx = x_idx * p.inputs + inputs[i];
            a_idx = a_idx * p.outputs + outputs[i];
        }
        Ok(x_idx * self.output_tuple_count() + a_idx)
    }

    /// Inverse of [`Network::behavior_index`].
    pub fn behavior_unindex(&self, index: usize) -> Result<(Vec<usize>, Vec<usize>)> {
        if index >= self.dimension() {
            return domain(format!("index {index} out of range 0..{}", self.dimension()));
        }
        let outs = self.output_tuple_count();
        Ok((self.input_tuple(index / outs), self.output_tuple(index % outs)))
    }

    /// Mixed-radix digits of an input-tuple rank.
    pub fn input_tuple(&self, mut rank: usize) -> Vec<usize> {
        let mut t = vec![0; self.party_count()];
        for (i, p) in self.parties.iter().enumerate().rev() {
            t[i] = rank % p.inputs;
            rank /= p.inputs;
        }
        t
    }

    /// Inverse of [`Network::input_tuple`]; inputs are assumed in range.
    pub fn input_tuple_rank(&self, inputs: &[usize]) -> usize {
        inputs.iter().zip(&self.parties).fold(0, |acc, (&x, p)| acc * p.inputs + x)
    }

    pub fn output_tuple(&self, mut rank: usize) -> Vec<usize> {
        let mut t = vec![0; self.party_count()];
        for (i, p) in self.parties.iter().enumerate().rev() {
            t[i] = rank % p.outputs;
            rank /= p.outputs;
        }
        t
    }

    /// True when every party can reach every other through shared sources.
    pub fn is_connected(&self) -> bool {
        let m = self.party_count();
        let mut seen = vec![false; m];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in self.sources_of(i) {
                for k in self.parties_of(j) {
                    if !seen[k] {
                        seen[k] = true;
                        stack.push(k);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if !self.is_connected() {
            w.push("network is disconnected: some parties share no source path; refined bounds degenerate".to_string());
        }
        w
    }

    pub fn to_json(&self) -> NetworkJson {
        NetworkJson {
            parties: self.parties.iter().map(|p| PartyJson { inputs: p.inputs, outputs: p.outputs }).collect(),
            incidence: self.incidence.iter().map(|r| r.iter().map(|&b| u8::from(b)).collect()).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PartyJson {
    pub inputs: usize,
    pub outputs: usize,
}

/// `{"parties":[{"inputs":..,"outputs":..}],"incidence":[[0|1,..],..]}`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NetworkJson {
    pub parties: Vec<PartyJson>,
    pub incidence: Vec<Vec<u8>>,
}

impl TryFrom<NetworkJson> for Network {
    type Error = Error;

    fn try_from(j: NetworkJson) -> Result<Self> {
        let incidence = j
            .incidence
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&v| match v {
                        0 => Ok(false),
                        1 => Ok(true),
                        other => Err(Error::Parse(format!("incidence entries must be 0 or 1, found {other}"))),
                    })
                    .collect::<Result<Vec<bool>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let parties = j.parties.iter().map(|p| Party::new(p.inputs, p.outputs)).collect();
        Network::new(parties, incidence)
    }
}

impl Serialize for Network {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Network {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = NetworkJson::deserialize(d)?;
        Network::try_from(j).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_indexing_is_lexicographic() {
        let t = Network::triangle();
        assert_eq!(t.behavior_index(&[0, 0, 0], &[0, 0, 0]).unwrap(), 0);
        assert_eq!(t.behavior_index(&[0, 0, 0], &[1, 1, 1]).unwrap(), 7);
        assert_eq!(t.behavior_index(&[0, 0, 0], &[0, 1, 1]).unwrap(), 3);
        assert_eq!(t.sources_of(0), vec![1, 2]);
        assert_eq!(t.sources_of(1), vec![0, 2]);
    }

    #[test]
    fn bilocal_first_index() {
        let b = Network::bilocal_with(vec![Party::new(2, 2), Party::new(2, 4), Party::new(2, 2)]);
        assert_eq!(b.behavior_index(&[0, 0, 0], &[0, 0, 0]).unwrap(), 0);
        assert_eq!(b.dimension(), 128);
    }

    #[test]
    fn out_of_range_names_the_party() {
        let t = Network::triangle();
        let err = t.behavior_index(&[0, 0, 0], &[0, 2, 0]).unwrap_err();
        assert!(err.to_string().contains("party 1"), "{err}");
        let err = t.behavior_index(&[0, 1, 0], &[0, 0, 0]).unwrap_err();
        assert!(err.to_string().contains("party 1"), "{err}");
    }

    #[test]
    fn invalid_incidence_rejected() {
        let p = vec![Party::new(1, 2); 2];
        assert!(Network::new(p.clone(), vec![vec![true, false], vec![false, false]]).is_err());
        assert!(Network::new(p.clone(), vec![vec![true, false], vec![true, false]]).is_err());
        assert!(Network::new(vec![Party::new(0, 2)], vec![vec![true]]).is_err());
    }

    #[test]
    fn disconnected_networks_are_flagged() {
        let p = vec![Party::new(1, 2); 2];
        let n = Network::new(p, vec![vec![true, false], vec![false, true]]).unwrap();
        assert!(!n.is_connected());
        assert_eq!(n.warnings().len(), 1);
        assert!(Network::triangle().warnings().is_empty());
    }

    #[test]
    fn json_round_trip() {
        let t = Network::triangle();
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(
            s,
            r#"{"parties":[{"inputs":1,"outputs":2},{"inputs":1,"outputs":2},{"inputs":1,"outputs":2}],"incidence":[[0,1,1],[1,0,1],[1,1,0]]}"#
        );
        let back: Network = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
        assert!(serde_json::from_str::<Network>(r#"{"parties":[{"inputs":1,"outputs":2}],"incidence":[[2]]}"#).is_err());
    }
}
