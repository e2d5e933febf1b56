use super::pattern::{other_sources, SupportPattern};
use crate::error::Result;
use crate::finitemodel::FiniteLocalModel;
use crate::netcore::{Behavior, Network};
use crate::scalar::Scalar;

/// Party permutation with its induced source permutation (source `j` is the
/// one party `j` does not read), source value reversals and output flips.
///
/// Under `g`, party `i` becomes party `perm[i]`, source `j` becomes source
/// `perm[j]`, the value of new source `k` is reversed when `source_flip[k]`,
/// and the output of new party `p` is flipped when `output_flip[p]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TriangleSymmetry {
    pub perm: [usize; 3],
    pub source_flip: [bool; 3],
    pub output_flip: [bool; 3],
}

const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

fn bits(k: usize) -> [bool; 3] {
    [k & 4 != 0, k & 2 != 0, k & 1 != 0]
}

impl TriangleSymmetry {
    pub fn identity() -> Self {
        TriangleSymmetry { perm: [0, 1, 2], source_flip: [false; 3], output_flip: [false; 3] }
    }

    /// All 384 elements in a fixed order, identity first.
    pub fn all() -> Vec<Self> {
        let mut out = Vec::with_capacity(384);
        for perm in PERMS {
            for s in 0..8 {
                for o in 0..8 {
                    out.push(TriangleSymmetry { perm, source_flip: bits(s), output_flip: bits(o) });
                }
            }
        }
        out
    }

    fn inverse_perm(&self) -> [usize; 3] {
        let mut inv = [0; 3];
        for (i, &p) in self.perm.iter().enumerate() {
            inv[p] = i;
        }
        inv
    }

    pub fn new_cards(&self, cards: [usize; 3]) -> [usize; 3] {
        let mut c = [0; 3];
        for j in 0..3 {
            c[self.perm[j]] = cards[j];
        }
        c
    }

    /// Old source values seen from new source values `new`.
    fn old_lambda(&self, new: [usize; 3], old_cards: [usize; 3]) -> [usize; 3] {
        let mut old = [0; 3];
        for j in 0..3 {
            let k = self.perm[j];
            old[j] = if self.source_flip[k] { old_cards[j] - 1 - new[k] } else { new[k] };
        }
        old
    }

    /// Image of outcome index `4a + 2b + c`.
    pub fn act_outcome(&self, k: usize) -> usize {
        let a = [k >> 2 & 1, k >> 1 & 1, k & 1];
        let mut b = [0; 3];
        for i in 0..3 {
            let p = self.perm[i];
            b[p] = a[i] ^ self.output_flip[p] as usize;
        }
        4 * b[0] + 2 * b[1] + b[2]
    }

    pub fn act_mask(&self, mask: u8) -> u8 {
        (0..8).filter(|&k| mask >> k & 1 == 1).fold(0, |m, k| m | 1 << self.act_outcome(k))
    }

    /// Image of a triangle behavior with binary outputs and no inputs.
    pub fn act_behavior<S: Scalar>(&self, behavior: &Behavior<S>) -> Result<Behavior<S>> {
        super::require_binary_triangle(behavior.network())?;
        let mut values = vec![S::zero(); 8];
        for (k, v) in behavior.values().iter().enumerate() {
            values[self.act_outcome(k)] = v.clone();
        }
        Behavior::new(behavior.network().clone(), values)
    }

    pub fn act_pattern(&self, pattern: &SupportPattern) -> SupportPattern {
        let old_cards = pattern.cards();
        let cards = self.new_cards(old_cards);
        let inv = self.inverse_perm();
        let mut marks = vec![pattern.marks()[0]; SupportPattern::entry_count(cards)];
        let shape = SupportPattern::uniform(cards, pattern.marks()[0]);
        for lam in SupportPattern::grid(cards) {
            let old = self.old_lambda(lam, old_cards);
            for p in 0..3 {
                let m = pattern.mark(inv[p], old);
                marks[shape.entry(p, lam)] = if self.output_flip[p] { m.flipped() } else { m };
            }
        }
        SupportPattern::new(cards, marks).expect("image has the permuted shape")
    }

    /// Image of a triangle model with binary outputs.
    pub fn act_model<S: Scalar>(&self, model: &FiniteLocalModel<S>) -> Result<FiniteLocalModel<S>> {
        super::require_binary_triangle(model.network())?;
        let c = model.cards();
        let old_cards = [c[0], c[1], c[2]];
        let inv = self.inverse_perm();
        let mut sources = vec![Vec::new(); 3];
        for j in 0..3 {
            let k = self.perm[j];
            let mut w = model.source(j).to_vec();
            if self.source_flip[k] {
                w.reverse();
            }
            sources[k] = w;
        }
        FiniteLocalModel::from_fn(Network::triangle(), sources, |p, _, lam| {
            let mut full = [0; 3];
            let [s, t] = other_sources(p);
            full[s] = lam[0];
            full[t] = lam[1];
            let old = self.old_lambda(full, old_cards);
            let i = inv[p];
            let [os, ot] = other_sources(i);
            let table = model.response(i);
            let mut dist = table.dist(0, table.column_of(&[old[os], old[ot]])).to_vec();
            if self.output_flip[p] {
                dist.reverse();
            }
            dist
        })
    }

    /// Group elements fixing `behavior` (exactly for rationals, within tolerance for floats).
    pub fn stabilizer<S: Scalar>(behavior: &Behavior<S>) -> Result<Vec<Self>> {
        super::require_binary_triangle(behavior.network())?;
        let v = behavior.values();
        Ok(Self::all().into_iter().filter(|g| (0..8).all(|k| v[g.act_outcome(k)].approx_eq(&v[k]))).collect())
    }

    /// Lexicographically least image of `pattern` under `group`.
    pub fn canonical(pattern: &SupportPattern, group: &[Self]) -> SupportPattern {
        group.iter().map(|g| g.act_pattern(pattern)).min().unwrap_or_else(|| pattern.clone())
    }
}
