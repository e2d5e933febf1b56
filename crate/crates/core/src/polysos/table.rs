use num_traits::One;

use super::poly::{MultiPoly, Var};
use crate::scalar::{rat, Rational};

/// `(α₀, α₁, β₀, β₁, γ₀, γ₁)`, each `+1` or `-1`.
pub type Signs = [i8; 6];

/// `⟨A-part · B-part · C-part⟩` indexed by subset masks: bit 0 selects the
/// index-0 observable and bit 1 the index-1 observable of each party.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelatorTable {
    entries: Vec<MultiPoly>,
}

impl CorrelatorTable {
    pub fn from_fn(f: impl Fn(usize, usize, usize) -> MultiPoly) -> Self {
        let mut entries = Vec::with_capacity(64);
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    entries.push(f(a, b, c));
                }
            }
        }
        CorrelatorTable { entries }
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> &MultiPoly {
        &self.entries[(a * 4 + b) * 4 + c]
    }

    /// Label like `A0A1B0C1`, or `1` for the empty product.
    pub fn label(a: usize, b: usize, c: usize) -> String {
        let mut s = String::new();
        for (party, mask) in [("A", a), ("B", b), ("C", c)] {
            for k in 0..2 {
                if mask >> k & 1 == 1 {
                    s.push_str(&format!("{party}{k}"));
                }
            }
        }
        if s.is_empty() {
            s.push('1');
        }
        s
    }
}

/// Symmetrized bilocal model in the unknowns `ξ, ζ, f₁, f₂` and efficiency `η`.
///
/// Correlators without Bob factor as Alice times Charlie; the empty product is 1.
pub fn build_model_table() -> CorrelatorTable {
    let eta = MultiPoly::var(Var::Eta);
    let one = MultiPoly::int(1);
    let alice = [one.clone(), &eta - &one, &one - &eta, MultiPoly::var(Var::Zeta)];
    let charlie = [one.clone(), &one - &eta, &one - &eta, MultiPoly::var(Var::Xi)];
    let half_sq = (&eta * &eta).scale(&rat(1, 2));
    let f1 = MultiPoly::var(Var::F1);
    let f2 = MultiPoly::var(Var::F2);
    CorrelatorTable::from_fn(|a, b, c| match (b, a, c) {
        (0, _, _) => &alice[a] * &charlie[c],
        // ⟨.B0.⟩
        (1, 1, 1) | (1, 2, 2) => half_sq.clone(),
        (1, 1, 2) | (1, 2, 1) => -&half_sq,
        (1, 3, 1) => f2.clone(),
        (1, 3, 2) => -&f2,
        // ⟨.B1.⟩
        (2, 1 | 2, 1 | 2) => half_sq.clone(),
        (2, 1 | 2, 3) => f1.clone(),
        _ => MultiPoly::zero(),
    })
}

/// `P(A₀=α₀, A₁=α₁, B₀=β₀, B₁=β₁, C₀=γ₀, C₁=γ₁)` as the expectation of
/// `∏(1 + s·O)/64`; with `scaled`, returns 64 times that.
pub fn probability_from_signs(table: &CorrelatorTable, signs: Signs, scaled: bool) -> MultiPoly {
    let mut total = MultiPoly::zero();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                let mut sign = 1i64;
                for (mask, pair) in [(a, [signs[0], signs[1]]), (b, [signs[2], signs[3]]), (c, [signs[4], signs[5]])] {
                    for k in 0..2 {
                        if mask >> k & 1 == 1 {
                            sign *= pair[k] as i64;
                        }
                    }
                }
                total = total + table.get(a, b, c).scale(&Rational::from_integer(sign.into()));
            }
        }
    }
    if scaled {
        total
    } else {
        total.scale(&(Rational::one() / Rational::from_integer(64.into())))
    }
}
