use std::fmt;

use num_traits::Zero;

use crate::error::{domain, Error, Result};
use crate::finitemodel::FiniteLocalModel;
use crate::scalar::{Rational, Scalar};

/// Classification of `P(out = 0 | sources)` for one response entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mark {
    /// `P(out = 0) = 0`: the party answers 1.
    Zero,
    /// `P(out = 0) = 1`: the party answers 0.
    One,
    Interior,
}

impl Mark {
    pub const ALL: [Mark; 3] = [Mark::Zero, Mark::One, Mark::Interior];

    /// Bitmask of permitted outputs: bit 0 for output 0, bit 1 for output 1.
    pub fn permitted(self) -> u8 {
        match self {
            Mark::Zero => 0b10,
            Mark::One => 0b01,
            Mark::Interior => 0b11,
        }
    }

    pub fn flipped(self) -> Mark {
        match self {
            Mark::Zero => Mark::One,
            Mark::One => Mark::Zero,
            Mark::Interior => Mark::Interior,
        }
    }

    fn digit(self) -> u64 {
        self as u64
    }

    fn symbol(self) -> char {
        match self {
            Mark::Zero => '0',
            Mark::One => '1',
            Mark::Interior => 'i',
        }
    }

    /// Mark of a probability `p = P(out = 0)`.
    pub fn of<S: Scalar>(p: &S) -> Mark {
        if p.approx_eq(&S::zero()) {
            Mark::Zero
        } else if p.approx_eq(&S::one()) {
            Mark::One
        } else {
            Mark::Interior
        }
    }
}

/// Marks for every response entry of a triangle model with binary outputs.
/// Party tables are stored A, B, C, each indexed by its two source values
/// (lower source index first).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SupportPattern {
    cards: [usize; 3],
    marks: Vec<Mark>,
}

/// Bitmask over the eight outcomes `4a + 2b + c` of the entries that are nonzero.
pub fn support_mask<S: Scalar>(values: &[S]) -> u8 {
    values.iter().enumerate().filter(|(_, v)| !v.approx_eq(&S::zero())).fold(0, |m, (k, _)| m | 1 << k)
}

pub(crate) fn other_sources(party: usize) -> [usize; 2] {
    match party {
        0 => [1, 2],
        1 => [0, 2],
        _ => [0, 1],
    }
}

impl SupportPattern {
    pub fn new(cards: [usize; 3], marks: Vec<Mark>) -> Result<Self> {
        if cards.contains(&0) {
            return domain("source cardinalities must be positive");
        }
        let expected = Self::entry_count(cards);
        if marks.len() != expected {
            return domain(format!("pattern has {} marks, expected {expected}", marks.len()));
        }
        Ok(SupportPattern { cards, marks })
    }

    pub fn uniform(cards: [usize; 3], mark: Mark) -> Self {
        SupportPattern { cards, marks: vec![mark; Self::entry_count(cards)] }
    }

    pub fn entry_count(cards: [usize; 3]) -> usize {
        cards[1] * cards[2] + cards[0] * cards[2] + cards[0] * cards[1]
    }

    /// Base-3 decoding at cards (2, 2, 2); the first mark is the most significant digit.
    pub fn from_code(mut code: u64) -> Self {
        let mut marks = vec![Mark::Zero; 12];
        for k in (0..12).rev() {
            marks[k] = Mark::ALL[(code % 3) as usize];
            code /= 3;
        }
        SupportPattern { cards: [2, 2, 2], marks }
    }

    pub fn code(&self) -> u64 {
        self.marks.iter().fold(0, |acc, m| acc * 3 + m.digit())
    }

    pub fn cards(&self) -> [usize; 3] {
        self.cards
    }

    pub fn marks(&self) -> &[Mark] {
        &self.marks
    }

    pub(crate) fn offset(&self, party: usize) -> usize {
        let c = self.cards;
        match party {
            0 => 0,
            1 => c[1] * c[2],
            _ => c[1] * c[2] + c[0] * c[2],
        }
    }

    /// Entry index of `party` given all three source values (its own slot ignored).
    pub fn entry(&self, party: usize, lambda: [usize; 3]) -> usize {
        let [s, t] = other_sources(party);
        self.offset(party) + lambda[s] * self.cards[t] + lambda[t]
    }

    pub fn mark(&self, party: usize, lambda: [usize; 3]) -> Mark {
        self.marks[self.entry(party, lambda)]
    }

    pub(crate) fn grid(cards: [usize; 3]) -> impl Iterator<Item = [usize; 3]> {
        (0..cards[0]).flat_map(move |a| (0..cards[1]).flat_map(move |b| (0..cards[2]).map(move |g| [a, b, g])))
    }

    /// Outcomes reachable from some source triple with full-support sources.
    pub fn possible_outcomes(&self) -> u8 {
        let mut set = 0u8;
        for lam in Self::grid(self.cards) {
            let m: Vec<u8> = (0..3).map(|p| self.mark(p, lam).permitted()).collect();
            for a in 0..2 {
                for b in 0..2 {
                    for c in 0..2 {
                        if m[0] >> a & m[1] >> b & m[2] >> c & 1 == 1 {
                            set |= 1 << (4 * a + 2 * b + c);
                        }
                    }
                }
            }
        }
        set
    }

    /// Pattern of a triangle model with binary outputs.
    pub fn of_model<S: Scalar>(model: &FiniteLocalModel<S>) -> Result<Self> {
        super::require_binary_triangle(model.network())?;
        let c = model.cards();
        let cards = [c[0], c[1], c[2]];
        let mut marks = vec![Mark::Zero; Self::entry_count(cards)];
        let pattern = SupportPattern { cards, marks: marks.clone() };
        for lam in Self::grid(cards) {
            for p in 0..3 {
                let [s, t] = other_sources(p);
                let t_ = model.response(p);
                marks[pattern.entry(p, lam)] = Mark::of(&t_.dist(0, t_.column_of(&[lam[s], lam[t]]))[0]);
            }
        }
        Ok(SupportPattern { cards, marks })
    }

    /// Whether the exact model realizes this pattern entry by entry.
    pub fn matches(&self, model: &FiniteLocalModel<Rational>) -> bool {
        SupportPattern::of_model(model).is_ok_and(|p| &p == self)
            && model.sources().iter().all(|w| w.iter().all(|x| !x.is_zero()))
    }
}

impl fmt::Display for SupportPattern {
    /// `A:....|B:....|C:....` with `0`, `1`, `i` marks.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (p, name) in ["A", "B", "C"].iter().enumerate() {
            if p > 0 {
                f.write_str("|")?;
            }
            let start = self.offset(p);
            let end = if p == 2 { self.marks.len() } else { self.offset(p + 1) };
            write!(f, "{name}:")?;
            for m in &self.marks[start..end] {
                write!(f, "{}", m.symbol())?;
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for SupportPattern {
    type Err = Error;

    /// Parses 12 marks at cards (2, 2, 2), ignoring separators and party labels.
    fn from_str(s: &str) -> Result<Self> {
        let marks: Vec<Mark> = s
            .replace("A:", "")
            .replace("B:", "")
            .replace("C:", "")
            .chars()
            .filter(|c| !matches!(c, '|' | ' ' | ','))
            .map(|c| match c {
                '0' => Ok(Mark::Zero),
                '1' => Ok(Mark::One),
                'i' | 'I' => Ok(Mark::Interior),
                other => Err(Error::Parse(format!("bad mark {other:?} in pattern"))),
            })
            .collect::<Result<_>>()?;
        SupportPattern::new([2, 2, 2], marks)
    }
}
