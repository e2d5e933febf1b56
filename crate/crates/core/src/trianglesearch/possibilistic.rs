use rayon::prelude::*;

use super::pattern::{Mark, SupportPattern};
use crate::error::{domain, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    /// Scans every mark assignment, refusing more than `cap` patterns.
    Exhaustive { cap: u64 },
    /// Depth-first search with propagation, refusing more than `node_cap` nodes.
    Pruned { node_cap: u64 },
}

impl Default for SearchMode {
    /// Exhaustive up to `3^12`, every assignment at cards (2, 2, 2).
    fn default() -> Self {
        SearchMode::Exhaustive { cap: 531_441 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Possibilistic {
    Feasible(SupportPattern),
    Infeasible,
}

impl Possibilistic {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Possibilistic::Feasible(_))
    }
}

fn pattern_count(cards: [usize; 3]) -> Option<u64> {
    3u64.checked_pow(SupportPattern::entry_count(cards) as u32)
}

fn decode(cards: [usize; 3], mut code: u64) -> SupportPattern {
    let n = SupportPattern::entry_count(cards);
    let mut marks = vec![Mark::Zero; n];
    for k in (0..n).rev() {
        marks[k] = Mark::ALL[(code % 3) as usize];
        code /= 3;
    }
    SupportPattern::new(cards, marks).expect("shape matches cards")
}

/// Whether some mark assignment at `cards` has possible-outcome set exactly `support`.
/// Exhaustive mode returns the witness with the smallest code.
pub fn possibilistic_feasible(support: u8, cards: [usize; 3], mode: SearchMode) -> Result<Possibilistic> {
    if cards.contains(&0) {
        return domain("source cardinalities must be positive");
    }
    match mode {
        SearchMode::Exhaustive { cap } => {
            let count = pattern_count(cards).filter(|&c| c <= cap).ok_or_else(|| {
                Error::Resource(format!("cards {cards:?} exceed the exhaustive cap of {cap} patterns; use pruned mode"))
            })?;
            let witness = (0..count)
                .into_par_iter()
                .map(|code| decode(cards, code))
                .find_first(|p| p.possible_outcomes() == support);
            Ok(witness.map_or(Possibilistic::Infeasible, Possibilistic::Feasible))
        }
        SearchMode::Pruned { node_cap } => pruned(support, cards, node_cap),
    }
}

/// Every possible-outcome set reachable at `cards`, as a 256-entry table.
pub fn achievable_supports(cards: [usize; 3], cap: u64) -> Result<Vec<bool>> {
    let count = pattern_count(cards)
        .filter(|&c| c <= cap)
        .ok_or_else(|| Error::Resource(format!("cards {cards:?} exceed the cap of {cap} patterns")))?;
    let masks = (0..count)
        .into_par_iter()
        .fold(
            || vec![false; 256],
            |mut acc, code| {
                acc[decode(cards, code).possible_outcomes() as usize] = true;
                acc
            },
        )
        .reduce(|| vec![false; 256], |a, b| a.iter().zip(&b).map(|(x, y)| *x || *y).collect());
    Ok(masks)
}

struct Search {
    cards: [usize; 3],
    support: u8,
    shape: SupportPattern,
    /// Entries in assignment order: grid points are completed one after another.
    order: Vec<usize>,
    assigned: Vec<Option<Mark>>,
    nodes: u64,
    node_cap: u64,
}

impl Search {
    /// Outcomes certainly possible (all three entries assigned) and those still
    /// possibly reachable (unassigned entries treated as interior).
    fn bounds(&self) -> (u8, u8) {
        let (mut sure, mut maybe) = (0u8, 0u8);
        for lam in SupportPattern::grid(self.cards) {
            let marks: Vec<Option<Mark>> = (0..3).map(|p| self.assigned[self.shape.entry(p, lam)]).collect();
            let complete = marks.iter().all(Option::is_some);
            let m: Vec<u8> = marks.iter().map(|m| m.map_or(0b11, Mark::permitted)).collect();
            for k in 0..8 {
                let (a, b, c) = (k >> 2 & 1, k >> 1 & 1, k & 1);
                if m[0] >> a & m[1] >> b & m[2] >> c & 1 == 1 {
                    maybe |= 1 << k;
                    if complete {
                        sure |= 1 << k;
                    }
                }
            }
        }
        (sure, maybe)
    }

    fn go(&mut self, depth: usize) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.node_cap {
            return Err(Error::Resource(format!("pruned search exceeded {} nodes", self.node_cap)));
        }
        let (sure, maybe) = self.bounds();
        if sure & !self.support != 0 || self.support & !maybe != 0 {
            return Ok(false);
        }
        if depth == self.order.len() {
            return Ok(sure == self.support);
        }
        let e = self.order[depth];
        for m in Mark::ALL {
            self.assigned[e] = Some(m);
            if self.go(depth + 1)? {
                return Ok(true);
            }
        }
        self.assigned[e] = None;
        Ok(false)
    }
}

fn pruned(support: u8, cards: [usize; 3], node_cap: u64) -> Result<Possibilistic> {
    let shape = SupportPattern::uniform(cards, Mark::Zero);
    let mut order = Vec::new();
    for lam in SupportPattern::grid(cards) {
        for p in 0..3 {
            let e = shape.entry(p, lam);
            if !order.contains(&e) {
                order.push(e);
            }
        }
    }
    let n = order.len();
    let mut s = Search { cards, support, shape, order, assigned: vec![None; n], nodes: 0, node_cap };
    if s.go(0)? {
        let marks = s.assigned.into_iter().map(|m| m.expect("complete assignment")).collect();
        Ok(Possibilistic::Feasible(SupportPattern::new(cards, marks)?))
    } else {
        Ok(Possibilistic::Infeasible)
    }
}
