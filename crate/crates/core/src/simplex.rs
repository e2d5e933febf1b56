//! Exact two-phase simplex over the rationals with Bland's rule.
//!
//! Solves `min cᵀx` subject to `A x = b`, `x ≥ 0`. When the constraints are
//! infeasible, Phase I yields a Farkas vector `y` with `yᵀA ≤ 0` and `yᵀb > 0`.

use num_traits::{One, Signed, Zero};

use crate::error::{domain, Result};
use crate::scalar::Rational;

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rational>, value: Rational },
    Infeasible { farkas: Vec<Rational> },
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    /// Reduced-cost row; last entry is minus the objective value.
    cost: Vec<Rational>,
    basis: Vec<usize>,
}

impl Tableau {
    fn rhs(&self) -> usize {
        self.cost.len() - 1
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = Rational::one() / &self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = self.rows[r].clone();
        let nz: Vec<usize> = (0..pivot_row.len()).filter(|&j| !pivot_row[j].is_zero()).collect();
        let eliminate = |row: &mut Vec<Rational>| {
            let f = row[c].clone();
            if f.is_zero() {
                return;
            }
            for &j in &nz {
                let d = &f * &pivot_row[j];
                row[j] -= d;
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.cost);
        self.basis[r] = c;
    }

    /// Runs Bland's rule over columns `< limit`. Returns false when unbounded.
    fn optimize(&mut self, limit: usize) -> bool {
        let rhs = self.rhs();
        loop {
            let Some(c) = (0..limit).find(|&j| self.cost[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[c].is_positive() {
                    let ratio = &row[rhs] / &row[c];
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return false,
            }
        }
    }
}

/// Minimizes `cᵀx` over `{x ≥ 0 : A x = b}`.
pub fn solve(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> Result<LpOutcome> {
    let m = a.len();
    let n = c.len();
    if b.len() != m || a.iter().any(|row| row.len() != n) {
        return domain("inconsistent linear program dimensions");
    }
    let width = n + m + 1;
    let mut sign = vec![Rational::one(); m];
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let flip = b[i].is_negative();
        if flip {
            sign[i] = -Rational::one();
        }
        let mut row = vec![Rational::zero(); width];
        for j in 0..n {
            row[j] = if flip { -a[i][j].clone() } else { a[i][j].clone() };
        }
        row[n + i] = Rational::one();
        row[width - 1] = if flip { -b[i].clone() } else { b[i].clone() };
        rows.push(row);
    }
    // Phase I: minimize the sum of artificials.
    let mut cost = vec![Rational::zero(); width];
    for row in &rows {
        for j in 0..n {
            cost[j] -= &row[j];
        }
        cost[width - 1] -= &row[width - 1];
    }
    let mut t = Tableau { rows, cost, basis: (n..n + m).collect() };
    t.optimize(n);
    if !t.cost[width - 1].is_zero() {
        // y_i = 1 - (reduced cost of artificial i), in the unflipped frame
        let farkas = (0..m).map(|i| (Rational::one() - &t.cost[n + i]) * &sign[i]).collect();
        return Ok(LpOutcome::Infeasible { farkas });
    }

    // Drive zero-level artificials out of the basis, dropping redundant rows.
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            match (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => t.pivot(i, j),
                None => {
                    t.rows.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }
    for row in t.rows.iter_mut() {
        let rhs = row[width - 1].clone();
        row.truncate(n);
        row.push(rhs);
    }

    // Phase II.
    let mut cost: Vec<Rational> = c.to_vec();
    cost.push(Rational::zero());
    for (row, &bv) in t.rows.iter().zip(&t.basis) {
        if c[bv].is_zero() {
            continue;
        }
        for j in 0..=n {
            if !row[j].is_zero() {
                let d = &c[bv] * &row[j];
                cost[j] -= d;
            }
        }
    }
    t.cost = cost;
    if !t.optimize(n) {
        return Ok(LpOutcome::Unbounded);
    }
    let mut x = vec![Rational::zero(); n];
    for (row, &bv) in t.rows.iter().zip(&t.basis) {
        x[bv] = row[n].clone();
    }
    let value = -t.cost[n].clone();
    Ok(LpOutcome::Optimal { x, value })
}

/// Finds some `x ≥ 0` with `A x = b`, or a Farkas certificate.
pub fn feasible(a: &[Vec<Rational>], b: &[Rational]) -> Result<LpOutcome> {
    let n = a.first().map_or(0, Vec::len);
    solve(a, b, &vec![Rational::zero(); n])
}
