use std::sync::atomic::{AtomicU64, Ordering};

use nalgebra::{DMatrix, DVector};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::pattern::{other_sources, Mark, SupportPattern};
use crate::error::{domain, Result};
use crate::finitemodel::{evaluate, FiniteLocalModel};
use crate::netcore::{Behavior, Network};
use crate::scalar::{rationalize, Rational};

/// A free probability of a pattern-constrained model.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Unknown {
    /// `P(λ_j = 0)` of a binary source, kept strictly inside (0, 1).
    SourceWeight(usize),
    /// `P(out = 0)` at an interior entry of the pattern.
    Entry(usize),
}

/// The eight equations `P_model(abc) = P_target(abc)` restricted to a pattern.
#[derive(Clone, Debug)]
pub struct FeasibilityProblem {
    pattern: SupportPattern,
    target: Behavior<Rational>,
    unknowns: Vec<Unknown>,
}

impl FeasibilityProblem {
    /// Sources must have at most two values; those with one are deterministic.
    pub fn new(pattern: SupportPattern, target: Behavior<Rational>) -> Result<Self> {
        super::require_binary_triangle(target.network())?;
        let cards = pattern.cards();
        if cards.iter().any(|&c| c > 2) {
            return domain("numeric feasibility supports at most two values per source");
        }
        let mut unknowns: Vec<Unknown> = (0..3).filter(|&j| cards[j] == 2).map(Unknown::SourceWeight).collect();
        unknowns
            .extend((0..pattern.marks().len()).filter(|&e| pattern.marks()[e] == Mark::Interior).map(Unknown::Entry));
        Ok(FeasibilityProblem { pattern, target, unknowns })
    }

    pub fn pattern(&self) -> &SupportPattern {
        &self.pattern
    }

    pub fn unknowns(&self) -> &[Unknown] {
        &self.unknowns
    }

    /// Source weights and `P(out = 0)` per entry, with unknowns substituted.
    fn fill<T: Clone>(&self, x: &[T], zero: T, one: T) -> ([T; 3], Vec<T>) {
        let mut p0: Vec<T> =
            self.pattern.marks().iter().map(|m| if *m == Mark::One { one.clone() } else { zero.clone() }).collect();
        let mut w0 = [one.clone(), one.clone(), one.clone()];
        for (u, v) in self.unknowns.iter().zip(x) {
            match *u {
                Unknown::SourceWeight(j) => w0[j] = v.clone(),
                Unknown::Entry(e) => p0[e] = v.clone(),
            }
        }
        (w0, p0)
    }

    fn probabilities(&self, x: &[f64]) -> [f64; 8] {
        let cards = self.pattern.cards();
        let (w0, p0) = self.fill(x, 0.0, 1.0);
        let weight = |j: usize, v: usize| {
            if cards[j] == 1 {
                1.0
            } else if v == 0 {
                w0[j]
            } else {
                1.0 - w0[j]
            }
        };
        let mut out = [0.0; 8];
        for lam in SupportPattern::grid(cards) {
            let w = weight(0, lam[0]) * weight(1, lam[1]) * weight(2, lam[2]);
            let q: Vec<[f64; 2]> = (0..3)
                .map(|p| {
                    let z = p0[self.pattern.entry(p, lam)];
                    [z, 1.0 - z]
                })
                .collect();
            for (k, o) in out.iter_mut().enumerate() {
                *o += w * q[0][k >> 2 & 1] * q[1][k >> 1 & 1] * q[2][k & 1];
            }
        }
        out
    }

    fn residual(&self, x: &[f64], target: &[f64; 8]) -> DVector<f64> {
        let p = self.probabilities(x);
        DVector::from_iterator(8, (0..8).map(|k| p[k] - target[k]))
    }

    /// Exact model for rational unknowns.
    pub fn exact_model(&self, x: &[Rational]) -> Result<FiniteLocalModel<Rational>> {
        let cards = self.pattern.cards();
        let (w0, p0) = self.fill(x, Rational::zero(), Rational::one());
        let sources: Vec<Vec<Rational>> = (0..3)
            .map(|j| if cards[j] == 1 { vec![Rational::one()] } else { vec![w0[j].clone(), Rational::one() - &w0[j]] })
            .collect();
        FiniteLocalModel::from_fn(Network::triangle(), sources, |p, _, lam| {
            let mut full = [0; 3];
            let [s, t] = other_sources(p);
            full[s] = lam[0];
            full[t] = lam[1];
            let z = p0[self.pattern.entry(p, full)].clone();
            vec![z.clone(), Rational::one() - z]
        })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct NumericConfig {
    pub starts: usize,
    pub seed: u64,
    /// Largest denominator tried when rounding a numeric solution.
    pub max_den: u64,
    /// Squared-residual threshold for attempting exact verification.
    pub tolerance: f64,
    pub sweeps: usize,
}

impl Default for NumericConfig {
    fn default() -> Self {
        NumericConfig { starts: 1000, seed: 0x7431_a9e5, max_den: 10_000, tolerance: 1e-10, sweeps: 300 }
    }
}

#[derive(Clone, Debug)]
pub enum NumericOutcome {
    /// An exact model reproducing the target, found from start `start`.
    Model { model: FiniteLocalModel<Rational>, start: usize },
    /// No start led to an exactly verified model; this proves nothing.
    NoSolutionFound { starts: usize, best_residual: f64 },
}

/// Columns `r(x with x_k = 1) - r(x with x_k = 0)`: exact, since every equation
/// is affine in each unknown separately.
fn jacobian(problem: &FeasibilityProblem, x: &[f64], target: &[f64; 8]) -> DMatrix<f64> {
    let n = x.len();
    let mut j = DMatrix::zeros(8, n);
    let mut y = x.to_vec();
    for k in 0..n {
        y[k] = 1.0;
        let hi = problem.residual(&y, target);
        y[k] = 0.0;
        let lo = problem.residual(&y, target);
        y[k] = x[k];
        j.set_column(k, &(hi - lo));
    }
    j
}

fn local_search(problem: &FeasibilityProblem, target: &[f64; 8], x: &mut [f64], sweeps: usize) -> f64 {
    let n = x.len();
    let mut last = problem.residual(x, target).norm_squared();
    for _ in 0..sweeps {
        for k in 0..n {
            x[k] = 0.0;
            let lo = problem.residual(x, target);
            x[k] = 1.0;
            let v = problem.residual(x, target) - &lo;
            let vv = v.norm_squared();
            x[k] = if vv > 1e-300 { (-lo.dot(&v) / vv).clamp(0.0, 1.0) } else { 0.5 };
        }
        let now = problem.residual(x, target).norm_squared();
        if now < 1e-24 || last - now < 1e-14 * last.max(1e-300) {
            last = now;
            break;
        }
        last = now;
    }
    // Gauss–Newton polish
    for _ in 0..40 {
        if last < 1e-28 || n == 0 {
            break;
        }
        let r = problem.residual(x, target);
        let step = match jacobian(problem, x, target).svd(true, true).solve(&(-r), 1e-14) {
            Ok(s) => s,
            Err(_) => break,
        };
        let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, d)| (a + d).clamp(0.0, 1.0)).collect();
        let now = problem.residual(&trial, target).norm_squared();
        if now >= last {
            break;
        }
        x.copy_from_slice(&trial);
        last = now;
    }
    last
}

fn verify(problem: &FeasibilityProblem, x: &[f64], max_den: u64) -> Option<FiniteLocalModel<Rational>> {
    let q: Vec<Rational> = x.iter().map(|&v| rationalize(v, max_den)).collect::<Option<_>>()?;
    if q.iter().any(|v| v <= &Rational::zero() || v >= &Rational::one()) {
        return None;
    }
    let model = problem.exact_model(&q).ok()?;
    (evaluate(&model).ok()? == problem.target).then_some(model)
}

/// Multistart local search on the squared residual, followed by rational
/// rounding and exact verification. Starts run in parallel; the lowest-index
/// success is returned, so the result does not depend on the thread count.
pub fn numeric_feasibility(problem: &FeasibilityProblem, config: &NumericConfig) -> NumericOutcome {
    let target: [f64; 8] = std::array::from_fn(|k| crate::Scalar::to_f64(&problem.target.values()[k]));
    let best = AtomicU64::new(f64::INFINITY.to_bits());
    let n = problem.unknowns.len();
    let found = (0..config.starts).into_par_iter().find_map_first(|start| {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(start as u64));
        let mut x: Vec<f64> = (0..n).map(|_| rng.gen_range(0.02..0.98)).collect();
        let res = local_search(problem, &target, &mut x, config.sweeps);
        // nonnegative floats order like their bit patterns
        best.fetch_min(res.to_bits(), Ordering::Relaxed);
        if res >= config.tolerance {
            return None;
        }
        verify(problem, &x, config.max_den).map(|model| (model, start))
    });
    match found {
        Some((model, start)) => NumericOutcome::Model { model, start },
        None => NumericOutcome::NoSolutionFound {
            starts: config.starts,
            best_residual: f64::from_bits(best.load(Ordering::Relaxed)),
        },
    }
}
