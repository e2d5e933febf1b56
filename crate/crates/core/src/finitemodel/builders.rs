use num_traits::Zero;

use super::model::FiniteLocalModel;
use crate::error::{domain, Result};
use crate::netcore::{Behavior, Network};
use crate::scalar::{int, rat, Rational, Scalar};

fn bit<S: Scalar>(b: bool) -> Vec<S> {
    if b {
        vec![S::zero(), S::one()]
    } else {
        vec![S::one(), S::zero()]
    }
}

/// Triangle model with outputs `a = [β ≥ γ]`, `b = [γ ≥ α]`, `c = [α ≥ β]`
/// evaluated on representative source values.
pub fn threshold_triangle_model<S: Scalar>(
    alpha_vals: &[S],
    beta_vals: &[S],
    gamma_vals: &[S],
    alpha_w: Vec<S>,
    beta_w: Vec<S>,
    gamma_w: Vec<S>,
) -> Result<FiniteLocalModel<S>> {
    let lists = [alpha_vals, beta_vals, gamma_vals];
    for (j, (vals, w)) in lists.iter().zip([&alpha_w, &beta_w, &gamma_w]).enumerate() {
        if vals.len() != w.len() {
            return domain(format!("source {j} has {} values but {} weights", vals.len(), w.len()));
        }
        if vals.windows(2).any(|p| p[0] >= p[1]) {
            return domain(format!("values of source {j} are not strictly increasing"));
        }
    }
    for j in 0..3 {
        for k in j + 1..3 {
            if lists[j].iter().any(|v| lists[k].contains(v)) {
                return domain(format!("sources {j} and {k} share a value; comparison is ambiguous"));
            }
        }
    }
    let (al, be, ga) = (alpha_vals.to_vec(), beta_vals.to_vec(), gamma_vals.to_vec());
    FiniteLocalModel::from_fn(Network::triangle(), vec![alpha_w, beta_w, gamma_w], move |i, _, lam| match i {
        0 => bit(be[lam[0]] >= ga[lam[1]]),
        1 => bit(ga[lam[1]] >= al[lam[0]]),
        _ => bit(al[lam[0]] >= be[lam[1]]),
    })
}

/// The (3, 2, 6) threshold model reproducing [`p_neq`]; its weights involve √3.
pub fn uneven_threshold_model() -> FiniteLocalModel<f64> {
    let s3 = 3f64.sqrt();
    let a1 = (3.0 - s3) / 12.0;
    let alpha = [a1, 0.5, 1.0 - a1];
    let u1 = (3.0 - s3) / 6.0;
    let beta = [(3.0 - s3) / 6.0, (3.0 + s3) / 6.0];
    let mut cuts = [0.0, alpha[0], beta[0], alpha[1], beta[1], alpha[2], 1.0];
    cuts.sort_by(f64::total_cmp);
    let gamma: Vec<f64> = cuts.windows(2).map(|p| (p[0] + p[1]) / 2.0).collect();
    let w = (3.0 - s3) / 12.0;
    let w_mid = 1.0 / (2.0 * s3);
    threshold_triangle_model(
        &alpha,
        &beta,
        &gamma,
        vec![u1, 1.0 - 2.0 * u1, u1],
        vec![0.5, 0.5],
        vec![w, w, w_mid, w_mid, w, w],
    )
    .expect("threshold representatives are separated")
}

/// The (2, 2, 2) model with `a = βγ`, `b = 1 ⊕ γα`, and `c = α` when `α ≠ β`,
/// otherwise a fair coin. It reproduces [`p_neq`] exactly.
pub fn two_bit_triangle_model() -> FiniteLocalModel<Rational> {
    let half = rat(1, 2);
    FiniteLocalModel::from_fn(
        Network::triangle(),
        vec![vec![rat(1, 3), rat(2, 3)], vec![rat(1, 3), rat(2, 3)], vec![rat(1, 4), rat(3, 4)]],
        |i, _, lam| match i {
            // A reads (β, γ), B reads (α, γ), C reads (α, β)
            0 => bit(lam[0] == 1 && lam[1] == 1),
            1 => bit(!(lam[1] == 1 && lam[0] == 1)),
            _ if lam[0] == lam[1] => vec![half.clone(), half.clone()],
            _ => bit(lam[0] == 1),
        },
    )
    .expect("two-bit model is well formed")
}

/// Uniform over the six non-constant output triples of the triangle.
pub fn p_neq() -> Behavior<Rational> {
    let v = (0..8).map(|k| if k == 0 || k == 7 { int(0) } else { rat(1, 6) }).collect();
    Behavior::new(Network::triangle(), v).expect("valid behavior")
}

/// Equal mixture of all-zero and all-one outputs on the triangle.
pub fn p_eq() -> Behavior<Rational> {
    let v = (0..8).map(|k| if k == 0 || k == 7 { rat(1, 2) } else { Rational::zero() }).collect();
    Behavior::new(Network::triangle(), v).expect("valid behavior")
}
