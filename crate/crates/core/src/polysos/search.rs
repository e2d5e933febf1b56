use num_traits::{Signed, Zero};
use serde_json::json;

use super::certificate::scaled_probability;
use super::poly::{Monomial, MultiPoly, Var, VAR_COUNT};
use super::table::Signs;
use crate::error::{Error, Result};
use crate::scalar::{format_rational, int, rat, Rational};
use crate::simplex::{self, LpOutcome};

/// Root of `F₊ = (2η - ζ̄)(2η - ξ̄) = 0` on which to bound `η`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    ZetaBarIs2Eta,
    XiBarIs2Eta,
}

impl Branch {
    fn fixed(self) -> Var {
        match self {
            Branch::ZetaBarIs2Eta => Var::ZetaBar,
            Branch::XiBarIs2Eta => Var::XiBar,
        }
    }

    /// The barred variable left free on this branch.
    pub fn free(self) -> Var {
        match self {
            Branch::ZetaBarIs2Eta => Var::XiBar,
            Branch::XiBarIs2Eta => Var::ZetaBar,
        }
    }

    pub fn restrict(self, p: &MultiPoly) -> MultiPoly {
        p.substitute(self.fixed(), &MultiPoly::var(Var::Eta).scale(&int(2)))
    }

    pub fn describe(self) -> &'static str {
        match self {
            Branch::ZetaBarIs2Eta => "zetabar = 2*eta",
            Branch::XiBarIs2Eta => "xibar = 2*eta",
        }
    }
}

fn all_signs() -> impl Iterator<Item = Signs> {
    (0..64usize).map(|k| std::array::from_fn(|j| if k >> (5 - j) & 1 == 1 { -1 } else { 1 }))
}

/// `bound - η = Σ w_k g_k + Σ c_s q_s² + constant` on one branch, with all
/// weights nonnegative.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub branch: Branch,
    pub bound: Rational,
    pub multipliers: Vec<(Signs, Rational)>,
    pub squares: Vec<(Rational, MultiPoly)>,
    pub constant: Rational,
}

fn signs_label(s: &Signs) -> String {
    s.iter().map(|&x| if x > 0 { '+' } else { '-' }).collect()
}

impl Certificate {
    fn target(&self) -> MultiPoly {
        MultiPoly::constant(self.bound.clone()) - MultiPoly::var(Var::Eta)
    }

    fn combination(&self) -> MultiPoly {
        let mut sum = MultiPoly::constant(self.constant.clone());
        for (s, w) in &self.multipliers {
            sum = sum + self.branch.restrict(&scaled_probability(*s)).scale(w);
        }
        for (c, q) in &self.squares {
            sum = sum + (q * q).scale(c);
        }
        sum
    }

    /// Exact re-check of the identity and the signs of all weights.
    pub fn verify(&self) -> Result<()> {
        let negative = self.multipliers.iter().map(|(_, w)| w).chain(self.squares.iter().map(|(c, _)| c));
        if self.constant.is_negative() || negative.into_iter().any(Signed::is_negative) {
            return Err(Error::Verification("certificate has a negative weight".into()));
        }
        let diff = self.target() - self.combination();
        if !diff.is_zero() {
            return Err(Error::Verification(format!("certificate residue on {}: {diff}", self.branch.describe())));
        }
        Ok(())
    }

    pub fn expression(&self) -> String {
        let mut parts: Vec<String> =
            self.multipliers.iter().map(|(s, w)| format!("{}*64P({})", format_rational(w), signs_label(s))).collect();
        parts.extend(self.squares.iter().map(|(c, q)| format!("{}*({})^2", format_rational(c), q)));
        if !self.constant.is_zero() {
            parts.push(format_rational(&self.constant));
        }
        format!("{} - eta = {}", format_rational(&self.bound), parts.join(" + "))
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "substitution": self.branch.describe(),
            "certificate": self.expression(),
            "multipliers": self.multipliers.iter().map(|(s, w)| json!({
                "signs": signs_label(s), "weight": format_rational(w)
            })).collect::<Vec<_>>(),
            "sos": self.squares.iter().map(|(c, q)| json!({
                "scale": format_rational(c), "square": q.to_string()
            })).collect::<Vec<_>>(),
            "constant": format_rational(&self.constant),
        })
    }
}

/// Point on a branch where every `g_k ≥ 0` holds yet `η` exceeds the bound.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub eta: Rational,
    pub xibar: Rational,
    pub zetabar: Rational,
    pub f1: Rational,
    pub f2: Rational,
}

impl Witness {
    fn point(&self) -> [Rational; VAR_COUNT] {
        let mut p: [Rational; VAR_COUNT] = std::array::from_fn(|_| Rational::zero());
        p[Var::Eta as usize] = self.eta.clone();
        p[Var::XiBar as usize] = self.xibar.clone();
        p[Var::ZetaBar as usize] = self.zetabar.clone();
        p[Var::Xi as usize] = int(1) - &self.xibar;
        p[Var::Zeta as usize] = &self.zetabar - int(1);
        p[Var::F1 as usize] = self.f1.clone();
        p[Var::F2 as usize] = self.f2.clone();
        p
    }

    /// Smallest of the 64 scaled probabilities at this point.
    pub fn min_probability(&self) -> Rational {
        let p = self.point();
        all_signs().map(|s| scaled_probability(s).eval(&p)).min().expect("64 patterns")
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "eta": format_rational(&self.eta),
            "xibar": format_rational(&self.xibar),
            "zetabar": format_rational(&self.zetabar),
            "f1": format_rational(&self.f1),
            "f2": format_rational(&self.f2),
        })
    }
}

#[derive(Clone, Debug)]
pub enum CertificateSearch {
    Found(Certificate),
    NotFound { witness: Option<Witness> },
}

/// Searches for a certificate of `η ≤ bound` on `branch` with constant
/// multipliers on the 64 positivity inequalities and squares of degree-one
/// polynomials from a fixed dictionary. The LP is solved exactly and any
/// solution is re-verified. On failure, looks for a point that satisfies every
/// inequality with `η > bound`.
pub fn search_certificate(branch: Branch, bound: &Rational) -> Result<CertificateSearch> {
    let eta = MultiPoly::var(Var::Eta);
    let u = MultiPoly::var(branch.free());
    let one = MultiPoly::int(1);
    let roots = [
        &eta - &MultiPoly::constant(bound.clone()),
        eta.clone(),
        &eta - &one,
        &u - &eta.scale(&int(2)),
        &u - &one,
        u.clone(),
    ];
    let signs: Vec<Signs> = all_signs().collect();
    let mut columns: Vec<MultiPoly> = signs.iter().map(|s| branch.restrict(&scaled_probability(*s))).collect();
    columns.extend(roots.iter().map(|q| q * q));
    columns.push(one.clone());
    let target = MultiPoly::constant(bound.clone()) - eta.clone();

    let mut monomials: Vec<Monomial> =
        columns.iter().chain(std::iter::once(&target)).flat_map(|p| p.terms().map(|(m, _)| *m)).collect();
    monomials.sort();
    monomials.dedup();
    let a: Vec<Vec<Rational>> = monomials.iter().map(|m| columns.iter().map(|p| p.coefficient(m)).collect()).collect();
    let b: Vec<Rational> = monomials.iter().map(|m| target.coefficient(m)).collect();
    let cost: Vec<Rational> = (0..columns.len()).map(|j| if j < 64 { int(1) } else { int(0) }).collect();

    match simplex::solve(&a, &b, &cost)? {
        LpOutcome::Optimal { x, .. } => {
            let cert = Certificate {
                branch,
                bound: bound.clone(),
                multipliers: signs.iter().zip(&x).filter(|(_, w)| !w.is_zero()).map(|(s, w)| (*s, w.clone())).collect(),
                squares: roots
                    .iter()
                    .zip(&x[64..])
                    .filter(|(_, w)| !w.is_zero())
                    .map(|(q, w)| (w.clone(), q.clone()))
                    .collect(),
                constant: x[columns.len() - 1].clone(),
            };
            cert.verify()?;
            Ok(CertificateSearch::Found(cert))
        }
        LpOutcome::Infeasible { .. } | LpOutcome::Unbounded => {
            Ok(CertificateSearch::NotFound { witness: find_witness(branch, bound)? })
        }
    }
}

/// Fixes `η` just above the bound and solves for `(u, f₁, f₂)` with all
/// inequalities satisfied. Every `g_k` is affine in those once `η` is fixed.
fn find_witness(branch: Branch, bound: &Rational) -> Result<Option<Witness>> {
    let top = rat(2, 3);
    let eta0 = if *bound < rat(3, 5) {
        rat(3, 5)
    } else if *bound < top {
        (bound + &top) / int(2)
    } else {
        return Ok(None);
    };
    let eta_poly = MultiPoly::constant(eta0.clone());
    let free = [branch.free(), Var::F1, Var::F2];
    // columns: u, v1 = f1 + 1, v2 = f2 + 1, then one slack per row
    let mut rows: Vec<(Vec<Rational>, Rational)> = Vec::new();
    for s in all_signs() {
        let g = branch.restrict(&scaled_probability(s)).substitute(Var::Eta, &eta_poly);
        if g.degree() > 1 {
            return Err(Error::Verification(format!("inequality {} is not affine at fixed eta", signs_label(&s))));
        }
        let mut probe = [0u16; VAR_COUNT];
        let mut coef = Vec::new();
        for &v in &free {
            probe[v as usize] = 1;
            coef.push(g.coefficient(&Monomial(probe)));
            probe[v as usize] = 0;
        }
        // g = c0 + cu u + c1 (v1 - 1) + c2 (v2 - 1) >= 0
        let c0 = g.coefficient(&Monomial([0; VAR_COUNT])) - &coef[1] - &coef[2];
        rows.push((coef, -c0));
    }
    for k in 0..3 {
        let mut coef = vec![int(0); 3];
        coef[k] = int(-1);
        rows.push((coef, int(-2)));
    }
    let n = rows.len();
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for (i, (coef, rhs)) in rows.into_iter().enumerate() {
        let mut row = coef;
        row.extend((0..n).map(|j| if j == i { int(-1) } else { int(0) }));
        a.push(row);
        b.push(rhs);
    }
    let x = match simplex::feasible(&a, &b)? {
        LpOutcome::Optimal { x, .. } => x,
        _ => return Ok(None),
    };
    let fixed = eta0.clone() * int(2);
    let (xibar, zetabar) = match branch {
        Branch::ZetaBarIs2Eta => (x[0].clone(), fixed),
        Branch::XiBarIs2Eta => (fixed, x[0].clone()),
    };
    let w = Witness { eta: eta0, xibar, zetabar, f1: &x[1] - int(1), f2: &x[2] - int(1) };
    if w.min_probability().is_negative() {
        return Err(Error::Verification("witness violates a positivity inequality".into()));
    }
    Ok(Some(w))
}
