//! Entanglement swapping with two singlets and inefficient detectors for the
//! outer parties.
//!
//! Qubit order is Alice, Bob's two qubits, Charlie. The singlets sit on
//! (Alice, Bob₁) and (Bob₂, Charlie). Alice and Charlie measure
//! `(σ_z ± σ_x)/√2`; on a missed detection Alice outputs `(-1)^{x+1}` and
//! Charlie outputs `+1`. Bob performs a Bell-state measurement read as two bits.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;

/// Agreement required between the simulation and the closed forms.
pub const TABLE_TOL: f64 = 1e-12;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn mat(n: usize, entries: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_row_iterator(n, n, entries.iter().map(|&x| c(x)))
}

fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

fn projector(v: &[f64]) -> ComplexMatrix {
    let col = ComplexMatrix::from_iterator(v.len(), 1, v.iter().map(|&x| c(x)));
    &col * col.adjoint()
}

fn is_hermitian(m: &ComplexMatrix) -> bool {
    (m - m.adjoint()).iter().all(|z| z.norm() <= TABLE_TOL)
}

fn check_observable(name: &str, m: &ComplexMatrix) -> Result<()> {
    if !is_hermitian(m) {
        return Err(Error::Verification(format!("{name} is not Hermitian")));
    }
    let eig = m.clone().symmetric_eigenvalues();
    if eig.iter().any(|&e| !(-1.0 - TABLE_TOL..=1.0 + TABLE_TOL).contains(&e)) {
        return Err(Error::Verification(format!("{name} has an eigenvalue outside [-1, 1]")));
    }
    Ok(())
}

fn check_projector(name: &str, p: &ComplexMatrix) -> Result<()> {
    if !is_hermitian(p) || (p * p - p).iter().any(|z| z.norm() > TABLE_TOL) {
        return Err(Error::Verification(format!("{name} is not an orthogonal projector")));
    }
    Ok(())
}

/// Measurement operators at detector efficiency `eta`.
#[derive(Clone, Debug)]
pub struct EffectiveObservables {
    pub eta: f64,
    /// `A₀, A₁` on Alice's qubit.
    pub a: [ComplexMatrix; 2],
    /// `B₀, B₁` on Bob's two qubits.
    pub b: [ComplexMatrix; 2],
    /// `C₀, C₁` on Charlie's qubit.
    pub c: [ComplexMatrix; 2],
    /// Bell projectors `B₊₊, B₋₊, B₊₋, B₋₋`.
    pub bell: [ComplexMatrix; 4],
}

pub fn build_operators(eta: f64) -> Result<EffectiveObservables> {
    if !(0.0..=1.0).contains(&eta) {
        return domain(format!("efficiency {eta} is outside [0, 1]"));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let ideal = [mat(2, &[s, s, s, -s]), mat(2, &[s, -s, -s, -s])];
    let id2 = identity(2);
    let miss = 1.0 - eta;
    let a = [&ideal[0] * c(eta) - &id2 * c(miss), &ideal[1] * c(eta) + &id2 * c(miss)];
    let cz = [&ideal[0] * c(eta) + &id2 * c(miss), &ideal[1] * c(eta) + &id2 * c(miss)];

    let phi_plus = projector(&[s, 0.0, 0.0, s]);
    let phi_minus = projector(&[s, 0.0, 0.0, -s]);
    let psi_plus = projector(&[0.0, s, s, 0.0]);
    let psi_minus = projector(&[0.0, s, -s, 0.0]);
    let bell = [phi_plus, phi_minus, psi_plus, psi_minus];
    for (name, p) in ["B++", "B-+", "B+-", "B--"].iter().zip(&bell) {
        check_projector(name, p)?;
    }
    let [pp, mp, pm, mm] = &bell;
    let b0 = pp + pm - mp - mm;
    let b1 = pp - pm + mp - mm;

    let obs = EffectiveObservables { eta, a, b: [b0, b1], c: cz, bell: bell.clone() };
    for (x, m) in obs.a.iter().enumerate() {
        check_observable(&format!("A{x}"), m)?;
    }
    for (y, m) in obs.b.iter().enumerate() {
        check_observable(&format!("B{y}"), m)?;
    }
    for (z, m) in obs.c.iter().enumerate() {
        check_observable(&format!("C{z}"), m)?;
    }
    Ok(obs)
}

/// `|Ψ⁻⟩⟨Ψ⁻| ⊗ |Ψ⁻⟩⟨Ψ⁻|` on the four qubits.
pub fn two_singlets() -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let singlet = projector(&[0.0, s, -s, 0.0]);
    singlet.kronecker(&singlet)
}

/// Product of the selected operators in index order; bit `k` of `mask` selects the `k`th.
fn monomial(ops: &[ComplexMatrix; 2], mask: u8) -> ComplexMatrix {
    let n = ops[0].nrows();
    (0..2).filter(|k| mask >> k & 1 == 1).fold(identity(n), |acc, k| acc * &ops[k])
}

impl EffectiveObservables {
    /// `⟨A-monomial ⊗ B-monomial ⊗ C-monomial⟩` where each mask selects a product
    /// of the party's two observables (`0b11` is `X₀X₁`).
    pub fn correlator(&self, a_mask: u8, b_mask: u8, c_mask: u8) -> Result<f64> {
        if a_mask > 3 || b_mask > 3 || c_mask > 3 {
            return domain("monomial masks range over 0..=3");
        }
        let op = monomial(&self.a, a_mask).kronecker(&monomial(&self.b, b_mask)).kronecker(&monomial(&self.c, c_mask));
        let value = (two_singlets() * op).trace();
        if value.im.abs() >= TABLE_TOL {
            return Err(Error::Verification(format!(
                "correlator ({a_mask}, {b_mask}, {c_mask}) has imaginary part {}",
                value.im
            )));
        }
        Ok(value.re)
    }
}

/// Closed-form correlator for at most one A and one C factor:
/// `a, c ∈ {0: 1, 1: X₀, 2: X₁}` and `b ∈ {0: 1, 1: B₀, 2: B₁, 3: B₀B₁}`.
pub fn table_value(a: usize, b: usize, c: usize, eta: f64) -> f64 {
    let miss = 1.0 - eta;
    let half = eta * eta / 2.0;
    match b {
        0 => {
            let fa = [1.0, -miss, miss][a];
            let fc = [1.0, miss, miss][c];
            fa * fc
        }
        1 => match (a, c) {
            (1, 1) | (2, 2) => half,
            (1, 2) | (2, 1) => -half,
            _ => 0.0,
        },
        2 if a > 0 && c > 0 => half,
        _ => 0.0,
    }
}

/// Closed form as text, for reports.
pub fn table_formula(a: usize, b: usize, c: usize) -> &'static str {
    match (b, a, c) {
        (0, 0, 0) => "1",
        (0, 0, _) => "1 - eta",
        (0, 1, 0) => "eta - 1",
        (0, 2, 0) => "1 - eta",
        (0, 1, _) => "-(eta - 1)^2",
        (0, 2, _) => "(eta - 1)^2",
        (1, 1, 1) | (1, 2, 2) => "eta^2/2",
        (1, 1, 2) | (1, 2, 1) => "-eta^2/2",
        (2, a, c) if a > 0 && c > 0 => "eta^2/2",
        _ => "0",
    }
}

pub fn entry_label(a: usize, b: usize, c: usize) -> String {
    let s = [["", "A0", "A1"][a], ["", "B0", "B1", "B0B1"][b], ["", "C0", "C1"][c]].concat();
    if s.is_empty() {
        "1".to_string()
    } else {
        s
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TableEntry {
    pub label: String,
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub value: f64,
    pub formula: &'static str,
    pub expected: f64,
    pub pass: bool,
}

/// Every correlator with at most one A and one C factor, with its closed form.
#[derive(Clone, Debug, Serialize)]
pub struct QuantumTable {
    pub eta: f64,
    pub entries: Vec<TableEntry>,
}

impl QuantumTable {
    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        self.entries[b * 9 + a * 3 + c].value
    }

    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    /// `P(α, β₀, β₁, γ | x, z)` for settings `2x + z`; outcome index
    /// `8α + 4β₀ + 2β₁ + γ` with bit 1 meaning `-1`.
    pub fn probabilities(&self) -> [[f64; 16]; 4] {
        let mut out = [[0.0; 16]; 4];
        for (setting, block) in out.iter_mut().enumerate() {
            let (x, z) = (setting >> 1, setting & 1);
            for (o, p) in block.iter_mut().enumerate() {
                let sign = |bit: usize| if o >> bit & 1 == 1 { -1.0 } else { 1.0 };
                let (sa, s0, s1, sc) = (sign(3), sign(2), sign(1), sign(0));
                let mut total = 0.0;
                for ia in 0..2 {
                    for b in 0..4 {
                        for ic in 0..2 {
                            let a = if ia == 1 { x + 1 } else { 0 };
                            let cc = if ic == 1 { z + 1 } else { 0 };
                            let mut w = if ia == 1 { sa } else { 1.0 } * if ic == 1 { sc } else { 1.0 };
                            if b & 1 == 1 {
                                w *= s0;
                            }
                            if b & 2 == 2 {
                                w *= s1;
                            }
                            total += w * self.get(a, b, cc);
                        }
                    }
                }
                *p = total / 16.0;
            }
        }
        out
    }
}

/// Simulated table with per-entry comparison; mismatches are reported, not raised.
pub fn compare_table(eta: f64) -> Result<QuantumTable> {
    let obs = build_operators(eta)?;
    let mut entries = Vec::with_capacity(36);
    for b in 0..4 {
        for a in 0..3 {
            for c in 0..3 {
                let mask = |k: usize| if k == 0 { 0 } else { 1u8 << (k - 1) };
                let b_mask = b as u8;
                let value = obs.correlator(mask(a), b_mask, mask(c))?;
                let expected = table_value(a, b, c, eta);
                entries.push(TableEntry {
                    label: entry_label(a, b, c),
                    a,
                    b,
                    c,
                    value,
                    formula: table_formula(a, b, c),
                    expected,
                    pass: (value - expected).abs() <= TABLE_TOL,
                });
            }
        }
    }
    Ok(QuantumTable { eta, entries })
}

/// As [`compare_table`], failing on the first entry off its closed form.
pub fn full_table(eta: f64) -> Result<QuantumTable> {
    let table = compare_table(eta)?;
    if let Some(e) = table.entries.iter().find(|e| !e.pass) {
        return Err(Error::Verification(format!(
            "<{}> = {} at eta = {eta}, expected {} = {}",
            e.label, e.value, e.formula, e.expected
        )));
    }
    Ok(table)
}
