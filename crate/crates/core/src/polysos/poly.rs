use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, Rational};

/// Variables of the bilocal model; `XiBar = 1 - ξ` and `ZetaBar = 1 + ζ` are
/// independent symbols until substituted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Eta,
    Xi,
    Zeta,
    F1,
    F2,
    XiBar,
    ZetaBar,
}

pub const VAR_COUNT: usize = 7;

impl Var {
    pub const ALL: [Var; VAR_COUNT] = [Var::Eta, Var::Xi, Var::Zeta, Var::F1, Var::F2, Var::XiBar, Var::ZetaBar];

    pub fn name(self) -> &'static str {
        match self {
            Var::Eta => "eta",
            Var::Xi => "xi",
            Var::Zeta => "zeta",
            Var::F1 => "f1",
            Var::F2 => "f2",
            Var::XiBar => "xibar",
            Var::ZetaBar => "zetabar",
        }
    }
}

impl FromStr for Var {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Var::ALL.into_iter().find(|v| v.name() == s).ok_or_else(|| Error::Domain(format!("unknown variable {s:?}")))
    }
}

/// Exponent vector, ordered graded-lexicographically (higher degree first is
/// the *greater* monomial).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub [u16; VAR_COUNT]);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    fn times(&self, other: &Monomial) -> Monomial {
        Monomial(std::array::from_fn(|k| self.0[k] + other.0[k]))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial with rational coefficients; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = MultiPoly::zero();
        p.add_term(Monomial::default(), c);
        p
    }

    pub fn int(c: i64) -> Self {
        MultiPoly::constant(Rational::from_integer(c.into()))
    }

    pub fn var(v: Var) -> Self {
        let mut m = Monomial::default();
        m.0[v as usize] = 1;
        let mut p = MultiPoly::zero();
        p.add_term(m, Rational::one());
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut p = MultiPoly::zero();
        for (m, a) in &self.terms {
            p.add_term(*m, a * c);
        }
        p
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(MultiPoly::int(1), |acc, _| &acc * self)
    }

    /// Replaces every occurrence of `v` by `value`.
    pub fn substitute(&self, v: Var, value: &MultiPoly) -> Self {
        let mut out = MultiPoly::zero();
        let mut powers: Vec<MultiPoly> = vec![MultiPoly::int(1)];
        for (m, c) in &self.terms {
            let e = m.0[v as usize] as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap() * value;
                powers.push(next);
            }
            let mut rest = *m;
            rest.0[v as usize] = 0;
            let mut base = MultiPoly::zero();
            base.add_term(rest, c.clone());
            out = out + &base * &powers[e];
        }
        out
    }

    /// Substitution by variable name; unknown names are a domain error.
    pub fn substitute_named(&self, name: &str, value: &MultiPoly) -> Result<Self> {
        Ok(self.substitute(name.parse()?, value))
    }

    /// Value at a full assignment indexed by [`Var`].
    pub fn eval(&self, point: &[Rational; VAR_COUNT]) -> Rational {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (k, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t *= &point[k];
                }
            }
            total += t;
        }
        total
    }

    /// The constant value, if the polynomial has no variable terms.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::default()).cloned(),
            _ => None,
        }
    }

    pub fn uses(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.0[v as usize] > 0)
    }
}

impl From<Var> for MultiPoly {
    fn from(v: Var) -> Self {
        MultiPoly::var(v)
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(mut self, rhs: MultiPoly) -> MultiPoly {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl Add<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.clone() + rhs.clone()
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        self + (-rhs)
    }
}

impl Sub<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.clone() - rhs.clone()
    }
}

impl Mul<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.times(mb), ca * cb);
            }
        }
        out
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

impl fmt::Display for MultiPoly {
    /// Terms from the largest monomial down, e.g. `2*eta^2 - xi*zeta + 1/2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            let factors: Vec<String> = Var::ALL
                .iter()
                .zip(m.0)
                .filter(|(_, e)| *e > 0)
                .map(|(v, e)| if e == 1 { v.name().to_string() } else { format!("{}^{e}", v.name()) })
                .collect();
            if factors.is_empty() {
                write!(f, "{}", format_rational(&a))?;
            } else {
                if !a.is_one() {
                    write!(f, "{}*", format_rational(&a))?;
                }
                f.write_str(&factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn v(x: Var) -> MultiPoly {
        MultiPoly::var(x)
    }

    #[test]
    fn ring_identity() {
        let p = (MultiPoly::int(1) - v(Var::Xi)) * (MultiPoly::int(1) + v(Var::Zeta));
        let q = MultiPoly::int(1) + v(Var::Zeta) - v(Var::Xi) - &v(Var::Xi) * &v(Var::Zeta);
        assert_eq!(p, q);
    }

    #[test]
    fn display_order() {
        let p = (MultiPoly::int(1) - v(Var::Xi)) * (MultiPoly::int(1) + v(Var::Zeta));
        // grlex: xi*zeta, then xi (earlier variable) above zeta, then the constant
        assert_eq!(p.to_string(), "-xi*zeta - xi + zeta + 1");
    }

    #[test]
    fn substitution() {
        let p = MultiPoly::int(1) + v(Var::Zeta);
        let two_eta_minus_one = v(Var::Eta).scale(&rat(2, 1)) - MultiPoly::int(1);
        assert_eq!(p.substitute(Var::Zeta, &two_eta_minus_one), v(Var::Eta).scale(&rat(2, 1)));
        assert!(p.substitute_named("omega", &MultiPoly::zero()).is_err());
    }

    #[test]
    fn root_of_square() {
        let m = MultiPoly::int(2) - v(Var::Eta).scale(&rat(3, 1));
        let p1 = m.pow(2).scale(&rat(1, 6));
        let at = p1.substitute(Var::Eta, &MultiPoly::constant(rat(2, 3)));
        assert!(at.is_zero());
        assert_eq!(p1.degree(), 2);
    }
}
