//! Numeric flavors shared by behaviors and models.
//!
//! Exact values are arbitrary-precision rationals, always kept in lowest terms
//! with a positive denominator. Float values are binary64 and every comparison
//! on them goes through [`FLOAT_TOL`].

use std::fmt::Debug;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Absolute tolerance used for every float-flavor comparison.
pub const FLOAT_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Exact,
    Float,
}

impl FromStr for Flavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Flavor::Exact),
            "float" => Ok(Flavor::Float),
            other => Err(Error::Parse(format!("unknown flavor {other:?}, expected exact|float"))),
        }
    }
}

/// Field element usable as a probability: either an exact rational or an `f64`.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + 'static
{
    const FLAVOR: Flavor;

    /// Equality: exact for rationals, within [`FLOAT_TOL`] for floats.
    fn approx_eq(&self, other: &Self) -> bool;

    /// Strictly negative beyond tolerance.
    fn is_negative_tol(&self) -> bool;

    fn to_f64(&self) -> f64;

    /// JSON encoding: `"num/den"` strings for rationals, numbers for floats.
    fn to_json(&self) -> serde_json::Value;

    fn from_json(value: &serde_json::Value) -> Result<Self>;
}

impl Scalar for Rational {
    const FLAVOR: Flavor = Flavor::Exact;

    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }

    fn is_negative_tol(&self) -> bool {
        self.is_negative()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(format_rational(self))
    }

    fn from_json(value: &serde_json::Value) -> Result<Self> {
        match value {
            serde_json::Value::String(s) => parse_rational(s),
            serde_json::Value::Number(n) if n.is_i64() || n.is_u64() => parse_rational(&n.to_string()),
            other => Err(Error::Parse(format!("exact values must be \"num/den\" strings or integers, found {other}"))),
        }
    }
}

impl Scalar for f64 {
    const FLAVOR: Flavor = Flavor::Float;

    fn approx_eq(&self, other: &Self) -> bool {
        (self - other).abs() <= FLOAT_TOL
    }

    fn is_negative_tol(&self) -> bool {
        *self < -FLOAT_TOL
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Number::from_f64(*self).map(serde_json::Value::Number).unwrap_or(serde_json::Value::Null)
    }

    fn from_json(value: &serde_json::Value) -> Result<Self> {
        match value {
            serde_json::Value::Number(n) => {
                n.as_f64().ok_or_else(|| Error::Parse(format!("number {n} is not representable")))
            }
            serde_json::Value::String(s) => Ok(Scalar::to_f64(&parse_rational(s)?)),
            other => Err(Error::Parse(format!("expected a number, found {other}"))),
        }
    }
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"`; whitespace around the parts is ignored.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("malformed rational {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Best rational approximation of `x` with denominator at most `max_den`,
/// from the continued-fraction convergents and semiconvergents.
pub fn rationalize(x: f64, max_den: u64) -> Option<Rational> {
    if !x.is_finite() || max_den == 0 {
        return None;
    }
    let negative = x < 0.0;
    let mut rest = x.abs();
    // convergents h/k
    let (mut h_prev, mut h) = (0u128, 1u128);
    let (mut k_prev, mut k) = (1u128, 0u128);
    let max_den = max_den as u128;
    let mut best: Option<(u128, u128)> = None;
    for _ in 0..64 {
        let a = rest.floor();
        if a > 1e18 {
            break;
        }
        let a = a as u128;
        let h_next = a * h + h_prev;
        let k_next = a * k + k_prev;
        if k_next > max_den {
            // largest admissible semiconvergent
            let t = (max_den - k_prev) / k;
            if t > 0 {
                let hs = t * h + h_prev;
                let ks = t * k + k_prev;
                let cand = (hs, ks);
                let err = |(p, q): (u128, u128)| (p as f64 / q as f64 - x.abs()).abs();
                if best.is_none_or(|b| err(cand) < err(b)) {
                    best = Some(cand);
                }
            }
            break;
        }
        h_prev = h;
        h = h_next;
        k_prev = k;
        k = k_next;
        best = Some((h, k));
        let frac = rest - a as f64;
        if frac.abs() < 1e-15 {
            break;
        }
        rest = 1.0 / frac;
    }
    best.map(|(p, q)| {
        let q = Rational::new(BigInt::from(p), BigInt::from(q));
        if negative {
            -q
        } else {
            q
        }
    })
}

/// Multiplies a rational vector by the smallest positive scalar that makes it a
/// primitive integer vector (coprime integer entries). Zero vectors are returned unchanged.
pub fn primitive_integer(v: &[Rational]) -> Vec<Rational> {
    let lcm = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = v.iter().map(|q| (q * &lcm).to_integer()).collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if gcd.is_zero() {
        return v.to_vec();
    }
    ints.into_iter().map(|x| Rational::from_integer(x / &gcd)).collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}
