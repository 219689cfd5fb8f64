//! Scalar fields used throughout the crate.
//!
//! All symbolic work happens over [`ExactScalar`], an arbitrary-precision
//! rational stored in lowest terms. Floating point (`f64`, `Complex<f64>`)
//! enters only where eigenvalues or transcendental functions are involved.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always normalized with a positive denominator.
pub type ExactScalar = BigRational;

/// Complex number with exact rational parts.
pub type ExactComplex = Complex<ExactScalar>;

pub fn int(n: i64) -> ExactScalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> ExactScalar {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn checked_div(a: &ExactScalar, b: &ExactScalar) -> Result<ExactScalar> {
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(a / b)
}

fn ln_bigint(n: &BigInt) -> f64 {
    if n.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = n.bits();
    if bits <= 1000 {
        return ToPrimitive::to_f64(n).map_or(f64::NAN, |v| v.abs().ln());
    }
    let shift = bits - 64;
    let top: BigInt = Signed::abs(n) >> shift;
    ToPrimitive::to_f64(&top).map_or(f64::NAN, f64::ln) + shift as f64 * std::f64::consts::LN_2
}

/// Converts a finite double to the rational it denotes exactly.
pub fn exact_from_f64(x: f64) -> Result<ExactScalar> {
    BigRational::from_float(x).ok_or_else(|| Error::InvalidInput(format!("non-finite value {x}")))
}

/// Formats as `"p/q"`, or `"p"` when the denominator is one.
pub fn format_exact(q: &ExactScalar) -> String {
    q.to_string()
}

/// Parses `"p/q"`, `"p"`, or a decimal literal such as `"-0.125"` or `"1.5e-3"`,
/// all exactly.
pub fn parse_exact(s: &str) -> Result<ExactScalar> {
    let t = s.trim();
    let bad = || Error::ParseScalar(s.to_string());
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::DivisionByZero);
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all_digits = format!("{whole}{frac}");
    let numer: BigInt = if all_digits.is_empty() {
        BigInt::zero()
    } else {
        all_digits.parse().map_err(|_| bad())?
    };
    let scale = exponent - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

/// A coefficient type for finite sequences and convolutions.
///
/// Implemented for exact and floating reals and their complex extensions.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    fn from_exact(q: &ExactScalar) -> Self;
    fn conj(&self) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_exact(&BigRational::from_integer(BigInt::from(n)))
    }
}

impl Scalar for ExactScalar {
    fn from_exact(q: &ExactScalar) -> Self {
        q.clone()
    }
    fn conj(&self) -> Self {
        self.clone()
    }
}

impl Scalar for f64 {
    fn from_exact(q: &ExactScalar) -> Self {
        ToPrimitive::to_f64(q).unwrap_or(f64::NAN)
    }
    fn conj(&self) -> Self {
        *self
    }
    fn from_int(n: i64) -> Self {
        n as f64
    }
}

impl Scalar for ExactComplex {
    fn from_exact(q: &ExactScalar) -> Self {
        Complex::new(q.clone(), ExactScalar::zero())
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
}

impl Scalar for Complex<f64> {
    fn from_exact(q: &ExactScalar) -> Self {
        Complex::new(f64::from_exact(q), 0.0)
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn from_int(n: i64) -> Self {
        Complex::new(n as f64, 0.0)
    }
}

/// Real ordered fields: the value types a moment functional may carry.
pub trait RealScalar: Scalar + PartialOrd + Div<Output = Self> + Lift<Self> {
    /// True when arithmetic is exact, so sign decisions are certain.
    const EXACT: bool;

    fn to_f64(&self) -> f64;
    fn abs(&self) -> Self;
    /// `ln|self|`, finite even when `self` overflows a double.
    fn ln_abs(&self) -> f64;
    /// Exact-or-nearest embedding of a double.
    fn from_f64(x: f64) -> Self;
}

impl RealScalar for ExactScalar {
    const EXACT: bool = true;

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn ln_abs(&self) -> f64 {
        ln_bigint(self.numer()) - ln_bigint(self.denom())
    }
    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).unwrap_or_else(Zero::zero)
    }
}

impl RealScalar for f64 {
    const EXACT: bool = false;

    fn to_f64(&self) -> f64 {
        *self
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn ln_abs(&self) -> f64 {
        f64::abs(*self).ln()
    }
    fn from_f64(x: f64) -> Self {
        x
    }
}

/// Embedding of a real field `R` into a coefficient type, used when a real
/// functional is paired with (possibly complex) sequences.
pub trait Lift<R> {
    fn lift(r: &R) -> Self;
}

impl<T: Scalar> Lift<ExactScalar> for T {
    fn lift(r: &ExactScalar) -> Self {
        T::from_exact(r)
    }
}

impl Lift<f64> for f64 {
    fn lift(r: &f64) -> Self {
        *r
    }
}

impl Lift<f64> for Complex<f64> {
    fn lift(r: &f64) -> Self {
        Complex::new(*r, 0.0)
    }
}

/// Serde adapters that write exact scalars as `"p/q"` strings.
pub mod serde_exact {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{format_exact, parse_exact, ExactScalar};

    pub fn serialize<S: Serializer>(v: &ExactScalar, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_exact(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<ExactScalar, D::Error> {
        let s = String::deserialize(d)?;
        parse_exact(&s).map_err(D::Error::custom)
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[ExactScalar], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for q in v {
                seq.serialize_element(&format_exact(q))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<ExactScalar>, D::Error> {
            let raw = Vec::<String>::deserialize(d)?;
            raw.iter()
                .map(|s| parse_exact(s).map_err(D::Error::custom))
                .collect()
        }
    }
}
