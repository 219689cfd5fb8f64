//! Truncated formal power series in one variable `λ`.
//!
//! A [`TruncatedSeries`] of order `N` stores the coefficients of
//! `λ^0, ..., λ^N`; every operation is exact modulo `λ^{N+1}`. The
//! coefficient ring is generic so the same `exp`/`log` recurrences serve
//! both rational series and series whose coefficients are polynomials in
//! a second variable `x` (see [`Poly`]).

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{ExactScalar, Scalar};

/// Coefficient ring of a truncated series: a commutative ring that is also
/// a vector space over the rationals.
pub trait SeriesCoeff:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
    fn scale(&self, q: &ExactScalar) -> Self;
}

impl SeriesCoeff for ExactScalar {
    fn scale(&self, q: &ExactScalar) -> Self {
        self * q
    }
}

/// Dense polynomial in `x` with exact coefficients; index `k` holds `x^k`.
/// Trailing zeros are trimmed, so the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    coeffs: Vec<ExactScalar>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<ExactScalar>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: ExactScalar) -> Self {
        Poly::new(vec![c])
    }

    /// `c·x^k`
    pub fn term(c: ExactScalar, k: usize) -> Self {
        let mut coeffs = vec![ExactScalar::zero(); k + 1];
        coeffs[k] = c;
        Poly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[ExactScalar] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<ExactScalar> {
        self.coeffs
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> ExactScalar {
        self.coeffs.get(k).cloned().unwrap_or_else(ExactScalar::zero)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + f64::from_exact(c))
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        let (mut long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self.coeffs, rhs.coeffs)
        } else {
            (rhs.coeffs, self.coeffs)
        };
        for (a, b) in long.iter_mut().zip(short) {
            *a += b;
        }
        Poly::new(long)
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        self + (-rhs)
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Poly::default();
        }
        let mut out = vec![ExactScalar::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Zero for Poly {
    fn zero() -> Self {
        Poly::default()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for Poly {
    fn one() -> Self {
        Poly::constant(ExactScalar::one())
    }
}

impl SeriesCoeff for Poly {
    fn scale(&self, q: &ExactScalar) -> Self {
        Poly::new(self.coeffs.iter().map(|c| c * q).collect())
    }
}

/// `Σ_{k≤N} c_k λ^k` modulo `λ^{N+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<C = ExactScalar> {
    coeffs: Vec<C>,
}

impl<C: SeriesCoeff> TruncatedSeries<C> {
    /// Builds a series of the given order; missing coefficients are zero and
    /// coefficients beyond `order` are discarded.
    pub fn new(order: usize, mut coeffs: Vec<C>) -> Self {
        coeffs.resize(order + 1, C::zero());
        TruncatedSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(order, Vec::new())
    }

    pub fn one(order: usize) -> Self {
        Self::new(order, vec![C::one()])
    }

    /// `c·λ^k`, or zero when `k > order`.
    pub fn monomial(order: usize, k: usize, c: C) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &C {
        &self.coeffs[k]
    }

    pub fn map<D: SeriesCoeff>(&self, f: impl Fn(&C) -> D) -> TruncatedSeries<D> {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// Re-truncates (or zero-extends) to a new order.
    pub fn with_order(&self, order: usize) -> Self {
        Self::new(order, self.coeffs.clone())
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(TruncatedSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(TruncatedSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        })
    }

    pub fn scale(&self, q: &ExactScalar) -> Self {
        self.map(|c| c.scale(q))
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let n = self.order();
        let mut out = vec![C::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    /// `exp(a)` from the recurrence `n·b_n = Σ_{k=1}^{n} k·a_k·b_{n-k}`,
    /// i.e. `(exp a)' = a'·exp a`.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let n = self.order();
        let mut b = Vec::with_capacity(n + 1);
        b.push(C::one());
        for m in 1..=n {
            let mut acc = C::zero();
            for k in 1..=m {
                if self.coeffs[k].is_zero() {
                    continue;
                }
                acc = acc
                    + (self.coeffs[k].clone() * b[m - k].clone()).scale(&ExactScalar::from_integer(k.into()));
            }
            b.push(acc.scale(&ExactScalar::new(1.into(), m.into())));
        }
        Ok(TruncatedSeries { coeffs: b })
    }

    /// `log(a)` from `(log a)' = a'/a`, i.e.
    /// `n·c_n = n·a_n − Σ_{k=1}^{n-1} k·c_k·a_{n-k}`.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::ConstantTermNotOne);
        }
        let n = self.order();
        let mut c: Vec<C> = Vec::with_capacity(n + 1);
        c.push(C::zero());
        for m in 1..=n {
            let mut acc = self.coeffs[m].scale(&ExactScalar::from_integer(m.into()));
            for k in 1..m {
                if c[k].is_zero() {
                    continue;
                }
                acc = acc
                    - (c[k].clone() * self.coeffs[m - k].clone()).scale(&ExactScalar::from_integer(k.into()));
            }
            c.push(acc.scale(&ExactScalar::new(1.into(), m.into())));
        }
        Ok(TruncatedSeries { coeffs: c })
    }
}

impl TruncatedSeries<ExactScalar> {
    pub fn from_exact(order: usize, coeffs: Vec<ExactScalar>) -> Self {
        Self::new(order, coeffs)
    }

    /// Numeric evaluation of the truncated polynomial at a complex point.
    pub fn eval_complex(&self, z: Complex<f64>) -> Complex<f64> {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::new(0.0, 0.0), |acc, c| acc * z + f64::from_exact(c))
    }
}

/// `a·b` for two series of equal order.
pub fn series_mul<C: SeriesCoeff>(a: &TruncatedSeries<C>, b: &TruncatedSeries<C>) -> Result<TruncatedSeries<C>> {
    a.mul(b)
}

pub fn series_exp<C: SeriesCoeff>(a: &TruncatedSeries<C>) -> Result<TruncatedSeries<C>> {
    a.exp()
}

pub fn series_log<C: SeriesCoeff>(a: &TruncatedSeries<C>) -> Result<TruncatedSeries<C>> {
    a.log()
}

/// Wire form of an exact series: its coefficient strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SeriesDoc(#[serde(with = "crate::scalar::serde_exact::vec")] pub Vec<ExactScalar>);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn s(order: usize, c: &[(i64, i64)]) -> TruncatedSeries {
        TruncatedSeries::new(order, c.iter().map(|&(p, q)| ratio(p, q)).collect())
    }

    #[test]
    fn binomial_square() {
        let a = s(2, &[(1, 1), (1, 1)]);
        assert_eq!(a.mul(&a).unwrap(), s(2, &[(1, 1), (2, 1), (1, 1)]));
    }

    #[test]
    fn multiplicative_identity() {
        let a = s(4, &[(3, 2), (-1, 1), (0, 1), (7, 5)]);
        assert_eq!(a.mul(&TruncatedSeries::one(4)).unwrap(), a);
    }

    #[test]
    fn geometric_times_one_minus_lambda() {
        let geo = TruncatedSeries::new(5, vec![int(1); 6]);
        let lin = s(5, &[(1, 1), (-1, 1)]);
        assert_eq!(geo.mul(&lin).unwrap(), TruncatedSeries::one(5));
    }

    #[test]
    fn order_mismatch() {
        let a = TruncatedSeries::<ExactScalar>::one(2);
        let b = TruncatedSeries::<ExactScalar>::one(3);
        assert_eq!(a.mul(&b), Err(Error::OrderMismatch { left: 2, right: 3 }));
    }

    #[test]
    fn exp_of_lambda() {
        let e = s(3, &[(0, 1), (1, 1)]).exp().unwrap();
        assert_eq!(e, s(3, &[(1, 1), (1, 1), (1, 2), (1, 6)]));
        assert_eq!(TruncatedSeries::<ExactScalar>::zero(4).exp().unwrap(), TruncatedSeries::one(4));
    }

    #[test]
    fn exp_rejects_constant_term() {
        assert_eq!(TruncatedSeries::<ExactScalar>::one(3).exp(), Err(Error::NonzeroConstantTerm));
    }

    #[test]
    fn mercator_series() {
        let l = s(4, &[(1, 1), (1, 1)]).log().unwrap();
        assert_eq!(l, s(4, &[(0, 1), (1, 1), (-1, 2), (1, 3), (-1, 4)]));
        assert_eq!(TruncatedSeries::<ExactScalar>::one(4).log().unwrap(), TruncatedSeries::zero(4));
    }

    #[test]
    fn log_rejects_constant_term() {
        assert_eq!(s(3, &[(2, 1), (1, 1)]).log(), Err(Error::ConstantTermNotOne));
        assert_eq!(s(3, &[(0, 1), (1, 1)]).log(), Err(Error::ConstantTermNotOne));
    }

    #[test]
    fn exp_log_round_trips() {
        let one_plus = s(6, &[(1, 1), (1, 1)]);
        assert_eq!(one_plus.log().unwrap().exp().unwrap(), one_plus);
        let a = s(5, &[(0, 1), (1, 1), (-1, 1)]);
        assert_eq!(a.exp().unwrap().log().unwrap(), a);
    }

    #[test]
    fn poly_coefficients_follow_the_same_recurrence() {
        // exp(x·λ) = Σ x^n λ^n / n!
        let xl = TruncatedSeries::<Poly>::monomial(4, 1, Poly::term(int(1), 1));
        let e = xl.exp().unwrap();
        assert_eq!(e.coeff(3), &Poly::term(ratio(1, 6), 3));
        assert_eq!(e.coeff(0), &Poly::one());
    }
}
