//! The algebra `(l_fin, ∗_P)` of finite sequences.
//!
//! [`conv_general`] works for any family through its structure constants;
//! [`conv_cauchy`] and [`conv_newton`] are closed forms for the monomial and
//! falling-factorial families and are tested against the general product.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::family::PolynomialFamily;
use crate::functional::MomentFunctional;
use crate::scalar::{factorial, ExactScalar, Lift, RealScalar, Scalar};

/// `(f_0, ..., f_n, 0, 0, ...)` with trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteSequence<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> FiniteSequence<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        FiniteSequence { coeffs }
    }

    pub fn zero() -> Self {
        FiniteSequence { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Highest nonzero index + 1.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn get(&self, n: usize) -> T {
        self.coeffs.get(n).cloned().unwrap_or_else(T::zero)
    }

    pub fn conj(&self) -> Self {
        FiniteSequence {
            coeffs: self.coeffs.iter().map(Scalar::conj).collect(),
        }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> FiniteSequence<U> {
        FiniteSequence::new(self.coeffs.iter().map(f).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.len().max(other.len());
        FiniteSequence::new((0..n).map(|i| self.get(i) + other.get(i)).collect())
    }

    pub fn scale(&self, c: &T) -> Self {
        FiniteSequence::new(self.coeffs.iter().map(|x| x.clone() * c.clone()).collect())
    }
}

/// The unit vector `δ_n`.
pub fn delta<T: Scalar>(n: usize) -> FiniteSequence<T> {
    let mut coeffs = vec![T::zero(); n + 1];
    coeffs[n] = T::one();
    FiniteSequence { coeffs }
}

/// `(f ∗_P g)_n = Σ_{j,k} f_j g_k (P_jP_k, P_n)`.
pub fn conv_general<T: Scalar>(
    f: &FiniteSequence<T>,
    g: &FiniteSequence<T>,
    fam: &PolynomialFamily,
) -> Result<FiniteSequence<T>> {
    let (Some(df), Some(dg)) = (f.degree(), g.degree()) else {
        return Ok(FiniteSequence::zero());
    };
    if df + dg > fam.order() {
        return Err(Error::TruncationExceeded {
            needed: df + dg,
            available: fam.order(),
        });
    }
    let mut out = vec![T::zero(); df + dg + 1];
    for (j, fj) in f.coeffs.iter().enumerate() {
        if fj.is_zero() {
            continue;
        }
        for (k, gk) in g.coeffs.iter().enumerate() {
            if gk.is_zero() {
                continue;
            }
            let weight = fj.clone() * gk.clone();
            if let Some(ints) = fam.structure_constants_int(j, k)? {
                for (n, &c) in ints.iter().enumerate() {
                    if c != 0 {
                        out[n] = out[n].clone() + weight.clone() * T::from_int(c);
                    }
                }
                continue;
            }
            for (n, c) in fam.structure_constants(j, k)?.iter().enumerate() {
                if !c.is_zero() {
                    out[n] = out[n].clone() + weight.clone() * T::from_exact(c);
                }
            }
        }
    }
    Ok(FiniteSequence::new(out))
}

/// Cauchy product `(f ∗ g)_n = Σ_{i+j=n} f_i g_j`.
pub fn conv_cauchy<T: Scalar>(f: &FiniteSequence<T>, g: &FiniteSequence<T>) -> FiniteSequence<T> {
    if f.is_empty() || g.is_empty() {
        return FiniteSequence::zero();
    }
    let mut out = vec![T::zero(); f.len() + g.len() - 1];
    for (i, fi) in f.coeffs.iter().enumerate() {
        if fi.is_zero() {
            continue;
        }
        for (j, gj) in g.coeffs.iter().enumerate() {
            out[i + j] = out[i + j].clone() + fi.clone() * gj.clone();
        }
    }
    FiniteSequence::new(out)
}

/// Falling-factorial product
/// `(f ⋆ g)_n = Σ_{i+j+k=n} (i+j)!(j+k)!/(i!j!k!) · f_{i+j} g_{j+k}`.
pub fn conv_newton<T: Scalar>(f: &FiniteSequence<T>, g: &FiniteSequence<T>) -> FiniteSequence<T> {
    let (Some(df), Some(dg)) = (f.degree(), g.degree()) else {
        return FiniteSequence::zero();
    };
    let mut out = vec![T::zero(); df + dg + 1];
    for (a, fa) in f.coeffs.iter().enumerate() {
        if fa.is_zero() {
            continue;
        }
        for (b, gb) in g.coeffs.iter().enumerate() {
            if gb.is_zero() {
                continue;
            }
            let weight = fa.clone() * gb.clone();
            // a = i+j, b = j+k, n = a+b−j; the coefficient is C(a,j)·b!/(b−j)!
            for j in 0..=a.min(b) {
                let n = a + b - j;
                out[n] = out[n].clone() + weight.clone() * newton_coefficient::<T>(a, b, j);
            }
        }
    }
    FiniteSequence::new(out)
}

fn newton_coefficient<T: Scalar>(a: usize, b: usize, j: usize) -> T {
    let mut acc: Option<i64> = Some(1);
    for t in 0..j {
        // acc·(a−t)/(t+1) stays integral: after step t it equals C(a,t+1)·(b)_t.
        acc = acc
            .and_then(|v| v.checked_mul((a - t) as i64))
            .map(|v| v / (t as i64 + 1))
            .and_then(|v| v.checked_mul((b - t) as i64));
    }
    match acc {
        Some(v) => T::from_int(v),
        None => {
            let binom = factorial(a) / (factorial(j) * factorial(a - j));
            let falling = factorial(b) / factorial(b - j);
            T::from_exact(&ExactScalar::from_integer(binom * falling))
        }
    }
}

/// `τ(f) = Σ_n τ_n f_n`.
pub fn apply_functional<R, T>(tau: &MomentFunctional<R>, f: &FiniteSequence<T>) -> Result<T>
where
    R: RealScalar,
    T: Scalar + Lift<R>,
{
    if f.len() > tau.len() {
        return Err(Error::InsufficientMoments {
            needed: f.len(),
            available: tau.len(),
        });
    }
    Ok(f
        .coeffs
        .iter()
        .zip(tau.values())
        .fold(T::zero(), |acc, (fn_, t)| acc + fn_.clone() * T::lift(t)))
}
