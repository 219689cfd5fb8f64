//! Operator side of the moment problem: the matrix of multiplication by
//! `x` in a family basis, reconstruction of a discrete representing measure
//! from generalized moments, and the forward map `τ_n = ∫ P_n dμ`.
//!
//! Reconstruction converts generalized moments to power moments with the
//! exact triangular basis change, orthogonalizes the monomials against the
//! Hankel form (an `LDLᵀ` factorization without pivoting, exact when the
//! input is exact), reads off the three-term recurrence, and finishes with a
//! floating-point eigendecomposition of the symmetric tridiagonal matrix.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::PolynomialFamily;
use crate::functional::{is_positive, MomentFunctional, DEFAULT_TOL};
use crate::linalg::symmetric_eigen;
use crate::scalar::{exact_from_f64, ExactScalar, RealScalar};

/// Relative pivot threshold for rank detection in the Hankel factorization.
pub const PIVOT_REL_TOL: f64 = 1e-12;

/// Multiplication by `x` in the family basis, truncated to `(N+1)×(N+1)`.
/// Column `n` holds the expansion of `x·P_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    entries: Vec<Vec<ExactScalar>>,
    p1: (ExactScalar, ExactScalar),
}

impl OperatorMatrix {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    /// Entry in row `i`, column `j`.
    pub fn get(&self, i: usize, j: usize) -> &ExactScalar {
        &self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<ExactScalar>] {
        &self.entries
    }

    /// `(a, b)` with `P_1(x) = a·x + b`, so that convolution by `δ_1` acts as
    /// `a·J + b·I`. Equal to `(1, 0)` for normalized families.
    pub fn p1_affine(&self) -> &(ExactScalar, ExactScalar) {
        &self.p1
    }

    pub fn is_renormalized(&self) -> bool {
        !(self.p1.0.is_one() && self.p1.1.is_zero())
    }
}

pub fn jacobi_matrix(fam: &PolynomialFamily, n: usize) -> Result<OperatorMatrix> {
    let extended;
    let fam = if fam.order() > n {
        fam
    } else {
        extended = fam.with_order(n + 1)?;
        &extended
    };
    let mut entries = vec![vec![ExactScalar::zero(); n + 1]; n + 1];
    for col in 0..=n {
        let mut shifted = vec![ExactScalar::zero()];
        shifted.extend_from_slice(fam.row(col));
        let coords = fam.monomial_to_family(&shifted)?;
        for (row, c) in coords.into_iter().enumerate().take(n + 1) {
            entries[row][col] = c;
        }
    }
    let p1 = fam.p1_affine().expect("order ≥ 1");
    Ok(OperatorMatrix { entries, p1 })
}

/// Finite positive measure `Σ w_i δ_{x_i}` with strictly increasing atoms.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteMeasure {
    atoms: Vec<f64>,
    weights: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn new(atoms: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if atoms.len() != weights.len() {
            return Err(Error::InvalidInput(format!(
                "{} atoms but {} weights",
                atoms.len(),
                weights.len()
            )));
        }
        if atoms.is_empty() {
            return Err(Error::InvalidInput("measure has no atoms".into()));
        }
        if atoms.iter().any(|a| !a.is_finite()) {
            return Err(Error::InvalidInput("atoms must be finite".into()));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::InvalidInput("weights must be positive and finite".into()));
        }
        if atoms.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput("atoms must be strictly increasing".into()));
        }
        Ok(DiscreteMeasure { atoms, weights })
    }

    /// Sorts atoms and merges repeated ones.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let mut pairs: Vec<(f64, f64)> = pairs.into_iter().collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut atoms: Vec<f64> = Vec::with_capacity(pairs.len());
        let mut weights: Vec<f64> = Vec::with_capacity(pairs.len());
        for (x, w) in pairs {
            if atoms.last() == Some(&x) {
                *weights.last_mut().expect("paired") += w;
            } else {
                atoms.push(x);
                weights.push(w);
            }
        }
        Self::new(atoms, weights)
    }

    /// Poisson(λ) restricted to `0..=K`, with `K` the first index where the
    /// remaining tail mass drops below `tail`. The tail is bounded by the
    /// geometric series `w_{K+1}·(K+2)/(K+2−λ)`, which stays meaningful far
    /// below the resolution of `1 − Σ w_j`.
    pub fn truncated_poisson(lambda: f64, tail: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidInput("Poisson rate must be positive".into()));
        }
        let mut atoms = Vec::new();
        let mut weights = Vec::new();
        let mut w = (-lambda).exp();
        let mut j = 0usize;
        loop {
            atoms.push(j as f64);
            weights.push(w);
            j += 1;
            w *= lambda / j as f64;
            let ratio = (j + 1) as f64;
            if w == 0.0 || (ratio > lambda && w * ratio / (ratio - lambda) < tail) {
                break;
            }
        }
        Self::new(atoms, weights)
    }

    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.atoms.iter().copied().zip(self.weights.iter().copied())
    }

    pub fn to_doc(&self) -> MeasureDoc {
        MeasureDoc {
            atoms: self.atoms.clone(),
            weights: self.weights.clone(),
        }
    }
}

/// JSON measure document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureDoc {
    pub atoms: Vec<f64>,
    pub weights: Vec<f64>,
}

impl MeasureDoc {
    pub fn build(&self) -> Result<DiscreteMeasure> {
        DiscreteMeasure::new(self.atoms.clone(), self.weights.clone())
    }
}

/// `τ_n = Σ_i w_i P_n(x_i)` in exact arithmetic on the exact values of the
/// stored doubles.
pub fn forward_moments_exact(
    mu: &DiscreteMeasure,
    fam: &PolynomialFamily,
    m: usize,
) -> Result<MomentFunctional<ExactScalar>> {
    if m > fam.order() {
        return Err(Error::TruncationExceeded {
            needed: m,
            available: fam.order(),
        });
    }
    let mut tau = vec![ExactScalar::zero(); m + 1];
    for (x, w) in mu.iter() {
        let x = exact_from_f64(x)?;
        let w = exact_from_f64(w)?;
        for (n, t) in tau.iter_mut().enumerate() {
            *t += &w * fam.evaluate_exact(n, &x)?;
        }
    }
    Ok(MomentFunctional::new(tau)?.with_family(fam.kind().name()))
}

/// `τ_n = ∫ P_n dμ` for `n ≤ M`, correctly rounded from the exact sum.
pub fn forward_moments(mu: &DiscreteMeasure, fam: &PolynomialFamily, m: usize) -> Result<MomentFunctional<f64>> {
    Ok(forward_moments_exact(mu, fam, m)?.to_f64())
}

/// Full output of [`reconstruct_measure`].
#[derive(Clone, Debug, PartialEq)]
pub struct Reconstruction {
    pub measure: DiscreteMeasure,
    /// Number of accepted Hankel pivots.
    pub rank: usize,
    /// Recurrence diagonal `a_k`.
    pub diagonal: Vec<f64>,
    /// Recurrence off-diagonal `√β_k`.
    pub off_diagonal: Vec<f64>,
    /// Power moments `∫ x^k dμ` for `k ≤ 2N`.
    pub power_moments: Vec<f64>,
}

/// Power moments `m_k` from generalized moments `τ_n = Σ_k [P_n]_k m_k`.
pub fn power_moments<R: RealScalar>(tau: &[R], fam: &PolynomialFamily) -> Result<Vec<R>> {
    if tau.is_empty() {
        return Ok(Vec::new());
    }
    if tau.len() - 1 > fam.order() {
        return Err(Error::TruncationExceeded {
            needed: tau.len() - 1,
            available: fam.order(),
        });
    }
    let mut m: Vec<R> = Vec::with_capacity(tau.len());
    for (n, t) in tau.iter().enumerate() {
        let row = fam.row(n);
        let mut acc = t.clone();
        for (k, mk) in m.iter().enumerate() {
            if !row[k].is_zero() {
                acc = acc - R::from_exact(&row[k]) * mk.clone();
            }
        }
        m.push(acc / R::from_exact(&row[n]));
    }
    Ok(m)
}

/// `⟨p, q⟩ = Σ p_a q_b m_{a+b+shift}`
fn hankel_form<R: RealScalar>(p: &[R], q: &[R], m: &[R], shift: usize) -> R {
    let mut acc = R::zero();
    for (a, pa) in p.iter().enumerate() {
        if pa.is_zero() {
            continue;
        }
        for (b, qb) in q.iter().enumerate() {
            if !qb.is_zero() {
                acc = acc + pa.clone() * qb.clone() * m[a + b + shift].clone();
            }
        }
    }
    acc
}

/// Monic orthogonal polynomials and their squared norms, stopping at the
/// first pivot below `PIVOT_REL_TOL × (largest pivot so far)`.
fn monic_orthogonal<R: RealScalar>(m: &[R], size: usize) -> (Vec<Vec<R>>, Vec<R>) {
    let rel = R::from_f64(PIVOT_REL_TOL);
    let mut polys: Vec<Vec<R>> = Vec::new();
    let mut norms: Vec<R> = Vec::new();
    let mut largest = R::zero();
    for k in 0..size {
        let mut xk = vec![R::zero(); k + 1];
        xk[k] = R::one();
        let mut pk = xk.clone();
        for (pi, di) in polys.iter().zip(&norms) {
            let coeff = hankel_form(&xk, pi, m, 0) / di.clone();
            for (a, c) in pi.iter().enumerate() {
                pk[a] = pk[a].clone() - coeff.clone() * c.clone();
            }
        }
        let d = hankel_form(&xk, &pk, m, 0);
        if d > largest {
            largest = d.clone();
        }
        if d <= R::zero() || d < rel.clone() * largest.clone() {
            break;
        }
        polys.push(pk);
        norms.push(d);
    }
    (polys, norms)
}

/// `(π_n(x), π_n'(x))` by the three-term recurrence; `a.len() = n`.
fn monic_value(x: f64, a: &[f64], beta: &[f64]) -> (f64, f64) {
    let (mut p_prev, mut p) = (0.0, 1.0);
    let (mut d_prev, mut d) = (0.0, 0.0);
    for k in 0..a.len() {
        let b = if k == 0 { 0.0 } else { beta[k - 1] };
        let p_next = (x - a[k]) * p - b * p_prev;
        let d_next = p + (x - a[k]) * d - b * d_prev;
        (p_prev, p, d_prev, d) = (p, p_next, d, d_next);
    }
    (p, d)
}

/// Newton steps on `π_n` from an eigenvalue estimate; kept only while they shrink.
fn polish_node(x0: f64, a: &[f64], beta: &[f64]) -> f64 {
    let mut x = x0;
    let mut last_step = f64::INFINITY;
    for _ in 0..3 {
        let (p, d) = monic_value(x, a, beta);
        if d == 0.0 || p == 0.0 {
            break;
        }
        let step = p / d;
        if !step.is_finite() || step.abs() >= last_step || step.abs() > 1e-6 * x.abs().max(1.0) {
            break;
        }
        x -= step;
        last_step = step.abs();
    }
    x
}

/// `1 / Σ_{k<n} π_k(x)²/d_k`.
fn christoffel(x: f64, a: &[f64], beta: &[f64], norms: &[f64]) -> f64 {
    let (mut p_prev, mut p) = (0.0, 1.0);
    let mut sum = 0.0;
    for k in 0..a.len() {
        sum += p * p / norms[k];
        let b = if k == 0 { 0.0 } else { beta[k - 1] };
        (p_prev, p) = (p, (x - a[k]) * p - b * p_prev);
    }
    1.0 / sum
}

/// Discrete measure whose first generalized moments match `τ_0..τ_{2N}`.
///
/// With `r` accepted pivots the result has `min(r, N)` atoms and reproduces
/// the power moments of order `< 2·min(r, N)`.
pub fn reconstruct_detailed<R: RealScalar>(
    tau: &MomentFunctional<R>,
    fam: &PolynomialFamily,
    n: usize,
) -> Result<Reconstruction> {
    if n == 0 {
        return Err(Error::InvalidInput("reconstruction needs N >= 1".into()));
    }
    if is_positive(tau, fam, n, DEFAULT_TOL)?.is_indefinite() {
        return Err(Error::Indefinite);
    }
    let m = power_moments(&tau.values()[..=2 * n], fam)?;
    if m[0] <= R::zero() {
        return Err(Error::InvalidInput(
            "zero functional: only the zero measure represents it".into(),
        ));
    }
    let (polys, norms) = monic_orthogonal(&m, n + 1);
    let rank = polys.len();
    let nodes = rank.min(n);
    let diagonal: Vec<f64> = (0..nodes)
        .map(|k| (hankel_form(&polys[k], &polys[k], &m, 1) / norms[k].clone()).to_f64())
        .collect();
    let off_diagonal: Vec<f64> = (1..nodes)
        .map(|k| (norms[k].clone() / norms[k - 1].clone()).to_f64().sqrt())
        .collect();
    let mut jac = vec![vec![0.0; nodes]; nodes];
    for k in 0..nodes {
        jac[k][k] = diagonal[k];
        if k + 1 < nodes {
            jac[k][k + 1] = off_diagonal[k];
            jac[k + 1][k] = off_diagonal[k];
        }
    }
    let (values, _) = symmetric_eigen(&jac);
    let norms_f: Vec<f64> = norms[..nodes].iter().map(RealScalar::to_f64).collect();
    let beta: Vec<f64> = off_diagonal.iter().map(|b| b * b).collect();
    let measure = DiscreteMeasure::from_pairs(
        values
            .iter()
            .map(|&x| {
                let x = polish_node(x, &diagonal, &beta);
                (x, christoffel(x, &diagonal, &beta, &norms_f))
            })
            .filter(|&(_, w)| w > 0.0),
    )?;
    Ok(Reconstruction {
        measure,
        rank,
        diagonal,
        off_diagonal,
        power_moments: m.iter().map(RealScalar::to_f64).collect(),
    })
}

pub fn reconstruct_measure<R: RealScalar>(
    tau: &MomentFunctional<R>,
    fam: &PolynomialFamily,
    n: usize,
) -> Result<DiscreteMeasure> {
    Ok(reconstruct_detailed(tau, fam, n)?.measure)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convolution::{conv_general, delta};
    use crate::family::{family_monomial, family_newton, family_sheffer, ShefferSpec};
    use crate::scalar::int;

    #[test]
    fn monomial_shift() {
        let j = jacobi_matrix(&family_monomial(6).unwrap(), 4).unwrap();
        for r in 0..5 {
            for c in 0..5 {
                assert_eq!(*j.get(r, c), int((r == c + 1) as i64));
            }
        }
        assert!(!j.is_renormalized());
    }

    #[test]
    fn newton_matrix() {
        let j = jacobi_matrix(&family_newton(5).unwrap(), 5).unwrap();
        for r in 0..6 {
            for c in 0..6 {
                let want = if r == c {
                    c as i64
                } else {
                    (r == c + 1) as i64
                };
                assert_eq!(*j.get(r, c), int(want), "({r},{c})");
            }
        }
    }

    #[test]
    fn hermite_matrix() {
        let fam = family_sheffer(&ShefferSpec::hermite(8).unwrap()).unwrap();
        let j = jacobi_matrix(&fam, 6).unwrap();
        for r in 0..7 {
            for c in 0..7 {
                let want = if r == c + 1 {
                    1
                } else if c == r + 1 {
                    c as i64
                } else {
                    0
                };
                assert_eq!(*j.get(r, c), int(want));
            }
        }
        for c in 0..6 {
            let col = conv_general(&delta::<ExactScalar>(1), &delta(c), &fam).unwrap();
            for r in 0..7 {
                assert_eq!(col.get(r), *j.get(r, c));
            }
        }
    }

    #[test]
    fn affine_p1_is_recorded() {
        // γ = 1 + λ, α = 2λ: P_1 = 2x + 1
        let spec = ShefferSpec::from_coeffs(6, vec![int(1), int(1)], vec![int(0), int(2)]).unwrap();
        let fam = family_sheffer(&spec).unwrap();
        let j = jacobi_matrix(&fam, 3).unwrap();
        assert!(j.is_renormalized());
        assert_eq!(j.p1_affine(), &(int(2), int(1)));
        let (a, b) = j.p1_affine().clone();
        for c in 0..3 {
            let col = conv_general(&delta::<ExactScalar>(1), &delta(c), &fam).unwrap();
            for r in 0..4 {
                let id = if r == c { b.clone() } else { int(0) };
                assert_eq!(col.get(r), &a * j.get(r, c) + id);
            }
        }
    }

    #[test]
    fn short_family_is_extended() {
        let j = jacobi_matrix(&family_newton(3).unwrap(), 3).unwrap();
        assert_eq!(*j.get(3, 3), int(3));
    }

    #[test]
    fn measure_validation() {
        assert!(DiscreteMeasure::new(vec![1.0, 0.0], vec![1.0, 1.0]).is_err());
        assert!(DiscreteMeasure::new(vec![0.0], vec![0.0]).is_err());
        assert!(DiscreteMeasure::new(vec![0.0, 1.0], vec![1.0]).is_err());
        assert!(DiscreteMeasure::new(vec![], vec![]).is_err());
        let merged = DiscreteMeasure::from_pairs([(1.0, 0.5), (-1.0, 0.25), (1.0, 0.25)]).unwrap();
        assert_eq!(merged.atoms(), &[-1.0, 1.0]);
        assert_eq!(merged.weights(), &[0.25, 0.75]);
    }

    #[test]
    fn two_point_reconstruction() {
        let tau = MomentFunctional::new(vec![int(1), int(0), int(1), int(0), int(1)]).unwrap();
        let r = reconstruct_detailed(&tau, &family_monomial(4).unwrap(), 2).unwrap();
        assert_eq!(r.rank, 2);
        let mu = r.measure;
        assert_eq!(mu.len(), 2);
        assert!((mu.atoms()[0] + 1.0).abs() < 1e-14 && (mu.atoms()[1] - 1.0).abs() < 1e-14);
        assert!(mu.weights().iter().all(|w| (w - 0.5).abs() < 1e-14));
    }

    #[test]
    fn single_atom() {
        let a = 1.5_f64;
        let tau = MomentFunctional::new((0..7).map(|n| a.powi(n)).collect()).unwrap();
        let mu = reconstruct_measure(&tau, &family_monomial(6).unwrap(), 3).unwrap();
        assert_eq!(mu.len(), 1);
        assert!((mu.atoms()[0] - a).abs() < 1e-12);
        assert!((mu.weights()[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn indefinite_is_rejected() {
        let tau = MomentFunctional::new(vec![int(1), int(0), int(-1), int(0), int(1)]).unwrap();
        assert_eq!(
            reconstruct_measure(&tau, &family_monomial(4).unwrap(), 2),
            Err(Error::Indefinite)
        );
    }

    #[test]
    fn forward_examples() {
        let fam = family_newton(6).unwrap();
        let origin = DiscreteMeasure::new(vec![0.0], vec![1.0]).unwrap();
        let tau = forward_moments(&origin, &fam, 6).unwrap();
        for n in 0..=6 {
            assert_eq!(tau.values()[n], fam.evaluate(n, 0.0).unwrap());
        }
        let sym = DiscreteMeasure::new(vec![-1.0, 1.0], vec![0.5, 0.5]).unwrap();
        let tau = forward_moments(&sym, &family_monomial(5).unwrap(), 5).unwrap();
        assert_eq!(tau.values(), &[1.0, 0.0, 1.0, 0.0, 1.0, 0.0]);
        assert!(forward_moments(&sym, &family_monomial(5).unwrap(), 6).is_err());
    }

    #[test]
    fn poisson_truncation_tail() {
        let mu = DiscreteMeasure::truncated_poisson(0.7, 1e-15).unwrap();
        assert!((mu.mass() - 1.0).abs() < 1e-15);
        assert_eq!(mu.atoms()[0], 0.0);
    }
}
