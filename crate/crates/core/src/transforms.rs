//! Analytic transforms of sequences and measures: the S-transform
//! `Σ λⁿ/n!·ξ_n`, the Laplace transform, the one-dimensional Bogoliubov
//! functional, exponential-convexity tests and Taylor functionals.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functional::{growth_constant, psd_verdict, MomentFunctional, Verdict};
use crate::scalar::{ExactScalar, RealScalar};
use crate::series::TruncatedSeries;
use crate::spectral::DiscreteMeasure;

pub const DEFAULT_TERMS: usize = 64;
/// Relative size below which a running term no longer changes a double sum.
pub const TERM_REL_FLOOR: f64 = 1e-16;

#[derive(Clone, Debug, PartialEq)]
pub struct TransformSample {
    pub lambda: Complex64,
    pub value: Complex64,
    pub terms_used: usize,
    /// Magnitude of the last term added; zero for closed-form evaluations.
    pub tail_bound: f64,
    /// Set when `λ` lies outside the empirical convergence radius.
    pub warning: Option<String>,
}

impl TransformSample {
    pub fn to_doc(&self) -> SampleDoc {
        SampleDoc {
            lambda: [self.lambda.re, self.lambda.im],
            value: [self.value.re, self.value.im],
            terms_used: self.terms_used,
            tail_bound: self.tail_bound,
            warning: self.warning.clone(),
        }
    }
}

/// JSON sample document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleDoc {
    pub lambda: [f64; 2],
    pub value: [f64; 2],
    pub terms_used: usize,
    pub tail_bound: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

/// Partial sum of `Σ_{n ≤ N} λⁿ/n!·ξ_n`.
///
/// Summation ends after `n_terms`, at the end of the stored sequence, or
/// once two consecutive terms fall below `TERM_REL_FLOOR` times the partial
/// sum (two, so that sequences with zero odd or even entries are not cut
/// short).
pub fn s_transform<R: RealScalar>(xi: &[R], lambda: Complex64, n_terms: usize) -> TransformSample {
    let mut value = Complex64::new(0.0, 0.0);
    let mut coeff = Complex64::new(1.0, 0.0);
    let mut last = 0.0;
    let mut small_run = 0;
    let mut used = 0;
    for (n, x) in xi.iter().enumerate().take(n_terms + 1) {
        if n > 0 {
            coeff *= lambda / n as f64;
        }
        let term = coeff * x.to_f64();
        value += term;
        used = n + 1;
        last = term.norm();
        if last <= TERM_REL_FLOOR * value.norm() {
            small_run += 1;
            if small_run >= 2 {
                break;
            }
        } else {
            small_run = 0;
        }
    }
    let warning = radius_warning(xi, lambda);
    TransformSample {
        lambda,
        value,
        terms_used: used,
        tail_bound: last,
        warning,
    }
}

/// Warns when `|λ| ≥ 1/C` for the empirical growth constant `C`, the radius
/// inside which `|ξ_n| ≤ n!·C^{n+1}` makes the terms decay geometrically.
fn radius_warning<R: RealScalar>(xi: &[R], lambda: Complex64) -> Option<String> {
    let fit = growth_constant(xi).ok()?;
    let mut notes = Vec::new();
    if fit.constant > 0.0 && lambda.norm() * fit.constant >= 1.0 {
        notes.push(format!(
            "|lambda| = {} is outside the empirical radius {}",
            lambda.norm(),
            1.0 / fit.constant
        ));
    }
    if fit.unbounded_trend {
        notes.push("sequence growth exceeds n!C^(n+1) on the stored range".to_string());
    }
    (!notes.is_empty()).then(|| notes.join("; "))
}

/// `l_μ(λ) = Σ w_i e^{x_i λ}`.
pub fn laplace(mu: &DiscreteMeasure, lambda: Complex64) -> Complex64 {
    mu.iter().map(|(x, w)| w * (lambda * x).exp()).sum()
}

pub enum BogoliubovSource<'a, R> {
    /// Newton-family functional; evaluated as its S-transform.
    Series { tau: &'a MomentFunctional<R>, n_terms: usize },
    /// Representing measure; evaluated as `∫ (1+λ)^x dμ(x)`.
    Measure(&'a DiscreteMeasure),
}

fn integer_atom(x: f64) -> Option<i32> {
    (x.fract() == 0.0 && x.abs() < i32::MAX as f64).then_some(x as i32)
}

pub fn bogoliubov<R: RealScalar>(source: BogoliubovSource<'_, R>, lambda: Complex64) -> Result<TransformSample> {
    match source {
        BogoliubovSource::Series { tau, n_terms } => Ok(s_transform(tau.values(), lambda, n_terms)),
        BogoliubovSource::Measure(mu) => {
            let base = Complex64::new(1.0, 0.0) + lambda;
            let on_cut = base.im == 0.0 && base.re <= 0.0;
            let mut value = Complex64::new(0.0, 0.0);
            for (x, w) in mu.iter() {
                let term = match integer_atom(x) {
                    Some(k) if k >= 0 || base.norm() > 0.0 => base.powi(k),
                    Some(_) => return Err(Error::BranchCut(format!("{base}"))),
                    None if on_cut => return Err(Error::BranchCut(format!("{base}"))),
                    None => (base.ln() * x).exp(),
                };
                value += w * term;
            }
            Ok(TransformSample {
                lambda,
                value,
                terms_used: mu.len(),
                tail_bound: 0.0,
                warning: None,
            })
        }
    }
}

/// PSD test of `[k(x_i + x_j)]`; `k` returns `None` where it has no sample.
pub fn exp_convexity_check(
    grid: &[f64],
    k: impl Fn(f64) -> Option<f64>,
    tol: f64,
) -> Result<(Vec<Vec<f64>>, Verdict<f64>)> {
    let mut matrix = vec![vec![0.0; grid.len()]; grid.len()];
    for (i, &xi) in grid.iter().enumerate() {
        for (j, &xj) in grid.iter().enumerate() {
            let s = xi + xj;
            matrix[i][j] = k(s).ok_or(Error::MissingSample(s))?;
        }
    }
    let verdict = psd_verdict(&matrix, tol);
    Ok((matrix, verdict))
}

/// Lookup table over explicit `(x, k(x))` samples, matching arguments up to
/// a relative `1e-12`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledFunction {
    samples: Vec<(f64, f64)>,
}

impl SampledFunction {
    pub fn new(mut samples: Vec<(f64, f64)>) -> Self {
        samples.sort_by(|a, b| a.0.total_cmp(&b.0));
        SampledFunction { samples }
    }

    pub fn get(&self, x: f64) -> Option<f64> {
        let tol = 1e-12 * x.abs().max(1.0);
        self.samples
            .iter()
            .find(|(s, _)| (s - x).abs() <= tol)
            .map(|&(_, v)| v)
    }
}

/// `τ_n = n!·[λⁿ] k` for `n ≤ order`.
pub fn taylor_functional(k: &TruncatedSeries, order: usize) -> Result<MomentFunctional<ExactScalar>> {
    if order > k.order() {
        return Err(Error::TruncationExceeded {
            needed: order,
            available: k.order(),
        });
    }
    let mut fact = ExactScalar::from_integer(1.into());
    let mut values = Vec::with_capacity(order + 1);
    for n in 0..=order {
        if n > 0 {
            fact *= ExactScalar::from_integer(n.into());
        }
        values.push(k.coeff(n) * &fact);
    }
    MomentFunctional::new(values)
}

/// The derivative list `k^{(n)}(0)` taken as the functional itself.
pub fn taylor_functional_from_derivatives<R: RealScalar>(derivatives: Vec<R>) -> Result<MomentFunctional<R>> {
    if derivatives.is_empty() {
        return Err(Error::EmptyFunctional);
    }
    MomentFunctional::new(derivatives)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn geometric_s_transform() {
        let xi: Vec<f64> = (0..=60).map(|n| (1..=n).map(|k| k as f64).product()).collect();
        let s = s_transform(&xi, c(0.5), 60);
        assert!((s.value.re - 2.0).abs() < 1e-12);
    }

    #[test]
    fn delta_and_exponential_s_transform() {
        let delta = [1.0, 0.0, 0.0, 0.0];
        assert_eq!(s_transform(&delta, c(0.9), 10).value, c(1.0));
        let ones = vec![1.0; 40];
        let s = s_transform(&ones, c(0.3), 39);
        assert!((s.value.re - 0.3f64.exp()).abs() < 1e-15);
    }

    #[test]
    fn even_sequences_are_not_cut_short() {
        let cosh_coeffs: Vec<f64> = (0..30).map(|n| if n % 2 == 0 { 1.0 } else { 0.0 }).collect();
        let s = s_transform(&cosh_coeffs, c(0.7), 29);
        assert!((s.value.re - 0.7f64.cosh()).abs() < 1e-15);
    }

    #[test]
    fn radius_warning_is_raised() {
        let xi: Vec<f64> = (0..20).map(|n| (1..=n).map(|k| k as f64).product::<f64>() * 2f64.powi(n + 1)).collect();
        assert!(s_transform(&xi, c(0.1), 19).warning.is_none());
        assert!(s_transform(&xi, c(0.6), 19).warning.is_some());
    }

    #[test]
    fn laplace_examples() {
        let sym = DiscreteMeasure::new(vec![-1.0, 1.0], vec![0.5, 0.5]).unwrap();
        assert!((laplace(&sym, c(0.8)) - c(0.8f64.cosh())).norm() < 1e-15);
        let origin = DiscreteMeasure::new(vec![0.0], vec![1.0]).unwrap();
        assert_eq!(laplace(&origin, Complex64::new(3.0, -2.0)), c(1.0));
    }

    #[test]
    fn bogoliubov_of_point_mass_at_zero() {
        let origin = DiscreteMeasure::new(vec![0.0], vec![1.0]).unwrap();
        for l in [-0.9, 0.0, 0.4, 2.0] {
            let s = bogoliubov::<f64>(BogoliubovSource::Measure(&origin), c(l)).unwrap();
            assert_eq!(s.value, c(1.0));
        }
    }

    #[test]
    fn branch_cut() {
        let mu = DiscreteMeasure::new(vec![0.5], vec![1.0]).unwrap();
        assert!(matches!(
            bogoliubov::<f64>(BogoliubovSource::Measure(&mu), c(-2.0)),
            Err(Error::BranchCut(_))
        ));
        let ints = DiscreteMeasure::new(vec![2.0], vec![1.0]).unwrap();
        let s = bogoliubov::<f64>(BogoliubovSource::Measure(&ints), c(-2.0)).unwrap();
        assert_eq!(s.value, c(1.0));
        let neg = DiscreteMeasure::new(vec![-1.0], vec![1.0]).unwrap();
        assert!(bogoliubov::<f64>(BogoliubovSource::Measure(&neg), c(-1.0)).is_err());
    }

    #[test]
    fn convexity_examples() {
        let (_, v) = exp_convexity_check(&[-0.5, 0.0, 0.5], |x| Some(x.cosh()), 1e-10).unwrap();
        assert!(!v.is_indefinite());
        let (m, v) = exp_convexity_check(&[-1.0, 1.0], Some, 1e-10).unwrap();
        assert_eq!(m, vec![vec![-2.0, 0.0], vec![0.0, 2.0]]);
        assert!(v.is_indefinite());
        let (_, v) = exp_convexity_check(&[0.0], |_| Some(0.0), 1e-10).unwrap();
        assert!(v.is_positive());
        let table = SampledFunction::new(vec![(0.0, 1.0), (1.0, 2.0)]);
        assert!(matches!(
            exp_convexity_check(&[0.0, 1.0], |x| table.get(x), 1e-10),
            Err(Error::MissingSample(s)) if s == 2.0
        ));
    }

    #[test]
    fn taylor_examples() {
        let lambda = TruncatedSeries::new(8, vec![int(0), int(1)]);
        let e = lambda.exp().unwrap();
        assert_eq!(taylor_functional(&e, 8).unwrap().values(), vec![int(1); 9].as_slice());
        let half = TruncatedSeries::new(6, vec![int(0), ratio(1, 2)]).exp().unwrap();
        let tau = taylor_functional(&half, 6).unwrap();
        assert_eq!(tau.values()[3], ratio(1, 8));
        assert!(taylor_functional(&half, 7).is_err());
        assert!(taylor_functional_from_derivatives::<f64>(vec![]).is_err());
    }
}
