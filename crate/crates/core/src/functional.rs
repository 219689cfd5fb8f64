//! Moment functionals: Gram kernels, positivity, quasiscalar products and
//! growth diagnostics.

use num_traits::Zero;

use crate::convolution::{apply_functional, conv_general, delta, FiniteSequence};
use crate::error::{Error, Result};
use crate::family::PolynomialFamily;
use crate::linalg::{exact_psd, symmetric_eigen, ExactPsd};
use crate::scalar::{Lift, RealScalar, Scalar};

/// Relative eigenvalue tolerance for floating positivity tests.
pub const DEFAULT_TOL: f64 = 1e-10;

/// A truncated real sequence `τ_0..τ_M` to be read against a fixed family.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentFunctional<R> {
    values: Vec<R>,
    family: Option<String>,
}

impl<R: RealScalar> MomentFunctional<R> {
    pub fn new(values: Vec<R>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.to_f64().is_finite() && !R::EXACT) {
            return Err(Error::InvalidInput(format!("non-finite moment at index {i}")));
        }
        Ok(MomentFunctional { values, family: None })
    }

    pub fn with_family(mut self, kind: impl Into<String>) -> Self {
        self.family = Some(kind.into());
        self
    }

    pub fn family(&self) -> Option<&str> {
        self.family.as_deref()
    }

    pub fn values(&self) -> &[R] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn to_f64(&self) -> MomentFunctional<f64> {
        MomentFunctional {
            values: self.values.iter().map(RealScalar::to_f64).collect(),
            family: self.family.clone(),
        }
    }

    fn require(&self, needed: usize) -> Result<()> {
        if self.values.len() < needed {
            return Err(Error::InsufficientMoments {
                needed,
                available: self.values.len(),
            });
        }
        Ok(())
    }
}

/// `K_{jk} = Σ_n τ_n (P_jP_k, P_n)` for `0 ≤ j,k ≤ N`.
#[derive(Clone, Debug, PartialEq)]
pub struct GramMatrix<R> {
    entries: Vec<Vec<R>>,
}

impl<R: RealScalar> GramMatrix<R> {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, j: usize, k: usize) -> &R {
        &self.entries[j][k]
    }

    pub fn rows(&self) -> &[Vec<R>] {
        &self.entries
    }
}

pub fn gram<R: RealScalar>(tau: &MomentFunctional<R>, fam: &PolynomialFamily, n: usize) -> Result<GramMatrix<R>> {
    tau.require(2 * n + 1)?;
    if 2 * n > fam.order() {
        return Err(Error::TruncationExceeded {
            needed: 2 * n,
            available: fam.order(),
        });
    }
    let mut entries = vec![vec![R::zero(); n + 1]; n + 1];
    for j in 0..=n {
        for k in j..=n {
            let c = fam.structure_constants(j, k)?;
            let v = c
                .iter()
                .zip(tau.values())
                .filter(|(c, _)| !c.is_zero())
                .fold(R::zero(), |acc, (c, t)| acc + R::from_exact(c) * t.clone());
            entries[k][j] = v.clone();
            entries[j][k] = v;
        }
    }
    Ok(GramMatrix { entries })
}

/// Positivity verdict for `τ(f ∗_P f̄) ≥ 0`.
#[derive(Clone, Debug, PartialEq)]
pub enum Verdict<R> {
    Positive {
        /// Rank of the Gram kernel; certain for exact input.
        rank: Option<usize>,
        lambda_min: Option<f64>,
    },
    /// `τ(f ∗_P f̄) < 0` for the returned `witness`.
    Indefinite { witness: Vec<R>, lambda_min: Option<f64> },
    /// Floating input whose smallest eigenvalue is within tolerance of zero.
    Borderline { lambda_min: f64 },
}

impl<R> Verdict<R> {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Positive { .. } => "positive",
            Verdict::Indefinite { .. } => "indefinite",
            Verdict::Borderline { .. } => "borderline",
        }
    }

    pub fn is_indefinite(&self) -> bool {
        matches!(self, Verdict::Indefinite { .. })
    }

    pub fn is_positive(&self) -> bool {
        matches!(self, Verdict::Positive { .. })
    }
}

/// Semidefiniteness of a symmetric kernel: exact elimination for exact
/// scalars, relative eigenvalue test otherwise.
pub fn psd_verdict<R: RealScalar>(k: &[Vec<R>], tol: f64) -> Verdict<R> {
    if R::EXACT {
        return match exact_psd(k) {
            ExactPsd::Positive { rank } => Verdict::Positive {
                rank: Some(rank),
                lambda_min: None,
            },
            ExactPsd::Indefinite { witness } => Verdict::Indefinite {
                witness,
                lambda_min: None,
            },
        };
    }
    let kf: Vec<Vec<f64>> = k.iter().map(|r| r.iter().map(RealScalar::to_f64).collect()).collect();
    let (values, vectors) = symmetric_eigen(&kf);
    let Some(&lambda_min) = values.first() else {
        return Verdict::Positive {
            rank: Some(0),
            lambda_min: None,
        };
    };
    let scale = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let threshold = tol * scale;
    if lambda_min < -threshold {
        Verdict::Indefinite {
            witness: vectors[0].iter().map(|&x| R::from_f64(x)).collect(),
            lambda_min: Some(lambda_min),
        }
    } else if lambda_min.abs() < threshold {
        Verdict::Borderline { lambda_min }
    } else {
        let rank = values.iter().filter(|v| v.abs() >= threshold).count();
        Verdict::Positive {
            rank: Some(rank),
            lambda_min: Some(lambda_min),
        }
    }
}

pub fn is_positive<R: RealScalar>(
    tau: &MomentFunctional<R>,
    fam: &PolynomialFamily,
    n: usize,
    tol: f64,
) -> Result<Verdict<R>> {
    let k = gram(tau, fam, n)?;
    Ok(psd_verdict(&k.entries, tol))
}

/// `(f, g)_τ = τ(f ∗_P ḡ)`.
pub fn quasiscalar<R, T>(
    tau: &MomentFunctional<R>,
    fam: &PolynomialFamily,
    f: &FiniteSequence<T>,
    g: &FiniteSequence<T>,
) -> Result<T>
where
    R: RealScalar,
    T: Scalar + Lift<R>,
{
    let product = conv_general(f, &g.conj(), fam)?;
    apply_functional(tau, &product)
}

/// Result of fitting `|a_n| ≤ w_n·C^{n+1}` over a finite prefix.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthFit {
    /// Smallest admissible `C` over the stored range.
    pub constant: f64,
    /// Index at which the maximum is attained.
    pub argmax: usize,
    /// `(|a_n|/w_n)^{1/(n+1)}` for every `n`.
    pub profile: Vec<f64>,
    /// Maximum sits at the last index and the profile strictly increases over
    /// its last five values.
    pub unbounded_trend: bool,
}

const TREND_WINDOW: usize = 5;
const TREND_REL_STEP: f64 = 1e-12;

/// `ln_weight(n)` is `ln w_n`.
fn fit_growth(ln_abs: &[f64], ln_weight: impl Fn(usize) -> f64) -> GrowthFit {
    let profile: Vec<f64> = ln_abs
        .iter()
        .enumerate()
        .map(|(n, &l)| ((l - ln_weight(n)) / (n as f64 + 1.0)).exp())
        .collect();
    let (argmax, constant) = profile
        .iter()
        .enumerate()
        .fold((0, 0.0_f64), |(bi, bv), (i, &v)| if v > bv { (i, v) } else { (bi, bv) });
    let last = profile.len() - 1;
    let unbounded_trend = profile.len() >= TREND_WINDOW
        && argmax == last
        && profile[profile.len() - TREND_WINDOW..]
            .windows(2)
            .all(|w| w[1] > w[0] * (1.0 + TREND_REL_STEP));
    GrowthFit {
        constant,
        argmax,
        profile,
        unbounded_trend,
    }
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Smallest `C` with `|τ_n| ≤ n!·C^{n+1}` on the stored range.
pub fn growth_constant<R: RealScalar>(values: &[R]) -> Result<GrowthFit> {
    if values.is_empty() {
        return Err(Error::EmptyFunctional);
    }
    if values.len() < 2 {
        return Err(Error::InsufficientMoments {
            needed: 2,
            available: values.len(),
        });
    }
    let ln: Vec<f64> = values.iter().map(RealScalar::ln_abs).collect();
    Ok(fit_growth(&ln, ln_factorial))
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiagEnergyReport<R> {
    /// `τ(δ_n ∗_P δ_n)` for `n = 0..=N`.
    pub energies: Vec<R>,
    /// `τ(δ_n ∗_P δ_n) / (n!)²`.
    pub normalized: Vec<f64>,
    /// Fit of `|τ(δ_n ∗_P δ_n)| ≤ (n!)²·C^{n+1}`.
    pub fit: GrowthFit,
}

pub fn diag_energy_check<R: RealScalar>(
    tau: &MomentFunctional<R>,
    fam: &PolynomialFamily,
    n: usize,
) -> Result<DiagEnergyReport<R>> {
    tau.require(2 * n + 1)?;
    let energies = (0..=n)
        .map(|m| {
            let d = delta::<R>(m);
            quasiscalar(tau, fam, &d, &d)
        })
        .collect::<Result<Vec<R>>>()?;
    let normalized = energies
        .iter()
        .enumerate()
        .map(|(m, e)| (e.ln_abs() - 2.0 * ln_factorial(m)).exp() * e.to_f64().signum())
        .collect();
    let ln: Vec<f64> = energies.iter().map(RealScalar::ln_abs).collect();
    let fit = fit_growth(&ln, |m| 2.0 * ln_factorial(m));
    Ok(DiagEnergyReport {
        energies,
        normalized,
        fit,
    })
}

/// Partial sums of `Σ_{n=1}^{N} τ_{2k+2n}^{−1/(2n)}`. Divergence cannot be
/// decided from finitely many moments; the trajectory is reported as is.
pub fn carleman_report<R: RealScalar>(tau: &MomentFunctional<R>, k: usize, n_terms: usize) -> Result<Vec<f64>> {
    tau.require(2 * k + 2 * n_terms + 1)?;
    let mut sum = 0.0;
    let mut partial = Vec::with_capacity(n_terms);
    for n in 1..=n_terms {
        let idx = 2 * k + 2 * n;
        let v = &tau.values()[idx];
        if *v <= R::zero() {
            return Err(Error::NonPositiveMoment(idx));
        }
        sum += (-v.ln_abs() / (2.0 * n as f64)).exp();
        partial.push(sum);
    }
    Ok(partial)
}
