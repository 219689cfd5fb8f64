//! Generalized one-dimensional moment problems over polynomial families.
//!
//! A family `(P_n)` with `deg P_n = n` turns the finite sequences `l_fin`
//! into a commutative algebra through
//! `(f ∗_P g)_n = Σ_{j,k} f_j g_k (P_jP_k, P_n)`. A real sequence `τ` is a
//! moment functional, `τ_n = ∫ P_n dμ` for a positive measure `μ`, exactly
//! when `τ(f ∗_P f̄) ≥ 0` for every `f`. This crate builds the families
//! (monomial, falling factorial, general Sheffer), the convolutions, the
//! positivity tests, a spectral reconstruction of `μ`, and the associated
//! generating-function transforms.
//!
//! ```
//! use moment_core::{conv_general, delta, family_newton, ExactScalar};
//!
//! let newton = family_newton(4).unwrap();
//! // (x)_1 · (x)_1 = (x)_1 + (x)_2
//! let sq = conv_general(&delta::<ExactScalar>(1), &delta(1), &newton).unwrap();
//! assert_eq!(sq.coeffs().len(), 3);
//! ```

pub mod convolution;
pub mod error;
pub mod family;
pub mod functional;
pub mod linalg;
pub mod scalar;
pub mod series;
pub mod spectral;
pub mod transforms;
pub mod wire;

pub use convolution::{apply_functional, conv_cauchy, conv_general, conv_newton, delta, FiniteSequence};
pub use error::{Error, Result};
pub use family::{
    family_monomial, family_newton, family_sheffer, family_sheffer_to, growth_bound_check, FamilyKind,
    GrowthBoundReport, PolynomialFamily, ShefferSpec, StructureTable, DEFAULT_ORDER, MAX_ORDER,
};
pub use functional::{
    carleman_report, diag_energy_check, gram, growth_constant, is_positive, psd_verdict, quasiscalar,
    DiagEnergyReport, GramMatrix, GrowthFit, MomentFunctional, Verdict, DEFAULT_TOL,
};
pub use scalar::{ExactComplex, ExactScalar, Lift, RealScalar, Scalar};
pub use series::{series_exp, series_log, series_mul, Poly, SeriesCoeff, TruncatedSeries};
pub use spectral::{
    forward_moments, forward_moments_exact, jacobi_matrix, power_moments, reconstruct_detailed,
    reconstruct_measure, DiscreteMeasure, OperatorMatrix, Reconstruction,
};
pub use transforms::{
    bogoliubov, exp_convexity_check, laplace, s_transform, taylor_functional, taylor_functional_from_derivatives,
    BogoliubovSource, SampledFunction, TransformSample, DEFAULT_TERMS,
};
