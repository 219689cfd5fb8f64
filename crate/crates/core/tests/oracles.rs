//! Values computed outside this crate and frozen here.

use moment_core::scalar::{int, ratio};
use moment_core::*;
use num_complex::Complex64;

fn ints(v: &[i64]) -> Vec<ExactScalar> {
    v.iter().map(|&x| int(x)).collect()
}

fn close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol * b.abs().max(1.0), "{a} vs {b}");
}

#[test]
fn falling_factorial_rows() {
    let fam = family_newton(5).unwrap();
    assert_eq!(fam.row(5), ints(&[0, 24, -50, 35, -10, 1]).as_slice());
    assert_eq!(fam.row(3), ints(&[0, 2, -3, 1]).as_slice());
}

#[test]
fn hermite_rows() {
    let fam = family_sheffer(&ShefferSpec::hermite(5).unwrap()).unwrap();
    assert_eq!(fam.row(2), ints(&[-1, 0, 1]).as_slice());
    assert_eq!(fam.row(4), ints(&[3, 0, -6, 0, 1]).as_slice());
    assert_eq!(fam.row(5), ints(&[0, 15, 0, -10, 0, 1]).as_slice());
}

#[test]
fn newton_structure_constants() {
    let fam = family_newton(8).unwrap();
    assert_eq!(fam.structure_constants(3, 2).unwrap(), ints(&[0, 0, 0, 6, 6, 1]).as_slice());
    assert_eq!(fam.structure_constants(2, 2).unwrap(), ints(&[0, 0, 2, 4, 1]).as_slice());
}

#[test]
fn hermite_structure_constants() {
    // He_2·He_2 = He_4 + 4He_2 + 2
    let fam = family_sheffer(&ShefferSpec::hermite(6).unwrap()).unwrap();
    assert_eq!(fam.structure_constants(2, 2).unwrap(), ints(&[2, 0, 4, 0, 1]).as_slice());
}

#[test]
fn two_point_reconstruction() {
    let tau = MomentFunctional::new(ints(&[1, 0, 1, 0, 1])).unwrap();
    let mu = reconstruct_measure(&tau, &family_monomial(4).unwrap(), 2).unwrap();
    for (got, want) in mu.iter().zip([(-1.0, 0.5), (1.0, 0.5)]) {
        close(got.0, want.0, 1e-15);
        close(got.1, want.1, 1e-15);
    }
}

#[test]
fn gauss_hermite_three_point() {
    let tau = MomentFunctional::new(ints(&[1, 0, 1, 0, 3, 0, 15])).unwrap();
    let mu = reconstruct_measure(&tau, &family_monomial(6).unwrap(), 3).unwrap();
    let s3 = 1.7320508075688772;
    for (got, want) in mu.atoms().iter().zip([-s3, 0.0, s3]) {
        close(*got, want, 1e-14);
    }
    for (got, want) in mu.weights().iter().zip([1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0]) {
        close(*got, want, 1e-14);
    }
}

#[test]
fn rank_deficient_input_gives_fewer_atoms() {
    let tau = MomentFunctional::new(ints(&[2, 0, 2, 0, 2, 0, 2])).unwrap();
    let rec = reconstruct_detailed(&tau, &family_monomial(6).unwrap(), 3).unwrap();
    assert_eq!(rec.rank, 2);
    for (got, want) in rec.measure.atoms().iter().zip([-1.0, 1.0]) {
        close(*got, want, 1e-15);
    }
}

#[test]
fn poisson_laplace_and_bogoliubov() {
    let mu = DiscreteMeasure::truncated_poisson(0.5, 1e-30).unwrap();
    close(laplace(&mu, Complex64::new(1.0, 0.0)).re, 2.361131407770622, 1e-14);
    let b = bogoliubov::<f64>(BogoliubovSource::Measure(&mu), Complex64::new(0.3, 0.0)).unwrap();
    close(b.value.re, 1.161834242728283, 1e-14);
}

#[test]
fn s_transform_geometric() {
    // Σ λⁿ/n!·n!·2^{n+1} = 2/(1 − 2λ)
    let xi: Vec<ExactScalar> = (0..80u32)
        .map(|n| ExactScalar::from_integer(moment_core::scalar::factorial(n as usize) * num_bigint::BigInt::from(2).pow(n + 1)))
        .collect();
    let s = s_transform(&xi, Complex64::new(0.25, 0.0), 79);
    close(s.value.re, 4.0, 1e-15);
    assert!(s.warning.is_none());
    let far = s_transform(&xi, Complex64::new(0.6, 0.0), 79);
    assert!(far.warning.is_some());
}

#[test]
fn taylor_of_exp_half() {
    let k = TruncatedSeries::new(8, vec![int(0), ratio(1, 2)]).exp().unwrap();
    let tau = taylor_functional(&k, 8).unwrap();
    let expected: Vec<ExactScalar> = (0..=8).map(|n| ratio(1, 1 << n)).collect();
    assert_eq!(tau.values(), expected.as_slice());
}

#[test]
fn carleman_partial_sums_for_factorials() {
    let values: Vec<ExactScalar> = (0..=10).map(|n| ExactScalar::from_integer(moment_core::scalar::factorial(n))).collect();
    let tau = MomentFunctional::new(values).unwrap();
    let partial = carleman_report(&tau, 0, 5).unwrap();
    close(partial[0], std::f64::consts::FRAC_1_SQRT_2, 1e-15);
    close(partial[1], 1.15890778299147, 1e-15);
    close(partial[4], 1.9793945625087264, 1e-15);
}

#[test]
fn growth_constant_of_powers() {
    let values: Vec<ExactScalar> = (0..=10).map(|n| int(1 << n)).collect();
    let fit = growth_constant(&values).unwrap();
    close(fit.constant, std::f64::consts::SQRT_2, 1e-15);
    assert_eq!(fit.argmax, 1);
    assert!(!fit.unbounded_trend);
}
