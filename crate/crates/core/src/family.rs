//! Polynomial families `(P_n)` with `deg P_n = n`.
//!
//! Every family is stored as a lower-triangular table of monomial
//! coefficients together with its exact inverse, so that products of
//! family members can be re-expanded in the family basis without any
//! rounding.

use std::sync::OnceLock;

use num_complex::Complex;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{factorial, format_exact, parse_exact, ExactScalar, Scalar};
use crate::series::{Poly, TruncatedSeries};

pub const DEFAULT_ORDER: usize = 32;
pub const MAX_ORDER: usize = 256;

fn check_order(order: usize) -> Result<()> {
    if order > MAX_ORDER {
        return Err(Error::OrderTooLarge {
            order,
            cap: MAX_ORDER,
        });
    }
    Ok(())
}

/// Exponential generating pair `γ(λ)·exp(α(λ)·x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ShefferSpec {
    gamma: TruncatedSeries,
    alpha: TruncatedSeries,
}

impl ShefferSpec {
    /// Both series are brought to `order`; requires `γ(0) = 1`, `α(0) = 0`
    /// and `α'(0) ≠ 0`.
    pub fn new(order: usize, gamma: &TruncatedSeries, alpha: &TruncatedSeries) -> Result<Self> {
        check_order(order)?;
        let gamma = gamma.with_order(order);
        let alpha = alpha.with_order(order);
        if !gamma.coeff(0).is_one() {
            return Err(Error::InvalidSheffer("gamma(0) must be 1".into()));
        }
        if !alpha.coeff(0).is_zero() {
            return Err(Error::InvalidSheffer("alpha(0) must be 0".into()));
        }
        if order == 0 || alpha.coeff(1).is_zero() {
            return Err(Error::InvalidSheffer("alpha'(0) must be nonzero".into()));
        }
        Ok(ShefferSpec { gamma, alpha })
    }

    pub fn from_coeffs(order: usize, gamma: Vec<ExactScalar>, alpha: Vec<ExactScalar>) -> Result<Self> {
        Self::new(
            order,
            &TruncatedSeries::new(order, gamma),
            &TruncatedSeries::new(order, alpha),
        )
    }

    /// `e^{xλ}`
    pub fn monomial(order: usize) -> Result<Self> {
        Self::from_coeffs(order, vec![ExactScalar::one()], vec![ExactScalar::zero(), ExactScalar::one()])
    }

    /// `(1+λ)^x = e^{x·log(1+λ)}`
    pub fn newton(order: usize) -> Result<Self> {
        let one_plus = TruncatedSeries::new(order, vec![ExactScalar::one(), ExactScalar::one()]);
        Self::new(order, &TruncatedSeries::one(order), &one_plus.log()?)
    }

    /// Probabilists' Hermite polynomials, `e^{xλ − λ²/2}`.
    pub fn hermite(order: usize) -> Result<Self> {
        let half_sq = TruncatedSeries::monomial(order, 2, ExactScalar::new((-1).into(), 2.into()));
        Self::from_coeffs(
            order,
            half_sq.exp()?.coeffs().to_vec(),
            vec![ExactScalar::zero(), ExactScalar::one()],
        )
    }

    pub fn order(&self) -> usize {
        self.gamma.order()
    }

    pub fn gamma(&self) -> &TruncatedSeries {
        &self.gamma
    }

    pub fn alpha(&self) -> &TruncatedSeries {
        &self.alpha
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FamilyKind {
    Monomial,
    Newton,
    Sheffer(ShefferSpec),
}

impl FamilyKind {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyKind::Monomial => "monomial",
            FamilyKind::Newton => "newton",
            FamilyKind::Sheffer(_) => "sheffer",
        }
    }
}

/// A truncated family `P_0..P_N` in monomial coordinates.
#[derive(Debug, Clone)]
pub struct PolynomialFamily {
    kind: FamilyKind,
    rows: Vec<Vec<ExactScalar>>,
    inverse: Vec<Vec<ExactScalar>>,
    structure: Vec<OnceLock<Vec<ExactScalar>>>,
    structure_int: Vec<OnceLock<Option<Vec<i64>>>>,
}

/// Families compare by their polynomials; the kind tag is ignored.
impl PartialEq for PolynomialFamily {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
    }
}

impl PolynomialFamily {
    fn from_rows(kind: FamilyKind, rows: Vec<Vec<ExactScalar>>) -> Result<Self> {
        for (n, row) in rows.iter().enumerate() {
            if row.len() != n + 1 || row[n].is_zero() {
                return Err(Error::InvalidInput(format!("P_{n} does not have degree {n}")));
            }
        }
        let inverse = invert_lower(&rows);
        let order = rows.len() - 1;
        let slots = (order + 1) * (order + 1);
        Ok(PolynomialFamily {
            kind,
            rows,
            inverse,
            structure: (0..slots).map(|_| OnceLock::new()).collect(),
            structure_int: (0..slots).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn kind(&self) -> &FamilyKind {
        &self.kind
    }

    pub fn order(&self) -> usize {
        self.rows.len() - 1
    }

    /// Monomial coefficients of `P_n` (lowest degree first).
    pub fn row(&self, n: usize) -> &[ExactScalar] {
        &self.rows[n]
    }

    /// Row `n` holds `P_n` in the monomial basis.
    pub fn to_monomial(&self) -> &[Vec<ExactScalar>] {
        &self.rows
    }

    /// Row `k` holds `x^k` in the family basis.
    pub fn from_monomial(&self) -> &[Vec<ExactScalar>] {
        &self.inverse
    }

    /// `(P_1 − b)/a = x`, i.e. `P_1(x) = a·x + b`.
    pub fn p1_affine(&self) -> Option<(ExactScalar, ExactScalar)> {
        self.rows.get(1).map(|r| (r[1].clone(), r[0].clone()))
    }

    fn require(&self, needed: usize) -> Result<()> {
        if needed > self.order() {
            return Err(Error::TruncationExceeded {
                needed,
                available: self.order(),
            });
        }
        Ok(())
    }

    /// Re-expands a polynomial given in monomial coordinates in the family
    /// basis, by back-substitution against the triangular table.
    pub fn monomial_to_family(&self, monomial: &[ExactScalar]) -> Result<Vec<ExactScalar>> {
        let mut v = monomial.to_vec();
        while v.last().is_some_and(Zero::is_zero) {
            v.pop();
        }
        if v.is_empty() {
            return Ok(Vec::new());
        }
        let deg = v.len() - 1;
        self.require(deg)?;
        let mut out = vec![ExactScalar::zero(); deg + 1];
        for n in (0..=deg).rev() {
            if v[n].is_zero() {
                continue;
            }
            let c = &v[n] / &self.rows[n][n];
            for (vi, ri) in v.iter_mut().zip(&self.rows[n]) {
                *vi -= &c * ri;
            }
            out[n] = c;
        }
        Ok(out)
    }

    /// `Σ_n f_n P_n` in monomial coordinates.
    pub fn family_to_monomial(&self, f: &[ExactScalar]) -> Result<Vec<ExactScalar>> {
        if f.is_empty() {
            return Ok(Vec::new());
        }
        self.require(f.len() - 1)?;
        let mut out = vec![ExactScalar::zero(); f.len()];
        for (fn_, row) in f.iter().zip(&self.rows) {
            if fn_.is_zero() {
                continue;
            }
            for (o, r) in out.iter_mut().zip(row) {
                *o += fn_ * r;
            }
        }
        Ok(out)
    }

    /// Coefficients `(P_j·P_k, P_n)` for `n = 0..=j+k`.
    pub fn structure_constants(&self, j: usize, k: usize) -> Result<&[ExactScalar]> {
        self.require(j + k)?;
        let (lo, hi) = if j <= k { (j, k) } else { (k, j) };
        let slot = &self.structure[lo * (self.order() + 1) + hi];
        Ok(slot.get_or_init(|| {
            let product = Poly::new(self.rows[lo].clone()) * Poly::new(self.rows[hi].clone());
            let mut c = self
                .monomial_to_family(product.coeffs())
                .expect("degree checked above");
            c.resize(lo + hi + 1, ExactScalar::zero());
            c
        }))
    }

    /// The structure constants as machine integers, when they all are.
    pub fn structure_constants_int(&self, j: usize, k: usize) -> Result<Option<&[i64]>> {
        let exact = self.structure_constants(j, k)?;
        let (lo, hi) = if j <= k { (j, k) } else { (k, j) };
        let slot = &self.structure_int[lo * (self.order() + 1) + hi];
        Ok(slot
            .get_or_init(|| {
                exact
                    .iter()
                    .map(|c| if c.is_integer() { c.to_integer().to_i64() } else { None })
                    .collect()
            })
            .as_deref())
    }

    /// All structure constants with `j + k ≤ order`.
    pub fn structure_table(&self) -> StructureTable {
        let order = self.order();
        let mut entries = Vec::new();
        for j in 0..=order {
            for k in j..=order - j {
                let c = self.structure_constants(j, k).expect("within order").to_vec();
                entries.push(((j, k), c));
            }
        }
        StructureTable { order, entries }
    }

    /// `P_n(x)` by Horner's rule in floating point.
    pub fn evaluate(&self, n: usize, x: f64) -> Result<f64> {
        self.require(n)?;
        Ok(self.rows[n]
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + f64::from_exact(c)))
    }

    pub fn evaluate_exact(&self, n: usize, x: &ExactScalar) -> Result<ExactScalar> {
        self.require(n)?;
        Ok(self.rows[n]
            .iter()
            .rev()
            .fold(ExactScalar::zero(), |acc, c| acc * x + c))
    }

    /// `(I_P f)(x) = Σ_n f_n P_n(x)`.
    pub fn evaluate_combination<T>(&self, f: &[T], x: f64) -> Result<T>
    where
        T: Scalar + crate::scalar::Lift<f64>,
    {
        let mut acc = T::zero();
        for (n, fn_) in f.iter().enumerate() {
            acc = acc + fn_.clone() * T::lift(&self.evaluate(n, x)?);
        }
        Ok(acc)
    }

    pub fn to_doc(&self) -> FamilyDoc {
        let (gamma, alpha) = match &self.kind {
            FamilyKind::Sheffer(spec) => (
                Some(spec.gamma().coeffs().iter().map(format_exact).collect()),
                Some(spec.alpha().coeffs().iter().map(format_exact).collect()),
            ),
            _ => (None, None),
        };
        FamilyDoc {
            kind: self.kind.name().to_string(),
            order: self.order(),
            gamma,
            alpha,
            rows: Some(
                self.rows
                    .iter()
                    .map(|r| r.iter().map(format_exact).collect())
                    .collect(),
            ),
        }
    }

    /// The same family at a different truncation order, regenerated from its
    /// definition.
    pub fn with_order(&self, order: usize) -> Result<Self> {
        match &self.kind {
            FamilyKind::Monomial => family_monomial(order),
            FamilyKind::Newton => family_newton(order),
            FamilyKind::Sheffer(spec) => {
                if spec.order() < order {
                    return Err(Error::TruncationExceeded {
                        needed: order,
                        available: spec.order(),
                    });
                }
                family_sheffer_to(spec, order)
            }
        }
    }
}

fn invert_lower(rows: &[Vec<ExactScalar>]) -> Vec<Vec<ExactScalar>> {
    let mut inv: Vec<Vec<ExactScalar>> = Vec::with_capacity(rows.len());
    for (k, row) in rows.iter().enumerate() {
        let lead = &row[k];
        // x^k = (P_k − Σ_{i<k} row[i]·x^i) / lead
        let mut out = vec![ExactScalar::zero(); k + 1];
        out[k] = ExactScalar::one() / lead;
        for (i, ri) in row[..k].iter().enumerate() {
            if ri.is_zero() {
                continue;
            }
            let scale = ri / lead;
            for (o, b) in out.iter_mut().zip(&inv[i]) {
                *o -= &scale * b;
            }
        }
        inv.push(out);
    }
    inv
}

/// Exact structure constants `c_{jk}[n]` for every `j ≤ k` with `j + k ≤ N`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureTable {
    order: usize,
    entries: Vec<((usize, usize), Vec<ExactScalar>)>,
}

impl StructureTable {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, j: usize, k: usize) -> Option<&[ExactScalar]> {
        let key = if j <= k { (j, k) } else { (k, j) };
        self.entries
            .binary_search_by(|(e, _)| e.cmp(&key))
            .ok()
            .map(|i| self.entries[i].1.as_slice())
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &[ExactScalar])> {
        self.entries.iter().map(|((j, k), c)| (*j, *k, c.as_slice()))
    }
}

pub fn family_monomial(order: usize) -> Result<PolynomialFamily> {
    check_order(order)?;
    let rows = (0..=order)
        .map(|n| {
            let mut r = vec![ExactScalar::zero(); n + 1];
            r[n] = ExactScalar::one();
            r
        })
        .collect();
    PolynomialFamily::from_rows(FamilyKind::Monomial, rows)
}

/// Falling factorials `(x)_n = x(x−1)⋯(x−n+1)`.
pub fn family_newton(order: usize) -> Result<PolynomialFamily> {
    check_order(order)?;
    let mut rows = vec![vec![ExactScalar::one()]];
    for n in 0..order {
        let prev = &rows[n];
        let shift = ExactScalar::from_integer(n.into());
        let mut next = vec![ExactScalar::zero(); n + 2];
        for (i, c) in prev.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * &shift;
        }
        rows.push(next);
    }
    PolynomialFamily::from_rows(FamilyKind::Newton, rows)
}

/// `P_n = n!·[λ^n] γ(λ)·exp(α(λ)·x)` at the spec's own order.
pub fn family_sheffer(spec: &ShefferSpec) -> Result<PolynomialFamily> {
    family_sheffer_to(spec, spec.order())
}

/// As [`family_sheffer`], truncated at `order ≤ spec.order()`.
pub fn family_sheffer_to(spec: &ShefferSpec, order: usize) -> Result<PolynomialFamily> {
    if order > spec.order() {
        return Err(Error::TruncationExceeded {
            needed: order,
            available: spec.order(),
        });
    }
    let x_alpha: TruncatedSeries<Poly> = spec
        .alpha()
        .with_order(order)
        .map(|a| Poly::term(a.clone(), 1));
    let gamma: TruncatedSeries<Poly> = spec.gamma().with_order(order).map(|g| Poly::constant(g.clone()));
    let generating = gamma.mul(&x_alpha.exp()?)?;
    let rows = generating
        .coeffs()
        .iter()
        .enumerate()
        .map(|(n, p)| {
            let nf = ExactScalar::from_integer(factorial(n));
            let mut r: Vec<ExactScalar> = p.coeffs().iter().map(|c| c * &nf).collect();
            r.resize(n + 1, ExactScalar::zero());
            r
        })
        .collect();
    PolynomialFamily::from_rows(FamilyKind::Sheffer(spec.clone()), rows)
}

/// Numeric check of the Cauchy-type estimate
/// `|P_n(x)| ≤ n!/r^n · sup_{|λ|=r} |γ(λ)e^{α(λ)x}| ≤ 2·n!/r^n · e^{ε|x|}`.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthBoundReport {
    pub epsilon: f64,
    /// Largest sampled radius with `|α| ≤ ε` and `|γ| ≤ 2` on the circle.
    pub radius: f64,
    /// Per `n`, the worst ratio `|P_n(x)| / (2·n!/r^n·e^{ε|x|})` over the grid.
    pub worst_ratio: Vec<f64>,
    /// Per `n`, the worst ratio of `|P_n(x)|` to the sampled Cauchy bound.
    pub worst_cauchy_ratio: Vec<f64>,
}

impl GrowthBoundReport {
    pub fn holds(&self) -> bool {
        self.worst_ratio.iter().all(|&r| r <= 1.0)
    }
}

pub fn growth_bound_check(
    spec: &ShefferSpec,
    epsilon: f64,
    xs: &[f64],
    n_max: usize,
    circle_samples: usize,
) -> Result<GrowthBoundReport> {
    let family = family_sheffer_to(spec, n_max.min(spec.order()))?;
    if n_max > family.order() {
        return Err(Error::TruncationExceeded {
            needed: n_max,
            available: family.order(),
        });
    }
    let circle = |r: f64| {
        (0..circle_samples).map(move |i| {
            let t = std::f64::consts::TAU * i as f64 / circle_samples as f64;
            Complex::from_polar(r, t)
        })
    };
    let admissible = |r: f64| {
        circle(r).all(|z| spec.alpha().eval_complex(z).norm() <= epsilon && spec.gamma().eval_complex(z).norm() <= 2.0)
    };
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    if admissible(hi) {
        lo = hi;
    } else {
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if admissible(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
    let r = lo;
    if r <= 0.0 {
        return Err(Error::InvalidInput("no admissible radius found".into()));
    }
    let mut worst_ratio = Vec::with_capacity(n_max + 1);
    let mut worst_cauchy_ratio = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let nf = (1..=n).fold(1.0, |acc, k| acc * k as f64);
        let scale = nf / r.powi(n as i32);
        let (mut worst, mut worst_cauchy) = (0.0_f64, 0.0_f64);
        for &x in xs {
            let p = family.evaluate(n, x)?.abs();
            let bound = 2.0 * scale * (epsilon * x.abs()).exp();
            let sup = circle(r)
                .map(|z| (spec.gamma().eval_complex(z) * (spec.alpha().eval_complex(z) * x).exp()).norm())
                .fold(0.0, f64::max);
            worst = worst.max(p / bound);
            worst_cauchy = worst_cauchy.max(p / (scale * sup));
        }
        worst_ratio.push(worst);
        worst_cauchy_ratio.push(worst_cauchy);
    }
    Ok(GrowthBoundReport {
        epsilon,
        radius: r,
        worst_ratio,
        worst_cauchy_ratio,
    })
}

/// JSON family document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyDoc {
    pub kind: String,
    pub order: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<Vec<Vec<String>>>,
}

impl FamilyDoc {
    pub fn build(&self) -> Result<PolynomialFamily> {
        let series = |v: &Option<Vec<String>>, what: &str| -> Result<Vec<ExactScalar>> {
            v.as_ref()
                .ok_or_else(|| Error::InvalidInput(format!("sheffer family requires {what}")))?
                .iter()
                .map(|s| parse_exact(s))
                .collect()
        };
        match self.kind.as_str() {
            "monomial" | "newton" if self.gamma.is_some() || self.alpha.is_some() => Err(Error::InvalidInput(
                format!("gamma/alpha are only valid for sheffer, not {}", self.kind),
            )),
            "monomial" => family_monomial(self.order),
            "newton" => family_newton(self.order),
            "sheffer" => {
                let spec = ShefferSpec::from_coeffs(self.order, series(&self.gamma, "gamma")?, series(&self.alpha, "alpha")?)?;
                family_sheffer(&spec)
            }
            other => Err(Error::InvalidInput(format!("unknown family kind {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn ints(v: &[i64]) -> Vec<ExactScalar> {
        v.iter().map(|&n| int(n)).collect()
    }

    #[test]
    fn monomial_rows_are_identity() {
        let f = family_monomial(2).unwrap();
        assert_eq!(f.row(0), ints(&[1]).as_slice());
        assert_eq!(f.row(1), ints(&[0, 1]).as_slice());
        assert_eq!(f.row(2), ints(&[0, 0, 1]).as_slice());
        assert_eq!(f.from_monomial(), f.to_monomial());
    }

    #[test]
    fn monomial_structure_constants() {
        let f = family_monomial(4).unwrap();
        assert_eq!(f.structure_constants(1, 1).unwrap(), ints(&[0, 0, 1]).as_slice());
        assert_eq!(f.structure_constants(1, 2).unwrap()[2], int(0));
    }

    #[test]
    fn newton_rows() {
        let f = family_newton(3).unwrap();
        assert_eq!(f.row(0), ints(&[1]).as_slice());
        assert_eq!(f.row(2), ints(&[0, -1, 1]).as_slice());
        assert_eq!(f.row(3), ints(&[0, 2, -3, 1]).as_slice());
    }

    #[test]
    fn inverse_is_exact() {
        let f = family_newton(10).unwrap();
        for k in 0..=10 {
            let mut v = vec![int(0); k + 1];
            v[k] = int(1);
            let back = f.family_to_monomial(&f.monomial_to_family(&v).unwrap()).unwrap();
            assert_eq!(back, v);
        }
    }

    #[test]
    fn sheffer_regenerates_builtins() {
        assert_eq!(
            family_sheffer(&ShefferSpec::monomial(8).unwrap()).unwrap(),
            family_monomial(8).unwrap()
        );
        assert_eq!(
            family_sheffer(&ShefferSpec::newton(8).unwrap()).unwrap(),
            family_newton(8).unwrap()
        );
    }

    #[test]
    fn hermite_second_member() {
        let h = family_sheffer(&ShefferSpec::hermite(4).unwrap()).unwrap();
        assert_eq!(h.row(2), ints(&[-1, 0, 1]).as_slice());
        assert_eq!(h.row(3), ints(&[0, -3, 0, 1]).as_slice());
    }

    #[test]
    fn sheffer_validation() {
        let bad_gamma = ShefferSpec::from_coeffs(3, ints(&[2]), ints(&[0, 1]));
        assert!(matches!(bad_gamma, Err(Error::InvalidSheffer(_))));
        let bad_alpha0 = ShefferSpec::from_coeffs(3, ints(&[1]), ints(&[1, 1]));
        assert!(matches!(bad_alpha0, Err(Error::InvalidSheffer(_))));
        let bad_alpha1 = ShefferSpec::from_coeffs(3, ints(&[1]), ints(&[0, 0, 1]));
        assert!(matches!(bad_alpha1, Err(Error::InvalidSheffer(_))));
    }

    #[test]
    fn newton_structure_constants() {
        let f = family_newton(6).unwrap();
        assert_eq!(f.structure_constants(1, 1).unwrap(), ints(&[0, 1, 1]).as_slice());
        assert_eq!(f.structure_constants(2, 2).unwrap()[2], int(2));
    }

    #[test]
    fn unit_row_of_structure_constants() {
        for fam in [family_newton(6).unwrap(), family_sheffer(&ShefferSpec::hermite(6).unwrap()).unwrap()] {
            for k in 0..=6 {
                let c = fam.structure_constants(0, k).unwrap();
                for (n, cn) in c.iter().enumerate() {
                    assert_eq!(*cn, if n == k { int(1) } else { int(0) });
                }
            }
        }
    }

    #[test]
    fn truncation_exceeded() {
        let f = family_newton(4).unwrap();
        assert!(matches!(
            f.structure_constants(3, 2),
            Err(Error::TruncationExceeded { needed: 5, available: 4 })
        ));
        assert!(f.evaluate(5, 1.0).is_err());
    }

    #[test]
    fn order_cap() {
        assert!(matches!(family_monomial(MAX_ORDER + 1), Err(Error::OrderTooLarge { .. })));
    }

    #[test]
    fn evaluation() {
        assert_eq!(family_newton(3).unwrap().evaluate(3, 5.0).unwrap(), 60.0);
        assert_eq!(family_monomial(4).unwrap().evaluate(4, 2.0).unwrap(), 16.0);
        assert_eq!(family_newton(3).unwrap().evaluate(0, -7.5).unwrap(), 1.0);
        assert_eq!(
            family_newton(3).unwrap().evaluate_exact(2, &ratio(1, 2)).unwrap(),
            ratio(-1, 4)
        );
    }

    #[test]
    fn structure_table_is_symmetric_lookup() {
        let t = family_newton(4).unwrap().structure_table();
        assert_eq!(t.get(1, 3), t.get(3, 1));
        assert!(t.get(3, 2).is_none());
        assert_eq!(t.iter().count(), 9);
    }

    #[test]
    fn doc_round_trip() {
        let spec = ShefferSpec::hermite(5).unwrap();
        let fam = family_sheffer(&spec).unwrap();
        let doc = fam.to_doc();
        let json = serde_json::to_string(&doc).unwrap();
        let back: FamilyDoc = serde_json::from_str(&json).unwrap();
        assert_eq!(back.build().unwrap(), fam);
        let newton: FamilyDoc = serde_json::from_str(r#"{"kind":"newton","order":3}"#).unwrap();
        assert_eq!(newton.build().unwrap(), family_newton(3).unwrap());
        let bad: FamilyDoc = serde_json::from_str(r#"{"kind":"laguerre","order":3}"#).unwrap();
        assert!(bad.build().is_err());
    }
}
