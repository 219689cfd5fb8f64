//! Dense symmetric kernels: exact pivoted LDLᵀ with indefiniteness
//! witnesses, and floating-point symmetric eigendecomposition.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::scalar::RealScalar;

/// Outcome of an exact semidefiniteness test.
#[derive(Clone, Debug, PartialEq)]
pub enum ExactPsd<R> {
    Positive { rank: usize },
    /// `witnessᵀ·K·witness < 0`.
    Indefinite { witness: Vec<R> },
}

struct Step<R> {
    pivot: usize,
    row: Vec<(usize, R)>,
    d: R,
}

/// Symmetric elimination with diagonal pivoting (largest remaining diagonal
/// first). Every sign decision is exact when `R` is exact.
pub fn exact_psd<R: RealScalar>(k: &[Vec<R>]) -> ExactPsd<R> {
    let n = k.len();
    let mut s: Vec<Vec<R>> = k.to_vec();
    let mut active: Vec<usize> = (0..n).collect();
    let mut steps: Vec<Step<R>> = Vec::new();

    let reduced_witness: Option<Vec<(usize, R)>> = loop {
        let Some(&p) = active
            .iter()
            .max_by(|&&a, &&b| s[a][a].partial_cmp(&s[b][b]).expect("ordered field"))
        else {
            break None;
        };
        if let Some(&q) = active.iter().find(|&&i| s[i][i] < R::zero()) {
            break Some(vec![(q, R::one())]);
        }
        let d = s[p][p].clone();
        if d.is_zero() {
            // Zero diagonal: any nonzero off-diagonal entry gives a negative 2×2 minor.
            let hit = active.iter().find_map(|&i| {
                active
                    .iter()
                    .find(|&&j| j != i && !s[i][j].is_zero())
                    .map(|&j| (i, j))
            });
            match hit {
                Some((i, j)) => {
                    let sign = if s[i][j] > R::zero() { -R::one() } else { R::one() };
                    break Some(vec![(i, R::one()), (j, sign)]);
                }
                None => break None,
            }
        }
        active.retain(|&i| i != p);
        let row: Vec<(usize, R)> = active.iter().map(|&j| (j, s[p][j].clone())).collect();
        for &(i, ref spi) in &row {
            if spi.is_zero() {
                continue;
            }
            let factor = spi.clone() / d.clone();
            for &(j, ref spj) in &row {
                s[i][j] = s[i][j].clone() - factor.clone() * spj.clone();
            }
        }
        steps.push(Step { pivot: p, row, d });
    };

    match reduced_witness {
        None => ExactPsd::Positive { rank: steps.len() },
        Some(entries) => {
            let mut w = vec![R::zero(); n];
            for (i, v) in entries {
                w[i] = v;
            }
            for step in steps.iter().rev() {
                let dot = step
                    .row
                    .iter()
                    .fold(R::zero(), |acc, (j, spj)| acc + spj.clone() * w[*j].clone());
                w[step.pivot] = -(dot / step.d.clone());
            }
            ExactPsd::Indefinite { witness: w }
        }
    }
}

/// Eigenvalues in ascending order with matching unit eigenvectors (columns).
pub fn symmetric_eigen(k: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = k.len();
    if n == 0 {
        return (Vec::new(), Vec::new());
    }
    let m = DMatrix::from_fn(n, n, |i, j| 0.5 * (k[i][j] + k[j][i]));
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = order
        .iter()
        .map(|&i| eig.eigenvectors.column(i).iter().copied().collect())
        .collect();
    (values, vectors)
}

pub fn quadratic_form<R: RealScalar>(k: &[Vec<R>], w: &[R]) -> R {
    let mut acc = R::zero();
    for (i, row) in k.iter().enumerate() {
        for (j, kij) in row.iter().enumerate() {
            acc = acc + w[i].clone() * kij.clone() * w[j].clone();
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ExactScalar};

    fn m(rows: &[&[i64]]) -> Vec<Vec<ExactScalar>> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn positive_definite() {
        assert_eq!(exact_psd(&m(&[&[2, 1], &[1, 2]])), ExactPsd::Positive { rank: 2 });
    }

    #[test]
    fn semidefinite_rank() {
        let k = m(&[&[1, 0, 1], &[0, 1, 0], &[1, 0, 1]]);
        assert_eq!(exact_psd(&k), ExactPsd::Positive { rank: 2 });
        assert_eq!(exact_psd(&m(&[&[0, 0], &[0, 0]])), ExactPsd::Positive { rank: 0 });
    }

    #[test]
    fn witnesses_are_negative() {
        for k in [
            m(&[&[1, 2], &[2, 1]]),
            m(&[&[0, 1], &[1, 0]]),
            m(&[&[1, 0, -1], &[0, -1, 0], &[-1, 0, 1]]),
            m(&[&[4, 2, 2], &[2, 1, 3], &[2, 3, 1]]),
            m(&[&[1, 1, 0], &[1, 1, 1], &[0, 1, 1]]),
        ] {
            match exact_psd(&k) {
                ExactPsd::Indefinite { witness } => {
                    assert!(quadratic_form(&k, &witness) < int(0), "{k:?}");
                }
                other => panic!("expected indefinite, got {other:?}"),
            }
        }
    }

    #[test]
    fn eigen_sorted() {
        let (vals, vecs) = symmetric_eigen(&[vec![2.0, 0.0], vec![0.0, -1.0]]);
        assert_eq!(vals, vec![-1.0, 2.0]);
        assert!((vecs[0][1].abs() - 1.0).abs() < 1e-15);
    }
}
