//! Small dense solves used by the similarity operators: LU with partial
//! pivoting and a modified Gram-Schmidt QR. Sizes here are tiny (neighbor
//! counts, subspace widths), so simplicity beats blocking.

use crate::error::{CoreError, Result};
use crate::matrix::DenseMatrix;

/// Solves `a x = b` for square `a` via LU with partial pivoting.
pub fn solve(a: &DenseMatrix, b: &[f64], context: &str) -> Result<Vec<f64>> {
    let n = a.rows();
    if !a.is_square() || b.len() != n {
        return Err(CoreError::DimensionMismatch {
            left_rows: a.rows(),
            left_cols: a.cols(),
            right_rows: b.len(),
            right_cols: 1,
        });
    }
    let mut lu: Vec<f64> = a.values().to_vec();
    let mut x: Vec<f64> = b.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();

    for k in 0..n {
        let mut pivot = k;
        let mut best = lu[perm[k] * n + k].abs();
        for r in (k + 1)..n {
            let v = lu[perm[r] * n + k].abs();
            if v > best {
                best = v;
                pivot = r;
            }
        }
        if best == 0.0 {
            return Err(CoreError::SingularSystem {
                context: context.to_string(),
            });
        }
        perm.swap(k, pivot);
        let pk = perm[k];
        let diag = lu[pk * n + k];
        for r in (k + 1)..n {
            let pr = perm[r];
            let factor = lu[pr * n + k] / diag;
            lu[pr * n + k] = factor;
            for c in (k + 1)..n {
                lu[pr * n + c] -= factor * lu[pk * n + c];
            }
        }
    }

    // Forward substitution on the permuted right-hand side.
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut acc = x[perm[i]];
        for j in 0..i {
            acc -= lu[perm[i] * n + j] * y[j];
        }
        y[i] = acc;
    }
    // Back substitution.
    for i in (0..n).rev() {
        let mut acc = y[i];
        for j in (i + 1)..n {
            acc -= lu[perm[i] * n + j] * x[j];
        }
        x[i] = acc / lu[perm[i] * n + i];
    }
    if !x.iter().all(|v| v.is_finite()) {
        return Err(CoreError::SingularSystem {
            context: context.to_string(),
        });
    }
    Ok(x)
}

/// Thin QR of the columns of `m` (rows x k, k <= rows) by modified
/// Gram-Schmidt. Returns the orthonormal factor; zero columns are
/// rejected as degenerate.
pub fn orthonormalize_columns(m: &DenseMatrix) -> Result<DenseMatrix> {
    let (n, k) = m.shape();
    let mut q = m.clone();
    for j in 0..k {
        for prev in 0..j {
            let mut dot = 0.0;
            for r in 0..n {
                dot += q.get(r, prev) * q.get(r, j);
            }
            for r in 0..n {
                let v = q.get(r, j) - dot * q.get(r, prev);
                q.set(r, j, v);
            }
        }
        let mut norm = 0.0;
        for r in 0..n {
            norm += q.get(r, j) * q.get(r, j);
        }
        let norm = norm.sqrt();
        if norm <= 1e-300 {
            return Err(CoreError::DegenerateInput(format!(
                "column {j} collapsed during orthonormalization"
            )));
        }
        for r in 0..n {
            q.set(r, j, q.get(r, j) / norm);
        }
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_hand_system() {
        let a = DenseMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 3.0]]).unwrap();
        let x = solve(&a, &[5.0, 10.0], "test").unwrap();
        assert!((x[0] - 1.0).abs() < 1e-12);
        assert!((x[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn solve_rejects_singular() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(solve(&a, &[1.0, 2.0], "test").is_err());
    }

    #[test]
    fn qr_produces_orthonormal_columns() {
        let m = DenseMatrix::from_rows(&[
            vec![1.0, 1.0],
            vec![1.0, 0.0],
            vec![0.0, 2.0],
        ])
        .unwrap();
        let q = orthonormalize_columns(&m).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                let mut dot = 0.0;
                for r in 0..3 {
                    dot += q.get(r, a) * q.get(r, b);
                }
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((dot - want).abs() < 1e-12);
            }
        }
    }
}
