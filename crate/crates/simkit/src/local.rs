//! Local combination similarity: represent each point as an affine
//! combination of its neighbors, LLE style.

use crate::error::{Result, SimError};
use numeric_core::{linalg, DenseMatrix};

/// Per-point reconstruction weights; each row lists `(neighbor, weight)`
/// with weights summing to 1.
pub type LocalWeights = Vec<Vec<(usize, f64)>>;

/// Solves, for every point i, `min |v_i - sum_j w_ij v_j|^2` subject to
/// `sum_j w_ij = 1` over the given neighbor set, with trace-scaled
/// Tikhonov regularization of the local Gram matrix.
pub fn local_combination(x: &DenseMatrix, neighbors: &[Vec<usize>]) -> Result<LocalWeights> {
    let n = x.rows();
    if neighbors.len() != n {
        return Err(SimError::InvalidParameter(format!(
            "{} neighbor lists for {} points",
            neighbors.len(),
            n
        )));
    }
    let mut all = Vec::with_capacity(n);
    for (i, list) in neighbors.iter().enumerate() {
        if list.is_empty() {
            return Err(SimError::DegenerateInput(format!(
                "point {i} has an empty neighbor list"
            )));
        }
        for &j in list {
            if j >= n || j == i {
                return Err(SimError::InvalidParameter(format!(
                    "invalid neighbor {j} for point {i}"
                )));
            }
        }
        let k = list.len();
        // Local Gram matrix of the displacement vectors v_i - v_j.
        let mut gram = DenseMatrix::zeros(k, k);
        for (a, &ja) in list.iter().enumerate() {
            for (b, &jb) in list.iter().enumerate() {
                let mut dot = 0.0;
                for dim in 0..x.cols() {
                    dot += (x.get(i, dim) - x.get(ja, dim)) * (x.get(i, dim) - x.get(jb, dim));
                }
                gram.set(a, b, dot);
            }
        }
        let trace: f64 = (0..k).map(|a| gram.get(a, a)).sum();
        let lambda = 1e-9 * trace;
        for a in 0..k {
            gram.set(a, a, gram.get(a, a) + lambda);
        }
        let ones = vec![1.0; k];
        let weights = match linalg::solve(&gram, &ones, "local_combination") {
            Ok(w) => w,
            // All displacements vanish: any affine combination is exact.
            Err(_) => vec![1.0; k],
        };
        let total: f64 = weights.iter().sum();
        if total == 0.0 || !total.is_finite() {
            return Err(SimError::DegenerateInput(format!(
                "weight normalization failed for point {i}"
            )));
        }
        all.push(
            list.iter()
                .zip(&weights)
                .map(|(&j, &w)| (j, w / total))
                .collect(),
        );
    }
    Ok(all)
}

/// Expands weight rows into a dense N x N matrix with zeros outside the
/// neighbor sets.
pub fn weights_to_matrix(weights: &LocalWeights) -> Result<DenseMatrix> {
    let n = weights.len();
    let mut m = DenseMatrix::zeros(n, n);
    for (i, row) in weights.iter().enumerate() {
        for &(j, w) in row {
            m.set(i, j, w);
        }
    }
    if m.values().iter().all(|v| v.is_finite()) {
        Ok(m)
    } else {
        Err(SimError::DegenerateInput("non-finite local weights".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn midpoint_of_two_neighbors_gets_half_half() {
        let x = DenseMatrix::from_rows(&[
            vec![0.5, 0.0], // midpoint of the other two
            vec![0.0, 0.0],
            vec![1.0, 0.0],
        ])
        .unwrap();
        let w = local_combination(&x, &[vec![1, 2], vec![0, 2], vec![0, 1]]).unwrap();
        assert!((w[0][0].1 - 0.5).abs() < 1e-9);
        assert!((w[0][1].1 - 0.5).abs() < 1e-9);
    }

    #[test]
    fn exact_neighbor_takes_all_weight() {
        let x = DenseMatrix::from_rows(&[
            vec![0.0, 0.0],
            vec![0.0, 0.0], // identical to point 0
            vec![3.0, 4.0],
        ])
        .unwrap();
        let w = local_combination(&x, &[vec![1, 2], vec![0, 2], vec![0, 1]]).unwrap();
        assert!((w[0][0].1 - 1.0).abs() < 1e-6, "weight on identical neighbor {}", w[0][0].1);
        assert!(w[0][1].1.abs() < 1e-6);
    }

    #[test]
    fn point_in_triangle_reconstructs_with_unit_sum() {
        let x = DenseMatrix::from_rows(&[
            vec![0.31, 0.27], // strictly inside the triangle below
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
        ])
        .unwrap();
        let w = local_combination(&x, &[vec![1, 2, 3], vec![0, 2], vec![0, 1], vec![0, 1]]).unwrap();
        let row = &w[0];
        let sum: f64 = row.iter().map(|(_, w)| w).sum();
        assert!((sum - 1.0).abs() <= 1e-12);
        let mut rec = [0.0, 0.0];
        for &(j, wj) in row {
            rec[0] += wj * x.get(j, 0);
            rec[1] += wj * x.get(j, 1);
        }
        let res = ((rec[0] - 0.31).powi(2) + (rec[1] - 0.27).powi(2)).sqrt();
        assert!(res <= 1e-8, "reconstruction residual {res}");
    }

    #[test]
    fn empty_neighbor_list_is_an_error() {
        let x = DenseMatrix::from_rows(&[vec![0.0], vec![1.0]]).unwrap();
        assert!(local_combination(&x, &[vec![], vec![0]]).is_err());
    }

    #[test]
    fn coincident_neighbors_fall_back_to_uniform() {
        let x = DenseMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let w = local_combination(&x, &[vec![1, 2], vec![0, 2], vec![0, 1]]).unwrap();
        assert!((w[0][0].1 - 0.5).abs() < 1e-12);
        assert!((w[0][1].1 - 0.5).abs() < 1e-12);
    }
}
