//! Similarity initialization from metrics and bilinear forms.

use crate::error::{Result, SimError};
use numeric_core::{pairwise_sqdist, DenseMatrix};
use serde::{Deserialize, Serialize};

/// Per-point offset `c(x)`: either one shared constant or one value per
/// point (row).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CValues {
    Constant(f64),
    PerPoint(Vec<f64>),
}

impl CValues {
    fn at(&self, i: usize) -> f64 {
        match self {
            CValues::Constant(c) => *c,
            CValues::PerPoint(v) => v[i],
        }
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if let CValues::PerPoint(v) = self {
            if v.len() != n {
                return Err(SimError::InvalidParameter(format!(
                    "c has {} entries for {} points",
                    v.len(),
                    n
                )));
            }
        }
        Ok(())
    }
}

/// Distance source plus the `(c, t)` parameters of metric-based
/// similarity generation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSpec {
    pub kind: MetricKind,
    pub c: CValues,
    pub t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MetricKind {
    Euclidean,
    Precomputed { distances: DenseMatrix },
}

/// Validates that a precomputed distance matrix is a plausible metric
/// table: square, symmetric, nonnegative, zero diagonal.
pub fn validate_distance_matrix(dist: &DenseMatrix) -> Result<()> {
    if !dist.is_square() {
        return Err(SimError::InvalidParameter(format!(
            "distance matrix must be square, got {}x{}",
            dist.rows(),
            dist.cols()
        )));
    }
    let n = dist.rows();
    for i in 0..n {
        if dist.get(i, i) != 0.0 {
            return Err(SimError::InvalidParameter(format!(
                "distance matrix diagonal entry ({i}, {i}) is nonzero"
            )));
        }
        for j in 0..n {
            let v = dist.get(i, j);
            if v < 0.0 {
                return Err(SimError::InvalidParameter(format!(
                    "negative distance at ({i}, {j})"
                )));
            }
            if (v - dist.get(j, i)).abs() > 1e-12 {
                return Err(SimError::InvalidParameter(format!(
                    "distance matrix not symmetric at ({i}, {j})"
                )));
            }
        }
    }
    Ok(())
}

/// Euclidean distance matrix from point rows.
pub fn euclidean_distances(points: &DenseMatrix) -> Result<DenseMatrix> {
    let sq = pairwise_sqdist(points)?;
    Ok(sq.map(f64::sqrt, "euclidean_distances")?)
}

/// Metric-based similarity: `D_ij = c_i - sign(t) * d_ij^t`.
///
/// `sign(0) = 0`, so `t = 0` collapses to the constant matrix `c`. For
/// negative exponents the zero metric diagonal is excluded from the
/// power term; a zero off-diagonal distance is a genuine singularity.
pub fn metric_similarity(dist: &DenseMatrix, c: &CValues, t: f64) -> Result<DenseMatrix> {
    validate_distance_matrix(dist)?;
    let n = dist.rows();
    c.check_len(n)?;
    let sign = if t > 0.0 {
        1.0
    } else if t < 0.0 {
        -1.0
    } else {
        0.0
    };
    let mut out = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let d = dist.get(i, j);
            let term = if sign == 0.0 {
                0.0
            } else if d == 0.0 {
                if t < 0.0 && i != j {
                    return Err(SimError::ZeroDistanceSingularity { i, j });
                }
                0.0
            } else {
                sign * d.powf(t)
            };
            out.set(i, j, c.at(i) - term);
        }
    }
    Ok(out)
}

/// QK-dot similarity: `D_ij = x_i^T (Q^T K) x_j`.
pub fn qk_dot_similarity(x: &DenseMatrix, q: &DenseMatrix, k: &DenseMatrix) -> Result<DenseMatrix> {
    if q.shape() != k.shape() {
        return Err(SimError::InvalidParameter(format!(
            "Q is {}x{} but K is {}x{}",
            q.rows(),
            q.cols(),
            k.rows(),
            k.cols()
        )));
    }
    let xq = x.matmul(&q.transpose())?; // N x m
    let kx = k.matmul(&x.transpose())?; // m x N
    Ok(xq.matmul(&kx)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(rows: &[Vec<f64>]) -> DenseMatrix {
        DenseMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn unit_distance_t2_gives_minus_one_off_diagonal() {
        let d = dist(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        let s = metric_similarity(&d, &CValues::Constant(0.0), 2.0).unwrap();
        assert_eq!(s.get(0, 1), -1.0);
        assert_eq!(s.get(1, 0), -1.0);
        assert_eq!(s.get(0, 0), 0.0);
    }

    #[test]
    fn t_zero_gives_constant_matrix() {
        let d = dist(&[vec![0.0, 3.0], vec![3.0, 0.0]]);
        let s = metric_similarity(&d, &CValues::Constant(2.5), 0.0).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(s.get(i, j), 2.5);
            }
        }
    }

    #[test]
    fn negative_exponent_hand_value() {
        let d = dist(&[vec![0.0, 2.0], vec![2.0, 0.0]]);
        let s = metric_similarity(&d, &CValues::Constant(0.0), -1.0).unwrap();
        assert_eq!(s.get(0, 1), 0.5);
    }

    #[test]
    fn negative_exponent_rejects_zero_off_diagonal() {
        let d = dist(&[
            vec![0.0, 0.0, 1.0],
            vec![0.0, 0.0, 1.0],
            vec![1.0, 1.0, 0.0],
        ]);
        let err = metric_similarity(&d, &CValues::Constant(0.0), -2.0).unwrap_err();
        assert!(matches!(err, SimError::ZeroDistanceSingularity { i: 0, j: 1 }));
    }

    #[test]
    fn metric_similarity_symmetric_for_constant_c() {
        let pts = DenseMatrix::from_rows(&[vec![0.0, 0.0], vec![1.0, 2.0], vec![-1.0, 0.5]]).unwrap();
        let d = euclidean_distances(&pts).unwrap();
        let s = metric_similarity(&d, &CValues::Constant(1.0), 1.5).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((s.get(i, j) - s.get(j, i)).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn qk_dot_orthogonal_vectors() {
        let x = DenseMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let i2 = DenseMatrix::identity(2);
        let s = qk_dot_similarity(&x, &i2, &i2).unwrap();
        assert_eq!(s.get(0, 1), 0.0);
        assert_eq!(s.get(0, 0), 1.0); // unit vector with itself
    }

    #[test]
    fn qk_dot_bilinearity_in_q() {
        let x = DenseMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 0.0]]).unwrap();
        // x0 . x1 = 1; Q = 2I doubles it.
        let q = DenseMatrix::identity(2).scale(2.0).unwrap();
        let k = DenseMatrix::identity(2);
        let s = qk_dot_similarity(&x, &q, &k).unwrap();
        assert_eq!(s.get(0, 1), 2.0);
    }
}
