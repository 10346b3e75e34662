//! Row-major dense f64 matrices.
//!
//! Every public operation checks shapes up front and verifies that the
//! result is finite, so NaN/Inf never propagate silently into the
//! similarity and training pipelines built on top.

use crate::error::{CoreError, Result};
use serde::{Deserialize, Serialize};

/// Row-major dense matrix of 64-bit floats.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl DenseMatrix {
    /// Builds a matrix from a row-major value buffer.
    pub fn from_vec(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != rows * cols {
            return Err(CoreError::InvalidParameter(format!(
                "buffer length {} does not match {}x{}",
                values.len(),
                rows,
                cols
            )));
        }
        let m = Self { rows, cols, values };
        m.check_finite("from_vec")?;
        Ok(m)
    }

    /// Builds a matrix from nested rows; all rows must share a length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut values = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(CoreError::InvalidParameter(format!(
                    "ragged rows: expected {} columns, found {}",
                    c,
                    row.len()
                )));
            }
            values.extend_from_slice(row);
        }
        Self::from_vec(r, c, values)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            values: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.values[i * n + i] = 1.0;
        }
        m
    }

    /// Column vector from a slice.
    pub fn column(values: &[f64]) -> Result<Self> {
        Self::from_vec(values.len(), 1, values.to_vec())
    }

    /// Single-row matrix from a slice.
    pub fn row_vector(values: &[f64]) -> Result<Self> {
        Self::from_vec(1, values.len(), values.to_vec())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i < self.rows && j < self.cols);
        self.values[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(i < self.rows && j < self.cols);
        self.values[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.values[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn check_finite(&self, context: &str) -> Result<()> {
        if self.values.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(CoreError::NonFinite {
                context: context.to_string(),
            })
        }
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(CoreError::DimensionMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: other.rows,
                right_cols: other.cols,
            });
        }
        Ok(())
    }

    /// Matrix product with a fixed, sequential left-to-right summation order.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(CoreError::DimensionMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: other.rows,
                right_cols: other.cols,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.values[i * self.cols + k];
                if a == 0.0 {
                    continue;
                }
                let rhs = &other.values[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.values[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(rhs) {
                    *d += a * b;
                }
            }
        }
        out.check_finite("matmul")?;
        Ok(out)
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.values[j * self.rows + i] = self.values[i * self.cols + j];
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + b)
            .collect();
        let out = Self {
            rows: self.rows,
            cols: self.cols,
            values,
        };
        out.check_finite("add")?;
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a - b)
            .collect();
        let out = Self {
            rows: self.rows,
            cols: self.cols,
            values,
        };
        out.check_finite("sub")?;
        Ok(out)
    }

    pub fn scale(&self, factor: f64) -> Result<Self> {
        let values = self.values.iter().map(|a| a * factor).collect();
        let out = Self {
            rows: self.rows,
            cols: self.cols,
            values,
        };
        out.check_finite("scale")?;
        Ok(out)
    }

    /// Elementwise map; the result must stay finite.
    pub fn map(&self, f: impl Fn(f64) -> f64, context: &str) -> Result<Self> {
        let values = self.values.iter().map(|&a| f(a)).collect();
        let out = Self {
            rows: self.rows,
            cols: self.cols,
            values,
        };
        out.check_finite(context)?;
        Ok(out)
    }

    /// Per-row sums in index order.
    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.rows)
            .map(|i| self.row(i).iter().sum())
            .collect()
    }

    /// Per-column sums, accumulated row by row.
    pub fn col_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.cols];
        for i in 0..self.rows {
            for (s, &v) in sums.iter_mut().zip(self.row(i)) {
                *s += v;
            }
        }
        sums
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Frobenius inner product-style max-norm distance to another matrix.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.same_shape(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }
}

/// Row-wise softmax with temperature; subtracts the row max before
/// exponentiating so large negative scores cannot overflow.
pub fn row_softmax(m: &DenseMatrix, temperature: f64) -> Result<DenseMatrix> {
    if !(temperature > 0.0) {
        return Err(CoreError::InvalidParameter(format!(
            "softmax temperature must be positive, got {temperature}"
        )));
    }
    let mut out = DenseMatrix::zeros(m.rows(), m.cols());
    for i in 0..m.rows() {
        let row = m.row(i);
        let max = row.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
        let dst = out.row_mut(i);
        let mut sum = 0.0;
        for (d, &v) in dst.iter_mut().zip(row) {
            let e = ((v - max) / temperature).exp();
            *d = e;
            sum += e;
        }
        for d in dst.iter_mut() {
            *d /= sum;
        }
    }
    Ok(out)
}

/// Pairwise squared Euclidean distances between the rows of `x`.
///
/// Uses the expansion |xi|^2 + |xj|^2 - 2 xi.xj and clamps tiny negative
/// round-off to zero; the result is symmetric with a zero diagonal.
pub fn pairwise_sqdist(x: &DenseMatrix) -> Result<DenseMatrix> {
    let n = x.rows();
    let mut norms = vec![0.0; n];
    for i in 0..n {
        norms[i] = x.row(i).iter().map(|v| v * v).sum();
    }
    let mut out = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let dot: f64 = x.row(i).iter().zip(x.row(j)).map(|(a, b)| a * b).sum();
            let d = (norms[i] + norms[j] - 2.0 * dot).max(0.0);
            out.set(i, j, d);
            out.set(j, i, d);
        }
    }
    Ok(out)
}
