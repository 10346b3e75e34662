//! Strengthening and normalizing operators, plus topological adjacency
//! powers.

use crate::error::{Result, SimError};
use numeric_core::DenseMatrix;
use serde::{Deserialize, Serialize};

/// k-th order adjacency similarity: entries of `A^k` count weighted
/// k-step walks. `k = 0` returns the identity by convention.
pub fn adjacency_power(a: &DenseMatrix, k: i64) -> Result<DenseMatrix> {
    if !a.is_square() {
        return Err(SimError::InvalidParameter(format!(
            "adjacency matrix must be square, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if a.values().iter().any(|&v| v < 0.0) {
        return Err(SimError::InvalidParameter(
            "adjacency matrix entries must be nonnegative".into(),
        ));
    }
    if k < 0 {
        return Err(SimError::InvalidParameter(format!(
            "adjacency power must be nonnegative, got {k}"
        )));
    }
    let mut out = DenseMatrix::identity(a.rows());
    for _ in 0..k {
        out = out.matmul(a)?;
    }
    Ok(out)
}

/// Row-indexed divisor for exponential inflation; a scalar broadcasts
/// to every row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EpsSpec {
    Scalar(f64),
    PerRow(Vec<f64>),
}

impl EpsSpec {
    fn at(&self, i: usize) -> f64 {
        match self {
            EpsSpec::Scalar(e) => *e,
            EpsSpec::PerRow(v) => v[i],
        }
    }

    fn check(&self, rows: usize) -> Result<()> {
        match self {
            EpsSpec::Scalar(e) => {
                if *e == 0.0 {
                    return Err(SimError::InvalidParameter("inflation epsilon is zero".into()));
                }
            }
            EpsSpec::PerRow(v) => {
                if v.len() != rows {
                    return Err(SimError::InvalidParameter(format!(
                        "{} epsilon entries for {} rows",
                        v.len(),
                        rows
                    )));
                }
                if let Some(i) = v.iter().position(|&e| e == 0.0) {
                    return Err(SimError::InvalidParameter(format!(
                        "inflation epsilon is zero at row {i}"
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum InflateMode {
    Power { r: f64 },
    Exp { eps: EpsSpec },
}

/// Elementwise inflation: `sign(r) * M_ij^r` or `exp(M_ij / eps_i)`.
pub fn inflate(m: &DenseMatrix, mode: &InflateMode) -> Result<DenseMatrix> {
    match mode {
        InflateMode::Power { r } => {
            let r = *r;
            let sign = if r > 0.0 {
                1.0
            } else if r < 0.0 {
                -1.0
            } else {
                0.0
            };
            let integral = r.fract() == 0.0;
            let mut out = DenseMatrix::zeros(m.rows(), m.cols());
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    let v = m.get(i, j);
                    if v < 0.0 && !integral {
                        return Err(SimError::InvalidParameter(format!(
                            "fractional power {r} of negative entry at ({i}, {j})"
                        )));
                    }
                    if v == 0.0 && r < 0.0 {
                        return Err(SimError::DegenerateInput(format!(
                            "negative power {r} of zero entry at ({i}, {j})"
                        )));
                    }
                    let powed = if sign == 0.0 {
                        0.0
                    } else if integral {
                        v.powi(r as i32)
                    } else {
                        v.powf(r)
                    };
                    out.set(i, j, sign * powed);
                }
            }
            if !out.values().iter().all(|v| v.is_finite()) {
                return Err(SimError::InvalidParameter(
                    "power inflation overflowed to a non-finite value".into(),
                ));
            }
            Ok(out)
        }
        InflateMode::Exp { eps } => {
            eps.check(m.rows())?;
            let mut out = DenseMatrix::zeros(m.rows(), m.cols());
            for i in 0..m.rows() {
                let e = eps.at(i);
                for j in 0..m.cols() {
                    out.set(i, j, (m.get(i, j) / e).exp());
                }
            }
            if !out.values().iter().all(|v| v.is_finite()) {
                return Err(SimError::InvalidParameter(
                    "exponential inflation overflowed to a non-finite value".into(),
                ));
            }
            Ok(out)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormalizeMode {
    Row,
    Col,
    TwoSide,
    Global,
}

/// Normalization operators N_r, N_c, N_2, N_g. Inputs must be
/// nonnegative; a vanishing divisor is reported with its index rather
/// than silently zeroed.
pub fn normalize(m: &DenseMatrix, mode: NormalizeMode) -> Result<DenseMatrix> {
    if m.values().iter().any(|&v| v < 0.0) {
        return Err(SimError::InvalidParameter(
            "normalization requires nonnegative entries".into(),
        ));
    }
    let (rows, cols) = m.shape();
    let mut out = m.clone();
    match mode {
        NormalizeMode::Row => {
            let sums = m.row_sums();
            if let Some(i) = sums.iter().position(|&s| s <= 0.0) {
                return Err(SimError::DegenerateInput(format!("row {i} sums to zero")));
            }
            for i in 0..rows {
                for v in out.row_mut(i) {
                    *v /= sums[i];
                }
            }
        }
        NormalizeMode::Col => {
            let sums = m.col_sums();
            if let Some(j) = sums.iter().position(|&s| s <= 0.0) {
                return Err(SimError::DegenerateInput(format!("column {j} sums to zero")));
            }
            for i in 0..rows {
                let row = out.row_mut(i);
                for (j, v) in row.iter_mut().enumerate() {
                    *v /= sums[j];
                }
            }
        }
        NormalizeMode::TwoSide => {
            let sums = m.row_sums();
            if let Some(i) = sums.iter().position(|&s| s <= 0.0) {
                return Err(SimError::DegenerateInput(format!("row {i} sums to zero")));
            }
            for i in 0..rows {
                for j in 0..cols {
                    out.set(i, j, m.get(i, j) / (sums[i] * sums[j]));
                }
            }
        }
        NormalizeMode::Global => {
            let total: f64 = m.values().iter().sum();
            if total <= 0.0 {
                return Err(SimError::DegenerateInput("matrix total is zero".into()));
            }
            for v in out.values_mut() {
                *v /= total;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use numeric_core::RandomSource;
    use proptest::prelude::*;

    #[test]
    fn adjacency_power_one_is_input() {
        let a = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(adjacency_power(&a, 1).unwrap(), a);
    }

    #[test]
    fn path_graph_two_walks() {
        // 0 - 1 - 2: exactly one walk of length 2 from 0 to 2.
        let a = DenseMatrix::from_rows(&[
            vec![0.0, 1.0, 0.0],
            vec![1.0, 0.0, 1.0],
            vec![0.0, 1.0, 0.0],
        ])
        .unwrap();
        let a2 = adjacency_power(&a, 2).unwrap();
        assert_eq!(a2.get(0, 2), 1.0);
    }

    #[test]
    fn triangle_diagonal_counts_round_trips() {
        let a = DenseMatrix::from_rows(&[
            vec![0.0, 1.0, 1.0],
            vec![1.0, 0.0, 1.0],
            vec![1.0, 1.0, 0.0],
        ])
        .unwrap();
        let a2 = adjacency_power(&a, 2).unwrap();
        for i in 0..3 {
            assert_eq!(a2.get(i, i), 2.0);
        }
    }

    #[test]
    fn adjacency_power_zero_is_identity_and_negative_errors() {
        let a = DenseMatrix::from_rows(&[vec![0.0, 2.0], vec![2.0, 0.0]]).unwrap();
        assert_eq!(adjacency_power(&a, 0).unwrap(), DenseMatrix::identity(2));
        assert!(adjacency_power(&a, -1).is_err());
    }

    // Exhaustive walk-count oracle on all graphs with <= 4 nodes, plus a
    // couple of 6-node graphs: (A^k)_ij must equal the number of k-walks.
    #[test]
    fn adjacency_power_matches_walk_enumeration() {
        fn count_walks(adj: &[Vec<bool>], from: usize, to: usize, k: usize) -> u64 {
            if k == 0 {
                return u64::from(from == to);
            }
            let mut total = 0;
            for (next, &edge) in adj[from].iter().enumerate() {
                if edge {
                    total += count_walks(adj, next, to, k - 1);
                }
            }
            total
        }
        let mut rng = RandomSource::new(2024);
        let mut cases: Vec<Vec<Vec<bool>>> = Vec::new();
        for n in 2..=4usize {
            for _ in 0..8 {
                let mut adj = vec![vec![false; n]; n];
                for i in 0..n {
                    for j in (i + 1)..n {
                        if rng.uniform() < 0.5 {
                            adj[i][j] = true;
                            adj[j][i] = true;
                        }
                    }
                }
                cases.push(adj);
            }
        }
        for _ in 0..2 {
            let n = 6;
            let mut adj = vec![vec![false; n]; n];
            for i in 0..n {
                for j in (i + 1)..n {
                    if rng.uniform() < 0.4 {
                        adj[i][j] = true;
                        adj[j][i] = true;
                    }
                }
            }
            cases.push(adj);
        }
        for adj in cases {
            let n = adj.len();
            let mut a = DenseMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    if adj[i][j] {
                        a.set(i, j, 1.0);
                    }
                }
            }
            for k in 0..=3usize {
                let ak = adjacency_power(&a, k as i64).unwrap();
                for i in 0..n {
                    for j in 0..n {
                        let walks = count_walks(&adj, i, j, k) as f64;
                        assert_eq!(ak.get(i, j), walks, "n={n} k={k} ({i},{j})");
                    }
                }
            }
        }
    }

    #[test]
    fn inflate_power_one_is_identity() {
        let m = DenseMatrix::from_rows(&[vec![0.3, 2.0], vec![5.0, 0.1]]).unwrap();
        let out = inflate(&m, &InflateMode::Power { r: 1.0 }).unwrap();
        assert_eq!(out, m);
    }

    #[test]
    fn inflate_power_two_squares() {
        let m = DenseMatrix::from_vec(1, 1, vec![2.0]).unwrap();
        let out = inflate(&m, &InflateMode::Power { r: 2.0 }).unwrap();
        assert_eq!(out.get(0, 0), 4.0);
    }

    #[test]
    fn inflate_exp_at_zero_is_one() {
        let m = DenseMatrix::from_vec(1, 1, vec![0.0]).unwrap();
        let out = inflate(&m, &InflateMode::Exp { eps: EpsSpec::Scalar(1.0) }).unwrap();
        assert_eq!(out.get(0, 0), 1.0);
    }

    #[test]
    fn inflate_exp_rejects_zero_eps_and_fractional_power_rejects_negative() {
        let m = DenseMatrix::from_vec(1, 2, vec![1.0, -1.0]).unwrap();
        assert!(inflate(&m, &InflateMode::Exp { eps: EpsSpec::Scalar(0.0) }).is_err());
        assert!(inflate(&m, &InflateMode::Power { r: 0.5 }).is_err());
    }

    #[test]
    fn normalize_row_hand_example() {
        let m = DenseMatrix::from_rows(&[vec![1.0, 3.0]]).unwrap();
        let out = normalize(&m, NormalizeMode::Row).unwrap();
        assert_eq!(out.values(), &[0.25, 0.75]);
    }

    #[test]
    fn normalize_global_uniform() {
        let m = DenseMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let out = normalize(&m, NormalizeMode::Global).unwrap();
        assert!(out.values().iter().all(|&v| v == 0.25));
    }

    #[test]
    fn normalize_two_side_hand_example() {
        let m = DenseMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let out = normalize(&m, NormalizeMode::TwoSide).unwrap();
        assert!(out.values().iter().all(|&v| v == 0.25));
    }

    #[test]
    fn normalize_reports_offending_index() {
        let m = DenseMatrix::from_rows(&[vec![1.0, 1.0], vec![0.0, 0.0]]).unwrap();
        let err = normalize(&m, NormalizeMode::Row).unwrap_err().to_string();
        assert!(err.contains("row 1"), "{err}");
        let err = normalize(&m.transpose(), NormalizeMode::Col).unwrap_err().to_string();
        assert!(err.contains("column 1"), "{err}");
    }

    proptest! {
        #[test]
        fn prop_row_normalize_rows_sum_to_one(seed in any::<u64>(), n in 1usize..7, m in 1usize..7) {
            let mut rng = RandomSource::new(seed);
            let mut mat = DenseMatrix::zeros(n, m);
            for i in 0..n {
                for j in 0..m {
                    mat.set(i, j, rng.uniform() + 0.01);
                }
            }
            let out = normalize(&mat, NormalizeMode::Row).unwrap();
            for i in 0..n {
                let s: f64 = out.row(i).iter().sum();
                prop_assert!((s - 1.0).abs() <= 1e-12);
            }
        }
    }
}
