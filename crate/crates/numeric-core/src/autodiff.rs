//! Minimal reverse-mode autodiff over dense matrices.
//!
//! A [`Tape`] is an append-only arena of primitive operations; creation
//! order is the topological order, so the backward sweep is a single
//! reverse pass that visits each node exactly once and accumulates
//! gradients additively into shared parents. Tapes are single-threaded
//! by contract; build one per model instance per step.

use crate::error::{CoreError, Result};
use crate::matrix::{self, DenseMatrix};

/// Handle to a node on a [`Tape`]. Only valid for the tape that made it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Tensor {
    id: usize,
    rows: usize,
    cols: usize,
}

impl Tensor {
    pub fn id(&self) -> usize {
        self.id
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }
}

#[derive(Debug, Clone)]
enum Op {
    Input,
    MatMul { a: usize, b: usize },
    Add { a: usize, b: usize },
    AddRowBroadcast { a: usize, bias: usize },
    Scale { a: usize, factor: f64 },
    Transpose { a: usize },
    Tanh { a: usize },
    Exp { a: usize },
    RowSoftmax { a: usize, temperature: f64 },
    PairwiseSqDist { a: usize },
    CrossEntropy { logits: usize, labels: Vec<usize> },
}

/// Recorded forward pass: operations, their values, and gradient slots.
#[derive(Debug, Default)]
pub struct Tape {
    ops: Vec<Op>,
    values: Vec<DenseMatrix>,
    grads: Vec<DenseMatrix>,
}

fn add_into(dst: &mut DenseMatrix, src: &DenseMatrix) {
    for (d, s) in dst.values_mut().iter_mut().zip(src.values()) {
        *d += s;
    }
}

impl Tape {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn value(&self, t: Tensor) -> &DenseMatrix {
        &self.values[t.id]
    }

    /// Gradient of the last `backward` loss w.r.t. `t`; all-zero before
    /// backward runs.
    pub fn grad(&self, t: Tensor) -> &DenseMatrix {
        &self.grads[t.id]
    }

    fn push(&mut self, op: Op, value: DenseMatrix) -> Tensor {
        let (rows, cols) = value.shape();
        let id = self.ops.len();
        self.grads.push(DenseMatrix::zeros(rows, cols));
        self.values.push(value);
        self.ops.push(op);
        Tensor { id, rows, cols }
    }

    /// Leaf node holding `value` (parameter or data).
    pub fn input(&mut self, value: DenseMatrix) -> Tensor {
        self.push(Op::Input, value)
    }

    pub fn matmul(&mut self, a: Tensor, b: Tensor) -> Result<Tensor> {
        let value = self.values[a.id].matmul(&self.values[b.id])?;
        Ok(self.push(Op::MatMul { a: a.id, b: b.id }, value))
    }

    pub fn add(&mut self, a: Tensor, b: Tensor) -> Result<Tensor> {
        let value = self.values[a.id].add(&self.values[b.id])?;
        Ok(self.push(Op::Add { a: a.id, b: b.id }, value))
    }

    /// Adds a 1 x c bias row to every row of an n x c matrix.
    pub fn add_row_broadcast(&mut self, a: Tensor, bias: Tensor) -> Result<Tensor> {
        if bias.rows != 1 || bias.cols != a.cols {
            return Err(CoreError::DimensionMismatch {
                left_rows: a.rows,
                left_cols: a.cols,
                right_rows: bias.rows,
                right_cols: bias.cols,
            });
        }
        let mut value = self.values[a.id].clone();
        let brow = self.values[bias.id].row(0).to_vec();
        for i in 0..value.rows() {
            for (v, b) in value.row_mut(i).iter_mut().zip(&brow) {
                *v += b;
            }
        }
        Ok(self.push(Op::AddRowBroadcast { a: a.id, bias: bias.id }, value))
    }

    pub fn scale(&mut self, a: Tensor, factor: f64) -> Result<Tensor> {
        let value = self.values[a.id].scale(factor)?;
        Ok(self.push(Op::Scale { a: a.id, factor }, value))
    }

    pub fn neg(&mut self, a: Tensor) -> Result<Tensor> {
        self.scale(a, -1.0)
    }

    pub fn transpose(&mut self, a: Tensor) -> Result<Tensor> {
        let value = self.values[a.id].transpose();
        Ok(self.push(Op::Transpose { a: a.id }, value))
    }

    pub fn tanh(&mut self, a: Tensor) -> Result<Tensor> {
        let value = self.values[a.id].map(f64::tanh, "tanh")?;
        Ok(self.push(Op::Tanh { a: a.id }, value))
    }

    pub fn exp(&mut self, a: Tensor) -> Result<Tensor> {
        let value = self.values[a.id].map(f64::exp, "exp")?;
        Ok(self.push(Op::Exp { a: a.id }, value))
    }

    pub fn row_softmax(&mut self, a: Tensor, temperature: f64) -> Result<Tensor> {
        let value = matrix::row_softmax(&self.values[a.id], temperature)?;
        Ok(self.push(Op::RowSoftmax { a: a.id, temperature }, value))
    }

    pub fn pairwise_sqdist(&mut self, a: Tensor) -> Result<Tensor> {
        let value = matrix::pairwise_sqdist(&self.values[a.id])?;
        Ok(self.push(Op::PairwiseSqDist { a: a.id }, value))
    }

    /// Mean cross-entropy of row-wise logits against integer labels,
    /// fused with the softmax for a stable gradient.
    pub fn cross_entropy(&mut self, logits: Tensor, labels: &[usize]) -> Result<Tensor> {
        if labels.len() != logits.rows {
            return Err(CoreError::InvalidParameter(format!(
                "{} labels for {} logit rows",
                labels.len(),
                logits.rows
            )));
        }
        if let Some(&bad) = labels.iter().find(|&&y| y >= logits.cols) {
            return Err(CoreError::InvalidParameter(format!(
                "label {bad} out of range for {} classes",
                logits.cols
            )));
        }
        let probs = matrix::row_softmax(&self.values[logits.id], 1.0)?;
        let mut loss = 0.0;
        for (i, &y) in labels.iter().enumerate() {
            loss -= probs.get(i, y).ln();
        }
        loss /= labels.len() as f64;
        let value = DenseMatrix::from_vec(1, 1, vec![loss])?;
        Ok(self.push(
            Op::CrossEntropy {
                logits: logits.id,
                labels: labels.to_vec(),
            },
            value,
        ))
    }

    /// Reverse sweep from a scalar loss; gradients accumulate additively
    /// into every reachable node (shared parents sum contributions).
    pub fn backward(&mut self, loss: Tensor) -> Result<()> {
        if loss.rows != 1 || loss.cols != 1 {
            return Err(CoreError::NonScalarLoss {
                rows: loss.rows,
                cols: loss.cols,
            });
        }
        for g in &mut self.grads {
            for v in g.values_mut() {
                *v = 0.0;
            }
        }
        self.grads[loss.id].set(0, 0, 1.0);

        for i in (0..=loss.id).rev() {
            let op = self.ops[i].clone();
            let (parent_grads, rest) = self.grads.split_at_mut(i);
            let g = &rest[0];
            if g.max_abs() == 0.0 {
                continue;
            }
            match op {
                Op::Input => {}
                Op::MatMul { a, b } => {
                    let ga = g.matmul(&self.values[b].transpose())?;
                    add_into(&mut parent_grads[a], &ga);
                    let gb = self.values[a].transpose().matmul(g)?;
                    add_into(&mut parent_grads[b], &gb);
                }
                Op::Add { a, b } => {
                    add_into(&mut parent_grads[a], g);
                    add_into(&mut parent_grads[b], g);
                }
                Op::AddRowBroadcast { a, bias } => {
                    add_into(&mut parent_grads[a], g);
                    let gb = parent_grads[bias].row_mut(0);
                    for r in 0..g.rows() {
                        for (dst, &v) in gb.iter_mut().zip(g.row(r)) {
                            *dst += v;
                        }
                    }
                }
                Op::Scale { a, factor } => {
                    let ga = g.scale(factor)?;
                    add_into(&mut parent_grads[a], &ga);
                }
                Op::Transpose { a } => {
                    let ga = g.transpose();
                    add_into(&mut parent_grads[a], &ga);
                }
                Op::Tanh { a } => {
                    let y = &self.values[i];
                    let ga = parent_grads[a].values_mut();
                    for (k, (&gv, &yv)) in g.values().iter().zip(y.values()).enumerate() {
                        ga[k] += gv * (1.0 - yv * yv);
                    }
                }
                Op::Exp { a } => {
                    let y = &self.values[i];
                    let ga = parent_grads[a].values_mut();
                    for (k, (&gv, &yv)) in g.values().iter().zip(y.values()).enumerate() {
                        ga[k] += gv * yv;
                    }
                }
                Op::RowSoftmax { a, temperature } => {
                    let s = &self.values[i];
                    let ga = &mut parent_grads[a];
                    for r in 0..s.rows() {
                        let mut dot = 0.0;
                        for (gs, ss) in g.row(r).iter().zip(s.row(r)) {
                            dot += gs * ss;
                        }
                        for c in 0..s.cols() {
                            let v = s.get(r, c) * (g.get(r, c) - dot) / temperature;
                            ga.set(r, c, ga.get(r, c) + v);
                        }
                    }
                }
                Op::PairwiseSqDist { a } => {
                    // d F_ij / d z = 2 (z_i - z_j) on row i and the
                    // negative on row j; folded over G this becomes
                    // 2 (rowsum(G + G^T) .* Z - (G + G^T) Z).
                    let z = &self.values[a];
                    let n = z.rows();
                    let mut m = g.clone();
                    for r in 0..n {
                        for c in 0..n {
                            m.set(r, c, g.get(r, c) + g.get(c, r));
                        }
                    }
                    let msums = m.row_sums();
                    let mz = m.matmul(z)?;
                    let ga = &mut parent_grads[a];
                    for r in 0..n {
                        for c in 0..z.cols() {
                            let v = 2.0 * (msums[r] * z.get(r, c) - mz.get(r, c));
                            ga.set(r, c, ga.get(r, c) + v);
                        }
                    }
                }
                Op::CrossEntropy { logits, labels } => {
                    let gscalar = g.get(0, 0);
                    let probs = matrix::row_softmax(&self.values[logits], 1.0)?;
                    let n = labels.len() as f64;
                    let gl = &mut parent_grads[logits];
                    for (r, &y) in labels.iter().enumerate() {
                        for c in 0..probs.cols() {
                            let onehot = if c == y { 1.0 } else { 0.0 };
                            let v = gscalar * (probs.get(r, c) - onehot) / n;
                            gl.set(r, c, gl.get(r, c) + v);
                        }
                    }
                }
            }
        }
        Ok(())
    }
}
