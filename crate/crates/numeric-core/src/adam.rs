//! Adam with bias correction and decoupled weight decay.

use crate::error::{CoreError, Result};
use crate::matrix::DenseMatrix;

pub const ADAM_BETA1: f64 = 0.9;
pub const ADAM_BETA2: f64 = 0.999;
pub const ADAM_EPS: f64 = 1e-8;

/// First/second moment buffers plus the shared step counter.
#[derive(Debug, Clone)]
pub struct AdamState {
    m: Vec<DenseMatrix>,
    v: Vec<DenseMatrix>,
    t: u64,
}

impl AdamState {
    /// Zero-initialized state matching the given parameter shapes.
    pub fn new(params: &[DenseMatrix]) -> Self {
        Self {
            m: params
                .iter()
                .map(|p| DenseMatrix::zeros(p.rows(), p.cols()))
                .collect(),
            v: params
                .iter()
                .map(|p| DenseMatrix::zeros(p.rows(), p.cols()))
                .collect(),
            t: 0,
        }
    }

    pub fn step_count(&self) -> u64 {
        self.t
    }
}

/// One optimizer step over all parameters.
///
/// Weight decay is decoupled: `p <- p - lr * wd * p` happens before the
/// bias-corrected Adam update.
pub fn adam_update(
    params: &mut [DenseMatrix],
    grads: &[DenseMatrix],
    state: &mut AdamState,
    lr: f64,
    weight_decay: f64,
) -> Result<()> {
    if !(lr > 0.0) {
        return Err(CoreError::InvalidParameter(format!(
            "learning rate must be positive, got {lr}"
        )));
    }
    if weight_decay < 0.0 {
        return Err(CoreError::InvalidParameter(format!(
            "weight decay must be nonnegative, got {weight_decay}"
        )));
    }
    if params.len() != grads.len() || params.len() != state.m.len() {
        return Err(CoreError::InvalidParameter(format!(
            "parameter/gradient/state count mismatch: {} vs {} vs {}",
            params.len(),
            grads.len(),
            state.m.len()
        )));
    }
    state.t += 1;
    let t = state.t as i32;
    let bc1 = 1.0 - ADAM_BETA1.powi(t);
    let bc2 = 1.0 - ADAM_BETA2.powi(t);

    for (idx, (p, g)) in params.iter_mut().zip(grads).enumerate() {
        if p.shape() != g.shape() {
            return Err(CoreError::DimensionMismatch {
                left_rows: p.rows(),
                left_cols: p.cols(),
                right_rows: g.rows(),
                right_cols: g.cols(),
            });
        }
        let m = state.m[idx].values_mut();
        let v = state.v[idx].values_mut();
        let pv = p.values_mut();
        for k in 0..pv.len() {
            if weight_decay > 0.0 {
                pv[k] -= lr * weight_decay * pv[k];
            }
            let gk = g.values()[k];
            m[k] = ADAM_BETA1 * m[k] + (1.0 - ADAM_BETA1) * gk;
            v[k] = ADAM_BETA2 * v[k] + (1.0 - ADAM_BETA2) * gk * gk;
            let mhat = m[k] / bc1;
            let vhat = v[k] / bc2;
            pv[k] -= lr * mhat / (vhat.sqrt() + ADAM_EPS);
        }
    }
    Ok(())
}
