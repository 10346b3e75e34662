//! Gradient checking against central finite differences.

use crate::autodiff::{Tape, Tensor};
use crate::error::Result;
use crate::matrix::DenseMatrix;

/// Compares reverse-mode gradients with central finite differences.
///
/// `build` receives a fresh tape plus one tensor per parameter and must
/// return the scalar loss. It is called once for the autodiff pass and
/// twice per parameter entry for the finite-difference pass, so it has
/// to be pure and deterministic.
///
/// Returns the max over parameter entries of
/// `|autodiff - central| / max(1e-8, |central|)`.
pub fn grad_check<F>(params: &[DenseMatrix], h: f64, build: F) -> Result<f64>
where
    F: Fn(&mut Tape, &[Tensor]) -> Result<Tensor>,
{
    let eval = |ps: &[DenseMatrix]| -> Result<f64> {
        let mut tape = Tape::new();
        let handles: Vec<Tensor> = ps.iter().map(|p| tape.input(p.clone())).collect();
        let loss = build(&mut tape, &handles)?;
        Ok(tape.value(loss).get(0, 0))
    };

    // Autodiff pass.
    let mut tape = Tape::new();
    let handles: Vec<Tensor> = params.iter().map(|p| tape.input(p.clone())).collect();
    let loss = build(&mut tape, &handles)?;
    tape.backward(loss)?;
    let auto_grads: Vec<DenseMatrix> = handles.iter().map(|&t| tape.grad(t).clone()).collect();

    let mut worst = 0.0_f64;
    let mut work: Vec<DenseMatrix> = params.to_vec();
    for (pi, param) in params.iter().enumerate() {
        for k in 0..param.values().len() {
            let orig = param.values()[k];
            work[pi].values_mut()[k] = orig + h;
            let up = eval(&work)?;
            work[pi].values_mut()[k] = orig - h;
            let down = eval(&work)?;
            work[pi].values_mut()[k] = orig;
            let central = (up - down) / (2.0 * h);
            let auto = auto_grads[pi].values()[k];
            let rel = (auto - central).abs() / central.abs().max(1e-8);
            worst = worst.max(rel);
        }
    }
    Ok(worst)
}
