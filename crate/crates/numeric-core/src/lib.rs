//! Numeric substrate for the similarity/attention laboratory: dense
//! matrices, a pinned deterministic RNG, tape-based reverse-mode
//! autodiff, Adam, and finite-difference gradient checking.
//!
//! Everything is 64-bit and sequentially reduced in a fixed order, so
//! identical inputs give bitwise-identical outputs run to run.

pub mod adam;
pub mod autodiff;
pub mod error;
pub mod gradcheck;
pub mod linalg;
pub mod matrix;
pub mod rng;

pub use adam::{adam_update, AdamState, ADAM_BETA1, ADAM_BETA2, ADAM_EPS};
pub use autodiff::{Tape, Tensor};
pub use error::{CoreError, Result};
pub use gradcheck::grad_check;
pub use matrix::{pairwise_sqdist, row_softmax, DenseMatrix};
pub use rng::RandomSource;
