//! Deterministic random source: splitmix64-seeded xoshiro256++ with
//! Box-Muller normals.
//!
//! Sub-streams are derived from `(seed, label)` so that adding a new
//! randomized component never perturbs the draws of an existing one.
//! The generator is fixed by contract; identical seeds must reproduce
//! identical streams across runs and across language ports.

use crate::error::Result;
use crate::matrix::DenseMatrix;

#[inline]
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// FNV-1a over the label bytes; folds a component name into the seed.
fn label_hash(label: &str) -> u64 {
    let mut h: u64 = 0xCBF2_9CE4_8422_2325;
    for b in label.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    h
}

/// Deterministic generator state (xoshiro256++), plus a cached spare
/// normal from the Box-Muller pair.
#[derive(Debug, Clone)]
pub struct RandomSource {
    seed: u64,
    state: [u64; 4],
    spare_normal: Option<f64>,
}

impl RandomSource {
    /// Root stream for a seed.
    pub fn new(seed: u64) -> Self {
        let mut sm = seed;
        let state = [
            splitmix64(&mut sm),
            splitmix64(&mut sm),
            splitmix64(&mut sm),
            splitmix64(&mut sm),
        ];
        Self {
            seed,
            state,
            spare_normal: None,
        }
    }

    /// Component sub-stream derived from `(seed, label)`.
    pub fn stream(seed: u64, label: &str) -> Self {
        Self::new(seed ^ label_hash(label))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Next raw 64-bit output (xoshiro256++).
    pub fn next_u64(&mut self) -> u64 {
        let s = &mut self.state;
        let result = s[0]
            .wrapping_add(s[3])
            .rotate_left(23)
            .wrapping_add(s[0]);
        let t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = s[3].rotate_left(45);
        result
    }

    /// Uniform draw in [0, 1) with 53-bit resolution.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform draw in [lo, hi).
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform integer in [0, n).
    pub fn index(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        // Rejection-free modulo is fine here: n is tiny versus 2^64 and
        // determinism matters more than the negligible bias.
        (self.next_u64() % n as u64) as usize
    }

    /// Standard normal via Box-Muller; pairs are generated together and
    /// the second value is cached.
    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        // u1 in (0, 1] so the log is finite.
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        self.spare_normal = Some(r * theta.sin());
        r * theta.cos()
    }

    /// Matrix of i.i.d. standard normals, filled in row-major order.
    pub fn normal_matrix(&mut self, rows: usize, cols: usize) -> Result<DenseMatrix> {
        let values = (0..rows * cols).map(|_| self.normal()).collect();
        DenseMatrix::from_vec(rows, cols, values)
    }

    /// Matrix of normals scaled by `std`.
    pub fn normal_matrix_scaled(&mut self, rows: usize, cols: usize, std: f64) -> Result<DenseMatrix> {
        let values = (0..rows * cols).map(|_| self.normal() * std).collect();
        DenseMatrix::from_vec(rows, cols, values)
    }
}
