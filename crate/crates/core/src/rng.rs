//! Seeded randomness for ensembles and scans.
//!
//! The generator is SplitMix64 (Steele, Lea & Flood, "Fast splittable
//! pseudorandom number generators", OOPSLA 2014): a counter-based 64-bit
//! generator whose `i`-th output is `mix64(seed + (i+1) * GOLDEN)`. The
//! algorithm identifier for replay purposes is `"splitmix64"`. Gaussian
//! variates come from the Box-Muller transform on two uniform draws, so any
//! reimplementation of this module from its documentation reproduces the
//! exact streams.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::linalg::CMatrix;

/// Weyl increment of SplitMix64.
pub const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// Algorithm identifier recorded in scan outputs.
pub const RNG_ALGORITHM: &str = "splitmix64";

/// Finalizer of SplitMix64.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-sample sub-seed: `mix64(base + (index+1) * GOLDEN)`. Samples drawn
/// from distinct sub-seeds are independent streams, so scans can evaluate
/// samples in any order or in parallel.
#[inline]
pub fn sub_seed(base: u64, index: u64) -> u64 {
    mix64(base.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN)))
}

/// SplitMix64 stream.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix64(self.state)
    }

    /// Uniform in `[0, 1)` from the top 53 bits.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `(0, 1]`.
    #[inline]
    pub fn next_f64_open_closed(&mut self) -> f64 {
        1.0 - self.next_f64()
    }

    /// Two independent standard normals via Box-Muller.
    pub fn next_gaussian_pair(&mut self) -> (f64, f64) {
        let u1 = self.next_f64_open_closed();
        let u2 = self.next_f64();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = std::f64::consts::TAU * u2;
        (r * theta.cos(), r * theta.sin())
    }

    /// Standard complex normal: real and imaginary parts are independent
    /// `N(0, 1/2)`, so `E|z|^2 = 1`.
    pub fn next_complex_gaussian(&mut self) -> Complex64 {
        let (x, y) = self.next_gaussian_pair();
        Complex64::new(x, y) * std::f64::consts::FRAC_1_SQRT_2
    }
}

/// Matrix with independent standard complex normal entries.
pub fn gaussian_matrix(rows: usize, cols: usize, rng: &mut SplitMix64) -> CMatrix {
    DMatrix::from_fn(rows, cols, |_, _| rng.next_complex_gaussian())
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of the
/// diagonal of R absorbed into Q.
pub fn haar_unitary(dim: usize, rng: &mut SplitMix64) -> CMatrix {
    let g = gaussian_matrix(dim, dim, rng);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 {
            rjj / rjj.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}
