//! Numerical tolerances used throughout the crate.
//!
//! Every inequality and invariant in this crate is exact in real arithmetic;
//! floating point requires declared slack. All slack lives here so that a
//! caller can tighten or loosen any check without touching the algorithms.

use serde::{Deserialize, Serialize};

/// The single configuration record of tolerances. Every checking operation
/// takes a `&Tolerances`; `Tolerances::default()` gives the documented
/// defaults.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative hermiticity tolerance: a matrix `X` counts as Hermitian when
    /// `maxabs(X - X†) <= max(hermiticity_rel * maxabs(X), hermiticity_floor)`.
    pub hermiticity_rel: f64,
    /// Absolute floor for the hermiticity check.
    pub hermiticity_floor: f64,
    /// Largest imaginary part tolerated when the trace of a map is read off
    /// as a real number.
    pub trace_imag: f64,
    /// Max-abs deviation of `Φ†(I)` from `I` tolerated for a map to count as
    /// trace-preserving.
    pub trace_preserving: f64,
    /// Acceptance radius when matching a requested eigenvalue against the
    /// computed spectrum.
    pub eigenvalue_match: f64,
    /// Relative residual `‖Φ(X) − λX‖ / ‖X‖` tolerated for an approximate
    /// eigenvector.
    pub eigenvector_residual: f64,
    /// Residual `‖Φ(ω) − ω‖` tolerated for a computed fixed point.
    pub fixed_point_residual: f64,
    /// Negative eigenvalue slack allowed on a computed fixed point.
    pub fixed_point_min_eig: f64,
    /// Strict positive-definiteness threshold on the smallest eigenvalue.
    pub positive_definite: f64,
    /// A map counts as completely positive when the smallest Choi eigenvalue
    /// is at least `-cp_min_eig`.
    pub cp_min_eig: f64,
    /// Slack used to classify a non-strict inequality as satisfied:
    /// `satisfied == (slack >= -bound_slack)`.
    pub bound_slack: f64,
    /// A witness value below `-witness_certify` certifies a positivity
    /// violation.
    pub witness_certify: f64,
    /// Seesaw convergence: stop once the objective improves by less than
    /// this amount.
    pub seesaw_improvement: f64,
    /// Iteration cap of a single seesaw run.
    pub seesaw_max_iters: usize,
    /// Max-abs deviation of the Gram matrix from `I` tolerated on an
    /// orthonormal basis.
    pub basis_gram: f64,
    /// Largest imaginary part tolerated on transition-matrix entries.
    pub transition_imag: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermiticity_rel: 1e-12,
            hermiticity_floor: 1e-14,
            trace_imag: 1e-9,
            trace_preserving: 1e-9,
            eigenvalue_match: 1e-8,
            eigenvector_residual: 1e-8,
            fixed_point_residual: 1e-9,
            fixed_point_min_eig: 1e-10,
            positive_definite: 1e-10,
            cp_min_eig: 1e-9,
            bound_slack: 1e-9,
            witness_certify: 1e-8,
            seesaw_improvement: 1e-12,
            seesaw_max_iters: 500,
            basis_gram: 1e-12,
            transition_imag: 1e-10,
        }
    }
}

impl Tolerances {
    /// Effective hermiticity tolerance for a matrix with the given max-abs
    /// entry.
    pub fn hermiticity(&self, maxabs: f64) -> f64 {
        (self.hermiticity_rel * maxabs).max(self.hermiticity_floor)
    }
}
