//! Eigenvalue extraction and the map-level inequality checks.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{MapError, Result};
use crate::linalg::{eigenvalues, sort_eigenvalues, CMatrix};
use crate::report::{BoundReport, InequalityId};
use crate::superop::Superoperator;

/// Spectrum of a map together with the quantities entering the bounds.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumReport {
    /// Eigenvalues sorted by (Re ascending, Im ascending).
    pub eigenvalues: Vec<Complex64>,
    pub min_re: f64,
    pub max_re: f64,
    pub spectral_radius: f64,
    /// Real part of the eigenvalue sum; for Hermiticity-preserving maps the
    /// imaginary part is below 1e-9.
    pub trace: f64,
}

impl SpectrumReport {
    pub fn from_eigenvalues(eigs: Vec<Complex64>) -> Self {
        let eigenvalues = sort_eigenvalues(eigs);
        let min_re = eigenvalues
            .iter()
            .map(|z| z.re)
            .fold(f64::INFINITY, f64::min);
        let max_re = eigenvalues
            .iter()
            .map(|z| z.re)
            .fold(f64::NEG_INFINITY, f64::max);
        let spectral_radius = eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let trace = eigenvalues.iter().sum::<Complex64>().re;
        Self {
            eigenvalues,
            min_re,
            max_re,
            spectral_radius,
            trace,
        }
    }

    /// True when the eigenvalue multiset is closed under complex
    /// conjugation within `tol`, as it is for Hermiticity-preserving maps.
    pub fn conjugation_closed(&self, tol: f64) -> bool {
        let conjugated: Vec<Complex64> = self.eigenvalues.iter().map(|z| z.conj()).collect();
        crate::linalg::multisets_match(&self.eigenvalues, &conjugated, tol)
    }
}

/// Eigenvalues of the transfer matrix of Φ.
pub fn spectrum(phi: &Superoperator) -> Result<SpectrumReport> {
    spectrum_of_transfer(phi.transfer())
}

/// Shared with the generator module, which stores transfer matrices of its
/// own.
pub fn spectrum_of_transfer(transfer: &CMatrix) -> Result<SpectrumReport> {
    Ok(SpectrumReport::from_eigenvalues(eigenvalues(transfer)?))
}

/// tr(Φ) ≤ d·min Re σ(Φ) + d² − d, the bound valid for every 2-positive
/// trace-preserving map. The verdict reports whether the inequality holds;
/// it does not assert 2-positivity.
pub fn check_map_bound(phi: &Superoperator, tol: &Tolerances) -> Result<BoundReport> {
    let dev = phi.trace_preservation_deviation();
    if dev > tol.trace_preserving {
        return Err(MapError::NotTracePreserving { deviation: dev });
    }
    let d = phi.dim() as f64;
    let lhs = phi.trace(tol)?;
    let report = spectrum(phi)?;
    let rhs = d * report.min_re + d * d - d;
    Ok(BoundReport::le(
        InequalityId::MapBound,
        lhs,
        rhs,
        tol.bound_slack,
    ))
}

/// tr(Φ) ≤ min Re σ(Φ) + d² − 1, the weaker bound valid for every positive
/// trace-preserving map.
pub fn check_trivial_bound(phi: &Superoperator, tol: &Tolerances) -> Result<BoundReport> {
    let d = phi.dim() as f64;
    let lhs = phi.trace(tol)?;
    let report = spectrum(phi)?;
    let rhs = report.min_re + d * d - 1.0;
    Ok(BoundReport::le(
        InequalityId::TrivialBound,
        lhs,
        rhs,
        tol.bound_slack,
    ))
}

/// Strict violation tr(Φ) > c·min Re σ(Φ) + d² − c for a coefficient
/// c > d; `satisfied` means the violation holds with margin above the
/// tolerance, demonstrating that the coefficient d cannot be improved.
pub fn check_optimality(phi: &Superoperator, c: f64, tol: &Tolerances) -> Result<BoundReport> {
    let d = phi.dim() as f64;
    if c <= d {
        return Err(MapError::InvalidParameter(format!(
            "optimality check requires c > d, got c = {c}, d = {d}"
        )));
    }
    let lhs = phi.trace(tol)?;
    let report = spectrum(phi)?;
    let rhs = c * report.min_re + d * d - c;
    Ok(BoundReport::strict_gt(
        InequalityId::Optimality,
        lhs,
        rhs,
        tol.bound_slack,
    ))
}

/// tr(Φ) ≤ d·min Re σ(Φ) + (d² − d)·max Re σ(Φ), the conjectured extension
/// beyond trace preservation. Both sides are homogeneous in Φ.
pub fn check_conjecture(phi: &Superoperator, tol: &Tolerances) -> Result<BoundReport> {
    let d = phi.dim() as f64;
    let lhs = phi.trace(tol)?;
    let report = spectrum(phi)?;
    let rhs = d * report.min_re + (d * d - d) * report.max_re;
    Ok(BoundReport::le(
        InequalityId::Conjecture,
        lhs,
        rhs,
        tol.bound_slack,
    ))
}
