//! Transition matrices of a map relative to an orthonormal basis, the
//! trace inequality tr(Φ) ≤ d·tr(T_G), Hermitian eigenvectors, and
//! Schmidt-rank-2 witness vectors.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::config::Tolerances;
use crate::error::{MapError, Result};
use crate::linalg::{
    eigenvalues, fro_norm, hermitian_eigen, maxabs, nullspace_vector, unvec, CMatrix, CVector,
};
use crate::report::{BoundReport, InequalityId};
use crate::rng::SplitMix64;
use crate::superop::{HermitianMatrix, Superoperator};

/// Orthonormal basis g_1..g_d of C^d, stored as the columns of a unitary.
#[derive(Debug, Clone)]
pub struct OrthonormalBasis {
    mat: CMatrix,
}

impl OrthonormalBasis {
    /// Validates that the Gram matrix is the identity within
    /// `tol.basis_gram`.
    pub fn from_columns(mat: CMatrix, tol: &Tolerances) -> Result<Self> {
        if mat.nrows() != mat.ncols() || mat.nrows() == 0 {
            return Err(MapError::DimensionMismatch(format!(
                "basis matrix must be square and nonempty, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let gram = mat.adjoint() * &mat;
        let dev = maxabs(&(gram - CMatrix::identity(mat.nrows(), mat.nrows())));
        if dev > tol.basis_gram {
            return Err(MapError::InvalidParameter(format!(
                "columns are not orthonormal (Gram deviation {dev:.3e})"
            )));
        }
        Ok(Self { mat })
    }

    pub fn standard(dim: usize) -> Self {
        Self {
            mat: CMatrix::identity(dim, dim),
        }
    }

    /// Haar-random basis.
    pub fn haar(dim: usize, rng: &mut SplitMix64) -> Self {
        Self {
            mat: crate::rng::haar_unitary(dim, rng),
        }
    }

    /// Orthonormal eigenbasis of a Hermitian matrix, together with the
    /// eigenvalues (ascending) so that X = Σ xⱼ |gⱼ⟩⟨gⱼ|.
    pub fn from_hermitian_eigenbasis(x: &HermitianMatrix) -> Result<(Self, Vec<f64>)> {
        let (values, vectors) = hermitian_eigen(x.matrix())?;
        Ok((Self { mat: vectors }, values))
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn vector(&self, j: usize) -> CVector {
        self.mat.column(j).into_owned()
    }
}

/// Transition matrix (T_G)ⱼₖ = ⟨gⱼ|Φ(|gₖ⟩⟨gₖ|)|gⱼ⟩. Column-stochastic for
/// positive trace-preserving maps; entries real for Hermiticity-preserving
/// maps.
#[derive(Debug, Clone)]
pub struct TransitionMatrix {
    entries: DMatrix<f64>,
    max_imag: f64,
}

impl TransitionMatrix {
    pub fn new(phi: &Superoperator, basis: &OrthonormalBasis) -> Result<Self> {
        let d = phi.dim();
        if basis.dim() != d {
            return Err(MapError::DimensionMismatch(format!(
                "transition matrix: map dimension {d} but basis dimension {}",
                basis.dim()
            )));
        }
        let mut entries = DMatrix::<f64>::zeros(d, d);
        let mut max_imag = 0.0f64;
        for k in 0..d {
            let g_k = basis.vector(k);
            let image = phi.apply(&(&g_k * g_k.adjoint()))?;
            for j in 0..d {
                let g_j = basis.vector(j);
                let value = (g_j.adjoint() * &image * &g_j)[(0, 0)];
                entries[(j, k)] = value.re;
                max_imag = max_imag.max(value.im.abs());
            }
        }
        Ok(Self { entries, max_imag })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace()
    }

    /// Largest imaginary part discarded when the entries were read off.
    pub fn max_imag(&self) -> f64 {
        self.max_imag
    }

    pub fn min_entry(&self) -> f64 {
        self.entries.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Largest deviation of a column sum from 1.
    pub fn column_sum_deviation(&self) -> f64 {
        (0..self.dim())
            .map(|k| (self.entries.column(k).sum() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// tr(Φ) ≤ d·tr(T_G), valid for every 2-positive map and every orthonormal
/// basis; trace preservation is not required. The trace read-off raises on
/// maps that are not Hermiticity-preserving.
pub fn check_lemma_tg(
    phi: &Superoperator,
    basis: &OrthonormalBasis,
    tol: &Tolerances,
) -> Result<BoundReport> {
    let lhs = phi.trace(tol)?;
    let t = TransitionMatrix::new(phi, basis)?;
    let rhs = phi.dim() as f64 * t.trace();
    Ok(BoundReport::le(
        InequalityId::LemmaTg,
        lhs,
        rhs,
        tol.bound_slack,
    ))
}

/// The trace expression Σⱼₖ ⟨gₖ|Φ(|gₖ⟩⟨gⱼ|)|gⱼ⟩, which is basis independent
/// and equals the transfer-matrix trace. Kept as an independent route for
/// cross-checking.
pub fn hs_trace_in_basis(phi: &Superoperator, basis: &OrthonormalBasis) -> Result<Complex64> {
    let d = phi.dim();
    if basis.dim() != d {
        return Err(MapError::DimensionMismatch(format!(
            "trace in basis: map dimension {d} but basis dimension {}",
            basis.dim()
        )));
    }
    let mut total = Complex64::default();
    for j in 0..d {
        let g_j = basis.vector(j);
        for k in 0..d {
            let g_k = basis.vector(k);
            let image = phi.apply(&(&g_k * g_j.adjoint()))?;
            total += (g_k.adjoint() * image * &g_j)[(0, 0)];
        }
    }
    Ok(total)
}

/// The cross term ⟨gₖ|Φ(|gₖ⟩⟨gⱼ|)|gⱼ⟩ entering the pairwise bound
/// 2·Re⟨gₖ|Φ(|gₖ⟩⟨gⱼ|)|gⱼ⟩ ≤ (T_G)ⱼⱼ + (T_G)ₖₖ of 2-positive maps.
pub fn transition_cross_term(
    phi: &Superoperator,
    basis: &OrthonormalBasis,
    j: usize,
    k: usize,
) -> Result<Complex64> {
    let g_j = basis.vector(j);
    let g_k = basis.vector(k);
    let image = phi.apply(&(&g_k * g_j.adjoint()))?;
    Ok((g_k.adjoint() * image * &g_j)[(0, 0)])
}

/// A nonzero Hermitian X with Φ(X) ≈ λX for a real eigenvalue λ of a
/// Hermiticity-preserving map, built from a transfer-matrix eigenvector Y
/// as (Y+Y†)/2 or (i/2)(Y−Y†), whichever is nonzero and passes the residual
/// check. The requested λ is matched to the computed spectrum by nearest
/// distance with acceptance radius `tol.eigenvalue_match`.
pub fn hermitian_eigenvector(
    phi: &Superoperator,
    lambda: f64,
    tol: &Tolerances,
) -> Result<HermitianMatrix> {
    let d = phi.dim();
    let target = Complex64::new(lambda, 0.0);
    let eigs = eigenvalues(phi.transfer())?;
    let nearest = eigs
        .iter()
        .copied()
        .min_by(|a, b| (a - target).norm().total_cmp(&(b - target).norm()))
        .ok_or_else(|| MapError::DimensionMismatch("empty spectrum".into()))?;
    if (nearest - target).norm() > tol.eigenvalue_match {
        return Err(MapError::EigenvalueNotFound {
            requested: lambda,
            nearest_re: nearest.re,
            nearest_im: nearest.im,
            radius: tol.eigenvalue_match,
        });
    }

    let shifted = phi.transfer() - CMatrix::identity(d * d, d * d).scale(lambda);
    let (v, _) = nullspace_vector(&shifted)?;
    let y = unvec(&v, d);
    let herm = (&y + y.adjoint()).scale(0.5);
    let anti = (&y - y.adjoint()).map(|z| z * Complex64::new(0.0, 0.5));

    let mut candidates = [herm, anti];
    candidates.sort_by(|a, b| fro_norm(b).total_cmp(&fro_norm(a)));
    for cand in candidates {
        let norm = fro_norm(&cand);
        if norm < 1e-10 {
            continue;
        }
        let x = cand.unscale(norm);
        let residual = fro_norm(&(phi.apply(&x)? - x.scale(lambda)));
        if residual <= tol.eigenvector_residual {
            return HermitianMatrix::new(x, tol);
        }
    }
    Err(MapError::DegenerateInput(format!(
        "no Hermitization of the eigenvector at {lambda} passes the residual check"
    )))
}

/// Result of diagonalizing a Hermitian eigenvector and re-checking the
/// trace inequality in its eigenbasis.
#[derive(Debug, Clone)]
pub struct EigenbasisCheck {
    pub report: BoundReport,
    /// ‖T_G x − λx‖ for the eigenvalue vector x of the Hermitian
    /// eigenvector.
    pub residual: f64,
}

/// Diagonalizes a Hermitian eigenvector X = Σ xⱼ|gⱼ⟩⟨gⱼ| of Φ at λ, checks
/// that T_G x = λx in that eigenbasis, and evaluates the trace inequality
/// there.
pub fn eigenbasis_transition_check(
    phi: &Superoperator,
    lambda: f64,
    tol: &Tolerances,
) -> Result<EigenbasisCheck> {
    let x = hermitian_eigenvector(phi, lambda, tol)?;
    let (basis, values) = OrthonormalBasis::from_hermitian_eigenbasis(&x)?;
    let t = TransitionMatrix::new(phi, &basis)?;
    let xv = DVector::from_vec(values);
    let residual = (t.entries() * &xv - xv.scale(lambda)).norm();
    let report = check_lemma_tg(phi, &basis, tol)?;
    Ok(EigenbasisCheck { report, residual })
}

/// A Schmidt-rank ≤ 2 witness vector ψ = a₁⊗b₁ + a₂⊗b₂ in C^d ⊗ C^d,
/// normalized, paired against the Choi matrix. A rank-1 witness has zero
/// a₂, b₂.
#[derive(Debug, Clone)]
pub struct Rank2Witness {
    pub a1: CVector,
    pub a2: CVector,
    pub b1: CVector,
    pub b2: CVector,
    /// a₁⊗b₁ + a₂⊗b₂, unit norm.
    pub psi: CVector,
    /// ⟨ψ|C(Φ)|ψ⟩ for the map the witness was evaluated against.
    pub value: f64,
}

impl Rank2Witness {
    /// Builds the witness and evaluates it against `phi` through the
    /// extended-map pairing Σᵢᵢ' ⟨bᵢ|Φ(|conj(aᵢ)⟩⟨conj(aᵢ')|)|bᵢ'⟩, which is
    /// an independent route to ⟨ψ|C(Φ)|ψ⟩.
    pub fn new(
        phi: &Superoperator,
        a1: CVector,
        b1: CVector,
        a2: CVector,
        b2: CVector,
    ) -> Result<Self> {
        let d = phi.dim();
        for (name, v) in [("a1", &a1), ("a2", &a2), ("b1", &b1), ("b2", &b2)] {
            if v.len() != d {
                return Err(MapError::DimensionMismatch(format!(
                    "witness vector {name} has length {}, expected {d}",
                    v.len()
                )));
            }
        }
        let psi = a1.kronecker(&b1) + a2.kronecker(&b2);
        let norm = psi.norm();
        if norm < 1e-14 {
            return Err(MapError::InvalidParameter(
                "witness vector has zero norm".into(),
            ));
        }
        // fold the normalization into the a side so psi = a1⊗b1 + a2⊗b2
        // stays exact
        let a1 = a1.unscale(norm);
        let a2 = a2.unscale(norm);
        let psi = psi.unscale(norm);

        let mut value = Complex64::default();
        let pairs = [(&a1, &b1), (&a2, &b2)];
        for (a_i, b_i) in pairs {
            for (a_ip, b_ip) in pairs {
                // Σⱼₖ conj(aᵢ[j]) aᵢ'[k] |j⟩⟨k|
                let outer = a_i.map(|z| z.conj()) * a_ip.transpose();
                let image = phi.apply(&outer)?;
                value += (b_i.adjoint() * image * b_ip)[(0, 0)];
            }
        }
        Ok(Self {
            a1,
            a2,
            b1,
            b2,
            psi,
            value: value.re,
        })
    }

    /// Rank-1 witness ψ = a⊗b.
    pub fn rank1(phi: &Superoperator, a: CVector, b: CVector) -> Result<Self> {
        let d = phi.dim();
        let zero = CVector::zeros(d);
        Self::new(phi, a, b, zero.clone(), zero)
    }

    /// Schmidt rank of ψ, up to `tol` on the singular values of its
    /// coefficient matrix.
    pub fn schmidt_rank(&self, tol: f64) -> usize {
        let d = self.b1.len();
        let w = unvec(&self.psi, d);
        let svd = w.svd(false, false);
        svd.singular_values.iter().filter(|&&s| s > tol).count()
    }
}

/// Direct evaluation ⟨ψ|C(Φ)|ψ⟩ of a witness against the Choi matrix. For
/// Hermiticity-preserving maps the value is real; the imaginary part is
/// discarded. Nonnegativity for every Schmidt-rank ≤ 2 witness is
/// equivalent to 2-positivity of Φ.
pub fn rank2_witness_value(phi: &Superoperator, witness: &Rank2Witness) -> Result<f64> {
    let d = phi.dim();
    if witness.psi.len() != d * d {
        return Err(MapError::DimensionMismatch(format!(
            "witness lives on dimension {}, map on {d}",
            (witness.psi.len() as f64).sqrt()
        )));
    }
    let c = phi.choi();
    let value = (witness.psi.adjoint() * c.matrix() * &witness.psi)[(0, 0)];
    Ok(value.re)
}

/// Paired value ⟨ψ⁻|(id₂⊗Φ)(|ψ⁺⟩⟨ψ⁺|)|ψ⁻⟩ for ψ±ⱼₖ = |0⟩⊗gₖ ± |1⟩⊗gⱼ,
/// which is nonnegative for 2-positive maps and expands to
/// (T_G)ⱼⱼ + (T_G)ₖₖ − 2Re⟨gₖ|Φ(|gₖ⟩⟨gⱼ|)|gⱼ⟩.
pub fn paired_basis_witness_value(
    phi: &Superoperator,
    basis: &OrthonormalBasis,
    j: usize,
    k: usize,
) -> Result<f64> {
    let t = TransitionMatrix::new(phi, basis)?;
    let cross = transition_cross_term(phi, basis, j, k)?;
    Ok(t.entries()[(j, j)] + t.entries()[(k, k)] - 2.0 * cross.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Tolerances;
    use crate::positivity;
    use crate::rng::sub_seed;
    use crate::zoo;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn unit(d: usize, i: usize) -> CVector {
        let mut v = CVector::zeros(d);
        v[i] = Complex64::from(1.0);
        v
    }

    #[test]
    fn transition_of_identity_is_identity() {
        let phi = Superoperator::identity(3);
        let mut rng = SplitMix64::new(8);
        let basis = OrthonormalBasis::haar(3, &mut rng);
        let t = TransitionMatrix::new(&phi, &basis).unwrap();
        let dev = (t.entries() - DMatrix::<f64>::identity(3, 3)).abs().max();
        assert!(dev < 1e-12);
    }

    #[test]
    fn transition_of_depolarizing_is_flat() {
        let phi = Superoperator::completely_depolarizing(4);
        let mut rng = SplitMix64::new(9);
        let basis = OrthonormalBasis::haar(4, &mut rng);
        let t = TransitionMatrix::new(&phi, &basis).unwrap();
        for j in 0..4 {
            for k in 0..4 {
                assert!((t.entries()[(j, k)] - 0.25).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn transition_matrices_of_cptp_maps_are_column_stochastic() {
        for i in 0..5u64 {
            let phi = positivity::sample_cptp(3, 9, sub_seed(90, i)).unwrap();
            for b in 0..10u64 {
                let mut rng = SplitMix64::new(sub_seed(900 + i, b));
                let basis = OrthonormalBasis::haar(3, &mut rng);
                let t = TransitionMatrix::new(&phi, &basis).unwrap();
                assert!(t.min_entry() >= -1e-10);
                assert!(t.column_sum_deviation() <= 1e-10);
                assert!(t.max_imag() <= 1e-10);
            }
        }
    }

    #[test]
    fn lemma_bound_equality_for_identity() {
        let phi = Superoperator::identity(2);
        let report = check_lemma_tg(&phi, &OrthonormalBasis::standard(2), &tol()).unwrap();
        assert!((report.lhs - 4.0).abs() < 1e-12);
        assert!((report.rhs - 4.0).abs() < 1e-12);
        assert!(report.satisfied);
    }

    #[test]
    fn lemma_bound_holds_on_cptp_samples() {
        for i in 0..10u64 {
            let phi = positivity::sample_cptp(2, 4, sub_seed(91, i)).unwrap();
            let mut rng = SplitMix64::new(sub_seed(92, i));
            let basis = OrthonormalBasis::haar(2, &mut rng);
            let report = check_lemma_tg(&phi, &basis, &tol()).unwrap();
            assert!(report.slack >= -1e-9);
        }
    }

    #[test]
    fn lemma_bound_holds_on_cp_family_member() {
        // Φ_α at d = 3, α = 0.4 lies in the completely positive window
        let phi = zoo::tt_map(&zoo::TTParams::new(3, 0.4).unwrap());
        assert!(positivity::is_cp(&phi, &tol()).unwrap().is_cp);
        for b in 0..10u64 {
            let mut rng = SplitMix64::new(sub_seed(98, b));
            let basis = OrthonormalBasis::haar(3, &mut rng);
            let report = check_lemma_tg(&phi, &basis, &tol()).unwrap();
            assert!(report.slack >= -1e-9);
        }
    }

    #[test]
    fn trace_is_basis_independent() {
        let phi = positivity::sample_cptp(3, 9, 123).unwrap();
        let reference = phi.trace(&tol()).unwrap();
        for b in 0..10u64 {
            let mut rng = SplitMix64::new(sub_seed(93, b));
            let basis = OrthonormalBasis::haar(3, &mut rng);
            let via_basis = hs_trace_in_basis(&phi, &basis).unwrap();
            assert!((via_basis.re - reference).abs() < 1e-10);
            assert!(via_basis.im.abs() < 1e-10);
        }
    }

    #[test]
    fn pairwise_cross_terms_are_dominated_for_cptp() {
        for i in 0..5u64 {
            let phi = positivity::sample_cptp(4, 16, sub_seed(94, i)).unwrap();
            let mut rng = SplitMix64::new(sub_seed(95, i));
            let basis = OrthonormalBasis::haar(4, &mut rng);
            let t = TransitionMatrix::new(&phi, &basis).unwrap();
            for j in 0..4 {
                for k in (j + 1)..4 {
                    let cross = transition_cross_term(&phi, &basis, j, k).unwrap();
                    assert!(2.0 * cross.re <= t.entries()[(j, j)] + t.entries()[(k, k)] + 1e-10);
                    assert!(paired_basis_witness_value(&phi, &basis, j, k).unwrap() >= -1e-10);
                }
            }
        }
    }

    #[test]
    fn hermitian_eigenvector_of_unitary_conjugation_at_one() {
        let mut rng = SplitMix64::new(77);
        let u = crate::rng::haar_unitary(3, &mut rng);
        let phi = Superoperator::unitary_conjugation(&u).unwrap();
        let x = hermitian_eigenvector(&phi, 1.0, &tol()).unwrap();
        let residual = fro_norm(&(phi.apply(x.matrix()).unwrap() - x.matrix()));
        assert!(residual <= 1e-8);
    }

    #[test]
    fn hermitian_eigenvector_of_transpose_at_minus_one() {
        let phi = Superoperator::transpose_map(2);
        let x = hermitian_eigenvector(&phi, -1.0, &tol()).unwrap();
        // the antisymmetric eigenspace at −1 is spanned by σ_y; X is
        // Frobenius-normalized, so |⟨σ_y/√2, X⟩| must be 1
        let mut sigma_y = CMatrix::zeros(2, 2);
        sigma_y[(0, 1)] = Complex64::new(0.0, -1.0);
        sigma_y[(1, 0)] = Complex64::new(0.0, 1.0);
        let overlap = (sigma_y.adjoint() * x.matrix()).trace().norm()
            / (std::f64::consts::SQRT_2 * fro_norm(x.matrix()));
        assert!((overlap - 1.0).abs() < 1e-10, "overlap {overlap}");
    }

    #[test]
    fn hermitian_eigenvector_of_dephasing_at_zero() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut sigma_z = CMatrix::identity(2, 2);
        sigma_z[(1, 1)] = Complex64::from(-1.0);
        let phi = Superoperator::from_kraus(&[
            CMatrix::identity(2, 2).scale(s),
            sigma_z.clone().scale(s),
        ])
        .unwrap();
        let x = hermitian_eigenvector(&phi, 0.0, &tol()).unwrap();
        let residual = fro_norm(&phi.apply(x.matrix()).unwrap());
        assert!(residual <= 1e-8);
        // the kernel is spanned by σ_x and σ_y: X must be orthogonal to I
        // and σ_z
        let id_overlap = x.matrix().trace().norm();
        let z_overlap = (sigma_z.adjoint() * x.matrix()).trace().norm();
        assert!(id_overlap < 1e-10);
        assert!(z_overlap < 1e-10);
    }

    #[test]
    fn hermitian_eigenvector_rejects_absent_eigenvalue() {
        let phi = Superoperator::identity(2);
        assert!(matches!(
            hermitian_eigenvector(&phi, 0.5, &tol()),
            Err(MapError::EigenvalueNotFound { .. })
        ));
    }

    #[test]
    fn eigenbasis_check_transpose_d3() {
        let phi = Superoperator::transpose_map(3);
        let check = eigenbasis_transition_check(&phi, -1.0, &tol()).unwrap();
        assert!(check.residual <= 1e-10, "residual {}", check.residual);
        assert!((check.report.lhs - 3.0).abs() < 1e-12);
        assert!(check.report.satisfied);
    }

    #[test]
    fn eigenbasis_check_unitary_conjugation_is_doubly_stochastic() {
        let mut rng = SplitMix64::new(31);
        let u = crate::rng::haar_unitary(3, &mut rng);
        let phi = Superoperator::unitary_conjugation(&u).unwrap();
        let check = eigenbasis_transition_check(&phi, 1.0, &tol()).unwrap();
        assert!(check.residual <= 1e-8, "residual {}", check.residual);
        // for unitary conjugation T_G is doubly stochastic in any basis
        let basis = OrthonormalBasis::standard(3);
        let t = TransitionMatrix::new(&phi, &basis).unwrap();
        for j in 0..3 {
            assert!((t.entries().row(j).sum() - 1.0).abs() < 1e-10);
            assert!((t.entries().column(j).sum() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn eigenbasis_check_depolarizing_at_zero() {
        let phi = Superoperator::completely_depolarizing(3);
        let check = eigenbasis_transition_check(&phi, 0.0, &tol()).unwrap();
        assert!(check.residual <= 1e-10);
        assert!(check.report.satisfied);
    }

    #[test]
    fn witness_value_on_transpose_antisymmetric_vector() {
        let phi = Superoperator::transpose_map(2);
        let w = Rank2Witness::new(&phi, unit(2, 0), unit(2, 1), -unit(2, 1), unit(2, 0)).unwrap();
        assert!((w.value + 1.0).abs() < 1e-12);
        let direct = rank2_witness_value(&phi, &w).unwrap();
        assert!((direct - w.value).abs() < 1e-10);
        assert!((w.psi.norm() - 1.0).abs() < 1e-12);
        assert_eq!(w.schmidt_rank(1e-10), 2);
    }

    #[test]
    fn witness_value_on_identity_maximally_entangled() {
        let d = 2;
        let phi = Superoperator::identity(d);
        let s = 1.0 / (d as f64).sqrt();
        let w = Rank2Witness::new(
            &phi,
            unit(d, 0).scale(s),
            unit(d, 0),
            unit(d, 1).scale(s),
            unit(d, 1),
        )
        .unwrap();
        assert!((w.value - d as f64).abs() < 1e-12);
    }

    #[test]
    fn witness_values_nonnegative_for_cptp() {
        for i in 0..5u64 {
            let phi = positivity::sample_cptp(3, 9, sub_seed(96, i)).unwrap();
            let mut rng = SplitMix64::new(sub_seed(97, i));
            let draw =
                |rng: &mut SplitMix64| CVector::from_fn(3, |_, _| rng.next_complex_gaussian());
            let w = Rank2Witness::new(
                &phi,
                draw(&mut rng),
                draw(&mut rng),
                draw(&mut rng),
                draw(&mut rng),
            )
            .unwrap();
            assert!(w.value >= -1e-10, "value {}", w.value);
        }
    }

    #[test]
    fn example3_transition_matrix_in_standard_basis() {
        let phi = zoo::example3_map();
        let basis = OrthonormalBasis::standard(2);
        let t = TransitionMatrix::new(&phi, &basis).unwrap();
        assert!((t.entries()[(0, 0)] - 4.0).abs() < 1e-12);
        assert!((t.entries()[(0, 1)] - 1.0).abs() < 1e-12);
        assert!((t.entries()[(1, 0)] - 1.0).abs() < 1e-12);
        assert!(t.entries()[(1, 1)].abs() < 1e-12);
    }
}
