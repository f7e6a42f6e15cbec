//! Linear maps on d×d complex matrices: transfer-matrix representation,
//! Kraus and Choi constructors, adjoints, mixing and fixed points.
//!
//! A map Φ is stored as its d²×d² transfer matrix M with
//! `vec(Φ(X)) = M vec(X)` under column-stacking vectorization. The Choi
//! matrix C(Φ) carries the same data re-indexed so that block (j,k) equals
//! Φ(|j⟩⟨k|); positivity properties of Φ live on C(Φ).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{MapError, Result};
use crate::linalg::{
    self, eigenvalues, fro_norm, hermitian_eigen, hermitian_power, maxabs, unvec, vec_mat, CMatrix,
    CVector, ONE,
};

/// Hermitian matrix validated on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    mat: CMatrix,
}

impl HermitianMatrix {
    /// Accepts `mat` when `maxabs(mat - mat†)` is within the hermiticity
    /// tolerance, then symmetrizes it exactly.
    pub fn new(mat: CMatrix, tol: &Tolerances) -> Result<Self> {
        if mat.nrows() != mat.ncols() || mat.nrows() == 0 {
            return Err(MapError::DimensionMismatch(format!(
                "Hermitian matrix must be square and nonempty, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let dev = linalg::hermiticity_deviation(&mat);
        let allowed = tol.hermiticity(maxabs(&mat));
        if dev > allowed {
            return Err(MapError::NotHermitian {
                deviation: dev,
                tolerance: allowed,
            });
        }
        Ok(Self {
            mat: (&mat + mat.adjoint()).scale(0.5),
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: CMatrix::identity(dim, dim),
        }
    }

    /// Maximally mixed state I/d.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            mat: CMatrix::identity(dim, dim).scale(1.0 / dim as f64),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(hermitian_eigen(&self.mat)?.0)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        linalg::min_hermitian_eigenvalue(&self.mat)
    }
}

/// A linear map on d×d complex matrices, stored as its transfer matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    dim: usize,
    transfer: CMatrix,
}

impl Superoperator {
    /// Wraps a d²×d² transfer matrix.
    pub fn from_transfer(transfer: CMatrix) -> Result<Self> {
        let n = transfer.nrows();
        if n != transfer.ncols() {
            return Err(MapError::DimensionMismatch(format!(
                "transfer matrix must be square, got {}x{}",
                n,
                transfer.ncols()
            )));
        }
        let dim = (n as f64).sqrt().round() as usize;
        if dim == 0 || dim * dim != n {
            return Err(MapError::DimensionMismatch(format!(
                "transfer matrix side {n} is not a nonzero perfect square"
            )));
        }
        Ok(Self { dim, transfer })
    }

    /// Builds the map from its action on the matrix units |j⟩⟨k|.
    pub fn from_action<F>(dim: usize, action: F) -> Self
    where
        F: Fn(&CMatrix) -> CMatrix,
    {
        let mut transfer = CMatrix::zeros(dim * dim, dim * dim);
        for k in 0..dim {
            for j in 0..dim {
                let mut unit = CMatrix::zeros(dim, dim);
                unit[(j, k)] = ONE;
                let image = action(&unit);
                transfer.set_column(k * dim + j, &vec_mat(&image));
            }
        }
        Self { dim, transfer }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            transfer: CMatrix::identity(dim * dim, dim * dim),
        }
    }

    /// The transpose map τ(X) = Xᵀ.
    pub fn transpose_map(dim: usize) -> Self {
        let mut transfer = CMatrix::zeros(dim * dim, dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                // vec(Xᵀ)[i*d + j] = vec(X)[j*d + i]
                transfer[(i * dim + j, j * dim + i)] = ONE;
            }
        }
        Self { dim, transfer }
    }

    /// The completely depolarizing map X ↦ tr(X) I/d.
    pub fn completely_depolarizing(dim: usize) -> Self {
        let v = vec_mat(&CMatrix::identity(dim, dim));
        let transfer = (&v * v.transpose()).scale(1.0 / dim as f64);
        Self { dim, transfer }
    }

    /// Completely positive map with the given Kraus operators:
    /// transfer M = Σᵢ conj(Kᵢ) ⊗ Kᵢ.
    pub fn from_kraus(kraus: &[CMatrix]) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| MapError::InvalidParameter("empty Kraus list".into()))?;
        let dim = first.nrows();
        if dim == 0 {
            return Err(MapError::DimensionMismatch("empty Kraus operator".into()));
        }
        let mut transfer = CMatrix::zeros(dim * dim, dim * dim);
        for (i, k) in kraus.iter().enumerate() {
            if k.nrows() != dim || k.ncols() != dim {
                return Err(MapError::DimensionMismatch(format!(
                    "Kraus operator {i} is {}x{}, expected {dim}x{dim}",
                    k.nrows(),
                    k.ncols()
                )));
            }
            transfer += k.conjugate().kronecker(k);
        }
        Ok(Self { dim, transfer })
    }

    /// Unitary conjugation X ↦ U X U†.
    pub fn unitary_conjugation(u: &CMatrix) -> Result<Self> {
        Self::from_kraus(std::slice::from_ref(u))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn transfer(&self) -> &CMatrix {
        &self.transfer
    }

    /// Applies the map: unvec(M vec(x)).
    pub fn apply(&self, x: &CMatrix) -> Result<CMatrix> {
        if x.nrows() != self.dim || x.ncols() != self.dim {
            return Err(MapError::DimensionMismatch(format!(
                "apply: map dimension {} but argument is {}x{}",
                self.dim,
                x.nrows(),
                x.ncols()
            )));
        }
        Ok(unvec(&(&self.transfer * vec_mat(x)), self.dim))
    }

    /// Composition self ∘ inner.
    pub fn compose(&self, inner: &Superoperator) -> Result<Self> {
        if self.dim != inner.dim {
            return Err(MapError::DimensionMismatch(format!(
                "compose: dimensions {} and {}",
                self.dim, inner.dim
            )));
        }
        Ok(Self {
            dim: self.dim,
            transfer: &self.transfer * &inner.transfer,
        })
    }

    pub fn add(&self, other: &Superoperator) -> Result<Self> {
        if self.dim != other.dim {
            return Err(MapError::DimensionMismatch(format!(
                "add: dimensions {} and {}",
                self.dim, other.dim
            )));
        }
        Ok(Self {
            dim: self.dim,
            transfer: &self.transfer + &other.transfer,
        })
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            transfer: self.transfer.scale(factor),
        }
    }

    /// Choi matrix: block (j,k) equals Φ(|j⟩⟨k|).
    pub fn choi(&self) -> ChoiMatrix {
        let d = self.dim;
        let mut mat = CMatrix::zeros(d * d, d * d);
        for j in 0..d {
            for k in 0..d {
                for m in 0..d {
                    for n in 0..d {
                        mat[(j * d + m, k * d + n)] = self.transfer[(n * d + m, k * d + j)];
                    }
                }
            }
        }
        ChoiMatrix { dim: d, mat }
    }

    /// Inverse of [`Superoperator::choi`]; a pure re-indexing.
    pub fn from_choi(c: &ChoiMatrix) -> Self {
        let d = c.dim;
        let mut transfer = CMatrix::zeros(d * d, d * d);
        for j in 0..d {
            for k in 0..d {
                for m in 0..d {
                    for n in 0..d {
                        transfer[(n * d + m, k * d + j)] = c.mat[(j * d + m, k * d + n)];
                    }
                }
            }
        }
        Self { dim: d, transfer }
    }

    /// Trace of the map as a linear operator (the transfer-matrix trace),
    /// which equals Σⱼₖ ⟨gₖ|Φ(|gₖ⟩⟨gⱼ|)|gⱼ⟩ for every orthonormal basis.
    /// The imaginary part is discarded; beyond `tol.trace_imag` it signals a
    /// non-Hermiticity-preserving map and an error is raised.
    pub fn trace(&self, tol: &Tolerances) -> Result<f64> {
        let t = self.transfer.trace();
        if t.im.abs() > tol.trace_imag {
            return Err(MapError::NonrealTrace { imag: t.im });
        }
        Ok(t.re)
    }

    /// Trace without the reality check.
    pub fn trace_raw(&self) -> Complex64 {
        self.transfer.trace()
    }

    /// Adjoint with respect to the Hilbert-Schmidt inner product
    /// ⟨A,B⟩ = tr(A†B): the transfer matrix is conjugate-transposed.
    pub fn hs_adjoint(&self) -> Self {
        Self {
            dim: self.dim,
            transfer: self.transfer.adjoint(),
        }
    }

    /// Adjoint with respect to the ω-weighted inner product
    /// ⟨A,B⟩_ω = tr(A† ω^{-1/2} B ω^{-1/2}):
    /// Φ^# = ω^{1/2} Φ†(ω^{-1/2}(·)ω^{-1/2}) ω^{1/2}.
    ///
    /// `omega` must be strictly positive definite. When Φ is
    /// trace-preserving and fixes ω, the result is trace-preserving and
    /// fixes ω, and tr(Φ^#) = tr(Φ).
    pub fn omega_adjoint(&self, omega: &HermitianMatrix, tol: &Tolerances) -> Result<Self> {
        if omega.dim() != self.dim {
            return Err(MapError::DimensionMismatch(format!(
                "omega_adjoint: map dimension {} but omega is {}x{}",
                self.dim,
                omega.dim(),
                omega.dim()
            )));
        }
        let min = omega.min_eigenvalue()?;
        if min <= tol.positive_definite {
            return Err(MapError::NotPositiveDefinite {
                min_eigenvalue: min,
            });
        }
        let w_sqrt = hermitian_power(omega.matrix(), 0.5, tol.positive_definite)?;
        let w_isqrt = hermitian_power(omega.matrix(), -0.5, tol.positive_definite)?;
        // Sandwich X ↦ A X A has transfer Aᵀ ⊗ A for Hermitian A.
        let outer = w_sqrt.transpose().kronecker(&w_sqrt);
        let inner = w_isqrt.transpose().kronecker(&w_isqrt);
        Ok(Self {
            dim: self.dim,
            transfer: outer * self.transfer.adjoint() * inner,
        })
    }

    /// Convex combination with the completely depolarizing map:
    /// (1−λ)Φ + λ tr(·) I/d. For λ ∈ (0,1] and Φ positive trace-preserving
    /// the result has a full-rank fixed point.
    pub fn mix_depolarizing(&self, lambda: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(MapError::InvalidParameter(format!(
                "mixing parameter {lambda} outside [0, 1]"
            )));
        }
        let dep = Superoperator::completely_depolarizing(self.dim);
        Ok(Self {
            dim: self.dim,
            transfer: self.transfer.scale(1.0 - lambda) + dep.transfer.scale(lambda),
        })
    }

    /// Max-abs deviation of Φ†(I) from I; zero exactly for trace-preserving
    /// maps.
    pub fn trace_preservation_deviation(&self) -> f64 {
        let d = self.dim;
        let vec_id = vec_mat(&CMatrix::identity(d, d));
        let dual = unvec(&(self.transfer.adjoint() * vec_id), d);
        maxabs(&(dual - CMatrix::identity(d, d)))
    }

    pub fn is_trace_preserving(&self, tol: &Tolerances) -> bool {
        self.trace_preservation_deviation() <= tol.trace_preserving
    }

    /// Hermiticity-preservation deviation, measured on the Choi matrix.
    pub fn hermiticity_preservation_deviation(&self) -> f64 {
        self.choi().hermiticity_deviation()
    }

    pub fn is_hermiticity_preserving(&self, tol: &Tolerances) -> bool {
        let dev = self.hermiticity_preservation_deviation();
        dev <= tol.hermiticity(maxabs(&self.transfer))
    }

    /// A fixed point ω of a positive trace-preserving map: Hermitian, unit
    /// trace, positive semidefinite up to `tol.fixed_point_min_eig`, with
    /// residual ‖Φ(ω) − ω‖ ≤ `tol.fixed_point_residual`.
    ///
    /// The eigenvalue-1 eigenspace component is extracted by powering the
    /// averaged map (Φ + id)/2, whose only peripheral eigenvalue for a
    /// positive trace-preserving Φ is 1; the candidate is then Hermitized
    /// ((Y+Y†)/2 first, falling back to (i/2)(Y−Y†) when the trace
    /// degenerates) and trace-normalized.
    pub fn fixed_point(&self, tol: &Tolerances) -> Result<HermitianMatrix> {
        let d = self.dim;
        let eigs = eigenvalues(&self.transfer)?;
        let nearest = eigs
            .iter()
            .copied()
            .min_by(|a, b| (a - ONE).norm().total_cmp(&(b - ONE).norm()))
            .ok_or_else(|| MapError::DimensionMismatch("empty spectrum".into()))?;
        if (nearest - ONE).norm() > tol.eigenvalue_match {
            return Err(MapError::NotTracePreserving {
                deviation: (nearest - ONE).norm(),
            });
        }

        // Spectral projection at eigenvalue 1 via repeated squaring of the
        // averaged map (Φ + id)/2, whose only unit-modulus eigenvalue for a
        // positive trace-preserving Φ is 1. Forty squarings damp every mode
        // with a spectral gap above ~1e-5 while keeping the rounding-induced
        // distortion inside a degenerate fixed space at the 1e-4 level;
        // slower modes trip the residual check below instead.
        let n = d * d;
        let mut power = (&self.transfer + CMatrix::identity(n, n)).scale(0.5);
        for _ in 0..40 {
            power = &power * &power;
            let scale = maxabs(&power);
            if scale > 0.0 {
                power.unscale_mut(scale);
            }
        }
        let seed = vec_mat(&CMatrix::identity(d, d)).scale(1.0 / d as f64);
        let y_vec: CVector = &power * seed;
        let mut y = unvec(&y_vec, d);
        let norm = fro_norm(&y);
        if norm < 1e-300 {
            return Err(MapError::DegenerateInput(
                "fixed-point candidate vanished under projection".into(),
            ));
        }
        y.unscale_mut(norm);

        let herm = (&y + y.adjoint()).scale(0.5);
        let anti = (&y - y.adjoint()).map(|z| z * Complex64::new(0.0, 0.5));
        let candidate = if herm.trace().norm() >= 1e-12 {
            herm
        } else if anti.trace().norm() >= 1e-12 {
            anti
        } else {
            return Err(MapError::DegenerateInput(
                "eigenspace at 1 yields no trace-nonzero Hermitian element".into(),
            ));
        };
        let omega = candidate.scale(1.0 / candidate.trace().re);
        let residual = fro_norm(&(self.apply(&omega)? - &omega));
        if residual > tol.fixed_point_residual {
            return Err(MapError::NumericalFailure(format!(
                "fixed-point residual {residual:.3e} exceeds {:.3e}",
                tol.fixed_point_residual
            )));
        }
        let result = HermitianMatrix::new(omega, tol)?;
        let min_eig = result.min_eigenvalue()?;
        if min_eig < -tol.fixed_point_min_eig {
            return Err(MapError::NumericalFailure(format!(
                "fixed point has negative eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(result)
    }

    /// Serializes as `{"dim": d, "transfer": [[re, im], ...]}` in row-major
    /// order.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&MatrixWire::from_matrix(
            self.dim,
            &self.transfer,
            "transfer",
        ))
        .expect("superoperator serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let wire: MatrixWire = parse_wire(text)?;
        let mat = wire.to_matrix("transfer")?;
        if mat.nrows() != wire.dim * wire.dim {
            return Err(MapError::DimensionMismatch(format!(
                "transfer of a dim-{} map must be {}x{}, got {} entries",
                wire.dim,
                wire.dim * wire.dim,
                wire.dim * wire.dim,
                wire.entries().len()
            )));
        }
        Self::from_transfer(mat)
    }
}

/// Choi representation C(Φ) = Σⱼₖ |j⟩⟨k| ⊗ Φ(|j⟩⟨k|).
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    dim: usize,
    mat: CMatrix,
}

impl ChoiMatrix {
    pub fn new(dim: usize, mat: CMatrix) -> Result<Self> {
        if dim == 0 {
            return Err(MapError::DimensionMismatch("dim must be >= 1".into()));
        }
        if mat.nrows() != dim * dim || mat.ncols() != dim * dim {
            return Err(MapError::DimensionMismatch(format!(
                "Choi matrix of a dim-{dim} map must be {0}x{0}, got {1}x{2}",
                dim * dim,
                mat.nrows(),
                mat.ncols()
            )));
        }
        Ok(Self { dim, mat })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    /// Hermitian iff the underlying map is Hermiticity-preserving.
    pub fn hermiticity_deviation(&self) -> f64 {
        linalg::hermiticity_deviation(&self.mat)
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(hermitian_eigen(&self.mat)?.0)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        linalg::min_hermitian_eigenvalue(&self.mat)
    }

    /// Partial trace over the second (output) factor:
    /// Q[(j,k)] = tr Φ(|j⟩⟨k|). Equals I for trace-preserving maps.
    pub fn partial_trace_output(&self) -> CMatrix {
        let d = self.dim;
        let mut q = CMatrix::zeros(d, d);
        for j in 0..d {
            for k in 0..d {
                let mut s = Complex64::default();
                for m in 0..d {
                    s += self.mat[(j * d + m, k * d + m)];
                }
                q[(j, k)] = s;
            }
        }
        q
    }

    /// Partial trace over the first (input) factor: equals Φ(I).
    pub fn partial_trace_input(&self) -> CMatrix {
        let d = self.dim;
        let mut q = CMatrix::zeros(d, d);
        for m in 0..d {
            for n in 0..d {
                let mut s = Complex64::default();
                for j in 0..d {
                    s += self.mat[(j * d + m, j * d + n)];
                }
                q[(m, n)] = s;
            }
        }
        q
    }

    /// Serializes as `{"dim": d, "entries": [[re, im], ...]}` row-major.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&MatrixWire::from_matrix(self.dim, &self.mat, "entries"))
            .expect("Choi serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let wire: MatrixWire = parse_wire(text)?;
        let mat = wire.to_matrix("entries")?;
        Self::new(wire.dim, mat)
    }
}

/// Row-major wire format shared by Choi matrices ("entries") and
/// superoperators ("transfer").
#[derive(Serialize, Deserialize)]
struct MatrixWire {
    dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    entries: Option<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    transfer: Option<Vec<[f64; 2]>>,
}

impl MatrixWire {
    fn from_matrix(dim: usize, mat: &CMatrix, key: &str) -> Self {
        let n = mat.nrows();
        let mut flat = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let z = mat[(i, j)];
                flat.push([z.re, z.im]);
            }
        }
        match key {
            "entries" => Self {
                dim,
                entries: Some(flat),
                transfer: None,
            },
            _ => Self {
                dim,
                entries: None,
                transfer: Some(flat),
            },
        }
    }

    fn entries(&self) -> &[[f64; 2]] {
        self.entries
            .as_deref()
            .or(self.transfer.as_deref())
            .unwrap_or(&[])
    }

    fn to_matrix(&self, key: &str) -> Result<CMatrix> {
        let flat = match key {
            "entries" => self.entries.as_ref(),
            _ => self.transfer.as_ref(),
        }
        .ok_or_else(|| MapError::Parse {
            offset: 0,
            message: format!("missing \"{key}\" field"),
        })?;
        if self.dim == 0 {
            return Err(MapError::DimensionMismatch("dim must be >= 1".into()));
        }
        let n = self.dim * self.dim;
        if flat.len() != n * n {
            return Err(MapError::DimensionMismatch(format!(
                "dim {} requires {} entries, got {}",
                self.dim,
                n * n,
                flat.len()
            )));
        }
        let mut mat = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let [re, im] = flat[i * n + j];
                mat[(i, j)] = Complex64::new(re, im);
            }
        }
        Ok(mat)
    }
}

fn parse_wire(text: &str) -> Result<MatrixWire> {
    serde_json::from_str(text).map_err(|e| {
        let offset = byte_offset(text, e.line(), e.column());
        MapError::Parse {
            offset,
            message: e.to_string(),
        }
    })
}

fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    if line == 0 {
        return 0;
    }
    let mut offset = 0;
    for (i, l) in text.split('\n').enumerate() {
        if i + 1 == line {
            return offset + column.saturating_sub(1).min(l.len());
        }
        offset += l.len() + 1;
    }
    offset.min(text.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eigenvalues, sort_eigenvalues};
    use crate::positivity;
    use crate::rng::SplitMix64;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn sigma_z() -> CMatrix {
        let mut m = CMatrix::identity(2, 2);
        m[(1, 1)] = Complex64::from(-1.0);
        m
    }

    fn approx(a: f64, b: f64, eps: f64) {
        assert!((a - b).abs() <= eps, "{a} != {b} (eps {eps})");
    }

    #[test]
    fn kraus_identity_gives_identity_transfer() {
        let phi = Superoperator::from_kraus(&[CMatrix::identity(2, 2)]).unwrap();
        assert_eq!(phi.transfer(), Superoperator::identity(2).transfer());
    }

    #[test]
    fn kraus_unitary_conjugation_is_cptp() {
        let mut rng = SplitMix64::new(17);
        let u = crate::rng::haar_unitary(3, &mut rng);
        let phi = Superoperator::unitary_conjugation(&u).unwrap();
        assert!(phi.is_trace_preserving(&tol()));
        assert!(positivity::is_cp(&phi, &tol()).unwrap().is_cp);
    }

    #[test]
    fn dephasing_transfer_eigenvalues() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let kraus = [CMatrix::identity(2, 2).scale(s), sigma_z().scale(s)];
        let phi = Superoperator::from_kraus(&kraus).unwrap();
        let eigs = sort_eigenvalues(eigenvalues(phi.transfer()).unwrap());
        let expected = [0.0, 0.0, 1.0, 1.0];
        for (z, e) in eigs.iter().zip(expected) {
            assert!((z - Complex64::from(e)).norm() < 1e-12);
        }
    }

    #[test]
    fn apply_matches_definitions() {
        let mut rng = SplitMix64::new(23);
        let x = crate::rng::gaussian_matrix(2, 2, &mut rng);
        let id = Superoperator::identity(2);
        assert!(maxabs(&(id.apply(&x).unwrap() - &x)) < 1e-15);

        let tau = Superoperator::transpose_map(2);
        let mut e01 = CMatrix::zeros(2, 2);
        e01[(0, 1)] = ONE;
        let mut e10 = CMatrix::zeros(2, 2);
        e10[(1, 0)] = ONE;
        assert!(maxabs(&(tau.apply(&e01).unwrap() - e10)) < 1e-15);

        let dep = Superoperator::completely_depolarizing(2);
        let mut y = x.clone();
        let t = y.trace();
        y[(0, 0)] -= t - ONE; // force trace 1
        let out = dep.apply(&y).unwrap();
        assert!(maxabs(&(out - CMatrix::identity(2, 2).scale(0.5))) < 1e-14);
    }

    #[test]
    fn apply_rejects_dimension_mismatch() {
        let phi = Superoperator::identity(2);
        let x = CMatrix::zeros(3, 3);
        assert!(matches!(phi.apply(&x), Err(MapError::DimensionMismatch(_))));
    }

    #[test]
    fn choi_of_identity_is_rank_one() {
        let phi = Superoperator::identity(2);
        let choi = phi.choi();
        assert!((choi.matrix().trace().re - 2.0).abs() < 1e-14);
        let eigs = choi.hermitian_eigenvalues().unwrap();
        // unnormalized maximally entangled projector: eigenvalues {2,0,0,0}
        approx(eigs[3], 2.0, 1e-12);
        for &e in &eigs[..3] {
            approx(e, 0.0, 1e-12);
        }
    }

    #[test]
    fn choi_of_transpose_is_swap() {
        let tau = Superoperator::transpose_map(2);
        let choi = tau.choi();
        // SWAP built directly from its action on basis vectors
        let mut swap = CMatrix::zeros(4, 4);
        for i in 0..2 {
            for j in 0..2 {
                swap[(j * 2 + i, i * 2 + j)] = ONE;
            }
        }
        assert!(maxabs(&(choi.matrix() - swap)) < 1e-15);
        let eigs = choi.hermitian_eigenvalues().unwrap();
        let expected = [-1.0, 1.0, 1.0, 1.0];
        for (e, x) in eigs.iter().zip(expected) {
            approx(*e, x, 1e-12);
        }
    }

    #[test]
    fn choi_round_trip() {
        let mut rng = SplitMix64::new(31);
        for d in 1..=5usize {
            let transfer = crate::rng::gaussian_matrix(d * d, d * d, &mut rng);
            let phi = Superoperator::from_transfer(transfer).unwrap();
            let back = Superoperator::from_choi(&phi.choi());
            assert!(maxabs(&(back.transfer() - phi.transfer())) < 1e-12);
            let choi = phi.choi();
            let choi_back = Superoperator::from_choi(&choi).choi();
            assert!(maxabs(&(choi_back.matrix() - choi.matrix())) < 1e-12);
        }
    }

    #[test]
    fn trace_of_identity_map_is_d_squared() {
        for d in 1..=6usize {
            let phi = Superoperator::identity(d);
            approx(phi.trace(&tol()).unwrap(), (d * d) as f64, 1e-12);
        }
    }

    #[test]
    fn trace_of_transpose_is_d() {
        for d in 2..=5usize {
            let tau = Superoperator::transpose_map(d);
            approx(tau.trace(&tol()).unwrap(), d as f64, 1e-12);
        }
    }

    #[test]
    fn hs_adjoint_of_unitary_conjugation() {
        let mut rng = SplitMix64::new(37);
        let u = crate::rng::haar_unitary(3, &mut rng);
        let phi = Superoperator::unitary_conjugation(&u).unwrap();
        let adj = phi.hs_adjoint();
        let inverse = Superoperator::unitary_conjugation(&u.adjoint()).unwrap();
        assert!(maxabs(&(adj.transfer() - inverse.transfer())) < 1e-13);
    }

    #[test]
    fn hs_adjoint_duality_and_involution() {
        let phi = positivity::sample_cptp(3, 9, 99).unwrap();
        let adj = phi.hs_adjoint();
        // trace preservation dualizes to unitality of the adjoint
        let img = adj.apply(&CMatrix::identity(3, 3)).unwrap();
        assert!(maxabs(&(img - CMatrix::identity(3, 3))) < 1e-10);
        let double = adj.hs_adjoint();
        assert!(maxabs(&(double.transfer() - phi.transfer())) < 1e-14);
    }

    #[test]
    fn omega_adjoint_at_maximally_mixed_is_hs_adjoint() {
        let phi = positivity::sample_cptp(2, 4, 5).unwrap();
        let omega = HermitianMatrix::maximally_mixed(2);
        let sharp = phi.omega_adjoint(&omega, &tol()).unwrap();
        assert!(maxabs(&(sharp.transfer() - phi.hs_adjoint().transfer())) < 1e-12);
    }

    #[test]
    fn omega_adjoint_preserves_trace_and_fixed_point() {
        let base = positivity::sample_cptp(3, 9, 12).unwrap();
        let phi = base.mix_depolarizing(0.3).unwrap();
        let omega = phi.fixed_point(&tol()).unwrap();
        let sharp = phi.omega_adjoint(&omega, &tol()).unwrap();
        approx(
            sharp.trace(&tol()).unwrap(),
            phi.trace(&tol()).unwrap(),
            1e-9,
        );
        assert!(sharp.is_trace_preserving(&tol()));
        let img = sharp.apply(omega.matrix()).unwrap();
        assert!(maxabs(&(img - omega.matrix())) < 1e-9);
    }

    #[test]
    fn omega_adjoint_rejects_singular_omega() {
        let phi = Superoperator::identity(2);
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 0)] = ONE;
        let omega = HermitianMatrix::new(m, &tol()).unwrap();
        assert!(matches!(
            phi.omega_adjoint(&omega, &tol()),
            Err(MapError::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn mix_depolarizing_endpoints() {
        let phi = Superoperator::transpose_map(2);
        let same = phi.mix_depolarizing(0.0).unwrap();
        assert!(maxabs(&(same.transfer() - phi.transfer())) < 1e-15);
        let dep = phi.mix_depolarizing(1.0).unwrap();
        assert!(
            maxabs(&(dep.transfer() - Superoperator::completely_depolarizing(2).transfer()))
                < 1e-15
        );
        let eigs = eigenvalues(dep.transfer()).unwrap();
        let nonzero = eigs.iter().filter(|z| z.norm() > 1e-12).count();
        assert_eq!(nonzero, 1);
        assert!(phi.mix_depolarizing(1.5).is_err());
        assert!(phi.mix_depolarizing(-0.1).is_err());
    }

    #[test]
    fn mixed_transpose_cp_threshold() {
        // min Choi eigenvalue of (1−λ)τ + λ tr(·)I/2 is (3λ/2) − 1
        let tau = Superoperator::transpose_map(2);
        for lambda in [0.0, 0.2, 0.5, 2.0 / 3.0, 0.8, 1.0] {
            let mixed = tau.mix_depolarizing(lambda).unwrap();
            let min = mixed.choi().min_eigenvalue().unwrap();
            approx(min, 1.5 * lambda - 1.0, 1e-12);
            let report = positivity::is_cp(&mixed, &tol()).unwrap();
            assert_eq!(report.is_cp, lambda >= 2.0 / 3.0 - 1e-12);
        }
    }

    #[test]
    fn fixed_point_of_depolarizing_is_maximally_mixed() {
        for d in 2..=4usize {
            let dep = Superoperator::completely_depolarizing(d);
            let omega = dep.fixed_point(&tol()).unwrap();
            assert!(
                maxabs(&(omega.matrix() - CMatrix::identity(d, d).scale(1.0 / d as f64))) < 1e-12
            );
        }
    }

    #[test]
    fn fixed_point_of_unitary_conjugation_is_valid() {
        let mut rng = SplitMix64::new(41);
        let u = crate::rng::haar_unitary(3, &mut rng);
        let phi = Superoperator::unitary_conjugation(&u).unwrap();
        let omega = phi.fixed_point(&tol()).unwrap();
        approx(omega.trace(), 1.0, 1e-12);
        assert!(omega.min_eigenvalue().unwrap() >= -1e-10);
        let residual = fro_norm(&(phi.apply(omega.matrix()).unwrap() - omega.matrix()));
        assert!(residual <= 1e-9, "residual {residual}");
    }

    #[test]
    fn fixed_point_of_mixed_cptp_is_full_rank() {
        let base = positivity::sample_cptp(3, 9, 7).unwrap();
        let phi = base.mix_depolarizing(0.3).unwrap();
        let omega = phi.fixed_point(&tol()).unwrap();
        let residual = fro_norm(&(phi.apply(omega.matrix()).unwrap() - omega.matrix()));
        assert!(residual <= 1e-9, "residual {residual}");
        assert!(omega.min_eigenvalue().unwrap() > 1e-6);
    }

    #[test]
    fn fixed_point_rejects_non_trace_preserving() {
        let phi = Superoperator::identity(2).scale(0.5);
        assert!(matches!(
            phi.fixed_point(&tol()),
            Err(MapError::NotTracePreserving { .. })
        ));
    }

    #[test]
    fn fixed_point_rejects_traceless_eigenspace() {
        // eigenvalue 1 lives only on the off-diagonal unit |0⟩⟨1|, so the
        // eigenspace holds no trace-normalizable fixed point
        let phi = Superoperator::from_action(2, |x| {
            let mut out = x.scale(0.5);
            out[(0, 1)] = x[(0, 1)];
            out[(1, 0)] *= 0.0;
            out
        });
        assert!(matches!(
            phi.fixed_point(&tol()),
            Err(MapError::DegenerateInput(_))
        ));
    }

    #[test]
    fn trace_rejects_nonreal_input() {
        let mut transfer = CMatrix::identity(4, 4);
        transfer[(0, 0)] = Complex64::new(1.0, 0.5);
        let phi = Superoperator::from_transfer(transfer).unwrap();
        assert!(matches!(
            phi.trace(&tol()),
            Err(MapError::NonrealTrace { .. })
        ));
        assert!(!phi.is_hermiticity_preserving(&tol()));
    }

    #[test]
    fn partial_trace_of_tp_choi_is_identity() {
        let phi = positivity::sample_cptp(4, 16, 3).unwrap();
        let q = phi.choi().partial_trace_output();
        assert!(maxabs(&(q - CMatrix::identity(4, 4))) < 1e-10);
    }

    #[test]
    fn hermitian_matrix_rejects_non_hermitian() {
        let mut m = CMatrix::identity(2, 2);
        m[(0, 1)] = Complex64::new(0.0, 1.0);
        assert!(matches!(
            HermitianMatrix::new(m, &tol()),
            Err(MapError::NotHermitian { .. })
        ));
    }

    #[test]
    fn superoperator_json_round_trip() {
        let phi = positivity::sample_cptp(2, 4, 77).unwrap();
        let text = phi.to_json();
        let back = Superoperator::from_json(&text).unwrap();
        assert!(maxabs(&(back.transfer() - phi.transfer())) < 1e-15);
    }

    #[test]
    fn choi_json_round_trip_and_errors() {
        let choi = Superoperator::transpose_map(2).choi();
        let text = choi.to_json();
        let back = ChoiMatrix::from_json(&text).unwrap();
        assert!(maxabs(&(back.matrix() - choi.matrix())) < 1e-15);

        match ChoiMatrix::from_json("{\"dim\": 2, \"entries\": [[1.0, 0.0]]}") {
            Err(MapError::DimensionMismatch(_)) => {}
            other => panic!("expected dimension error, got {other:?}"),
        }
        match ChoiMatrix::from_json("{\"dim\": 2, ") {
            Err(MapError::Parse { offset, .. }) => assert!(offset > 0),
            other => panic!("expected parse error, got {other:?}"),
        }
    }
}
