//! Dense complex linear algebra helpers: vectorization, eigenvalue
//! extraction, Hermitian matrix functions and null-space vectors.
//!
//! Vectorization is column-stacking throughout: `vec(X)[j*d + i] = X[(i,j)]`,
//! so `vec(A X B) = (Bᵀ ⊗ A) vec(X)`.

use nalgebra::linalg::{Schur, SymmetricEigen, SVD};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{MapError, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Column-stacking vectorization.
pub fn vec_mat(x: &CMatrix) -> CVector {
    // nalgebra stores column-major, so iteration order is exactly
    // column-stacking.
    CVector::from_iterator(x.nrows() * x.ncols(), x.iter().copied())
}

/// Inverse of [`vec_mat`] for a d×d matrix.
pub fn unvec(v: &CVector, dim: usize) -> CMatrix {
    assert_eq!(v.len(), dim * dim, "unvec: length {} != {dim}²", v.len());
    CMatrix::from_iterator(dim, dim, v.iter().copied())
}

/// Largest entry modulus.
pub fn maxabs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Max-abs deviation from the conjugate transpose.
pub fn hermiticity_deviation(m: &CMatrix) -> f64 {
    maxabs(&(m - m.adjoint()))
}

/// Frobenius norm.
pub fn fro_norm(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Eigenvalues of a general complex matrix via the complex Schur
/// decomposition. Order is unspecified.
pub fn eigenvalues(m: &CMatrix) -> Result<Vec<Complex64>> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(MapError::DimensionMismatch(format!(
            "eigenvalues of a {}x{} matrix",
            m.nrows(),
            m.ncols()
        )));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![m[(0, 0)]]);
    }
    let scale = maxabs(m).max(1.0);
    for eps in [f64::EPSILON, 1e-14, 1e-12] {
        if let Some(schur) = Schur::try_new(m.clone(), eps, 100_000) {
            let (_, t) = schur.unpack();
            let mut sub = 0.0f64;
            for i in 1..n {
                sub = sub.max(t[(i, i - 1)].norm());
            }
            if sub <= 1e-10 * scale {
                return Ok((0..n).map(|i| t[(i, i)]).collect());
            }
        }
    }
    Err(MapError::NumericalFailure(format!(
        "Schur iteration did not converge for a {n}x{n} matrix (maxabs {scale:.3e})"
    )))
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending. The
/// input is symmetrized first, so tiny hermiticity violations are tolerated.
/// Returns `(eigenvalues, eigenvectors)` with eigenvectors as columns.
pub fn hermitian_eigen(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let n = m.nrows();
    let sym = (m + m.adjoint()).scale(0.5);
    let eig = SymmetricEigen::try_new(sym, f64::EPSILON, 100_000).ok_or_else(|| {
        MapError::NumericalFailure(format!("Hermitian eigensolver failed on a {n}x{n} matrix"))
    })?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok((values, vectors))
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_hermitian_eigenvalue(m: &CMatrix) -> Result<f64> {
    Ok(*hermitian_eigen(m)?
        .0
        .first()
        .ok_or_else(|| MapError::DimensionMismatch("empty matrix".into()))?)
}

/// Hermitian matrix power `m^p` through the eigendecomposition. For negative
/// powers every eigenvalue must exceed `pd_floor`.
pub fn hermitian_power(m: &CMatrix, p: f64, pd_floor: f64) -> Result<CMatrix> {
    let (values, vectors) = hermitian_eigen(m)?;
    if p < 0.0 {
        if let Some(&min) = values.first() {
            if min <= pd_floor {
                return Err(MapError::NotPositiveDefinite {
                    min_eigenvalue: min,
                });
            }
        }
    }
    let n = m.nrows();
    let mut diag = CMatrix::zeros(n, n);
    for (i, &v) in values.iter().enumerate() {
        let pv = if v <= 0.0 && p >= 0.0 {
            // clamp round-off negatives for fractional nonnegative powers
            0.0
        } else {
            v.powf(p)
        };
        diag[(i, i)] = Complex64::new(pv, 0.0);
    }
    Ok(&vectors * diag * vectors.adjoint())
}

/// Unit vector minimizing `‖M v‖`, together with the achieved residual
/// (the smallest singular value). Used to extract eigenvectors as null
/// vectors of `M − λI`.
pub fn nullspace_vector(m: &CMatrix) -> Result<(CVector, f64)> {
    let n = m.nrows();
    let svd = SVD::try_new(m.clone(), true, true, f64::EPSILON, 100_000)
        .ok_or_else(|| MapError::NumericalFailure(format!("SVD failed on a {n}x{n} matrix")))?;
    let v_t = svd.v_t.as_ref().expect("SVD computed with right vectors");
    let mut best = 0usize;
    for i in 1..svd.singular_values.len() {
        if svd.singular_values[i] < svd.singular_values[best] {
            best = i;
        }
    }
    let v = v_t.row(best).adjoint();
    Ok((v, svd.singular_values[best]))
}

/// Sorts eigenvalues by (Re ascending, Im ascending).
pub fn sort_eigenvalues(mut eigs: Vec<Complex64>) -> Vec<Complex64> {
    eigs.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    eigs
}

/// Greedy multiset match: true when `a` and `b` pair up within `tol`.
pub fn multisets_match(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut unused: Vec<Complex64> = b.to_vec();
    for za in a {
        let Some((idx, dist)) = unused
            .iter()
            .enumerate()
            .map(|(i, zb)| (i, (za - zb).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
        else {
            return false;
        };
        if dist > tol {
            return false;
        }
        unused.swap_remove(idx);
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{haar_unitary, SplitMix64};

    #[test]
    fn eigenvalues_of_diagonal() {
        let m = CMatrix::from_diagonal(&CVector::from_vec(vec![
            Complex64::new(1.0, 2.0),
            Complex64::new(-3.0, 0.5),
        ]));
        let eigs = sort_eigenvalues(eigenvalues(&m).unwrap());
        assert!((eigs[0] - Complex64::new(-3.0, 0.5)).norm() < 1e-14);
        assert!((eigs[1] - Complex64::new(1.0, 2.0)).norm() < 1e-14);
    }

    #[test]
    fn eigenvalues_of_unitary_lie_on_circle() {
        let mut rng = SplitMix64::new(5);
        let u = haar_unitary(6, &mut rng);
        let eigs = eigenvalues(&u).unwrap();
        for z in eigs {
            assert!((z.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn hermitian_eigen_reconstructs() {
        let mut rng = SplitMix64::new(9);
        let g = crate::rng::gaussian_matrix(5, 5, &mut rng);
        let h = (&g + g.adjoint()).scale(0.5);
        let (vals, vecs) = hermitian_eigen(&h).unwrap();
        let mut diag = CMatrix::zeros(5, 5);
        for (i, &v) in vals.iter().enumerate() {
            diag[(i, i)] = Complex64::new(v, 0.0);
        }
        let rebuilt = &vecs * diag * vecs.adjoint();
        assert!(maxabs(&(&rebuilt - &h)) < 1e-12);
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn nullspace_vector_of_singular_matrix() {
        let mut m = CMatrix::identity(4, 4);
        m[(2, 2)] = Complex64::new(0.0, 0.0);
        let (v, res) = nullspace_vector(&m).unwrap();
        assert!(res < 1e-14);
        assert!((v[2].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn vec_unvec_round_trip() {
        let mut rng = SplitMix64::new(1);
        for d in 1..=8 {
            let x = crate::rng::gaussian_matrix(d, d, &mut rng);
            let y = unvec(&vec_mat(&x), d);
            assert_eq!(x, y);
        }
    }

    #[test]
    fn vec_of_product_is_kron_action() {
        let mut rng = SplitMix64::new(2);
        let d = 3;
        let a = crate::rng::gaussian_matrix(d, d, &mut rng);
        let x = crate::rng::gaussian_matrix(d, d, &mut rng);
        let b = crate::rng::gaussian_matrix(d, d, &mut rng);
        let lhs = vec_mat(&(&a * &x * &b));
        let rhs = b.transpose().kronecker(&a) * vec_mat(&x);
        assert!((lhs - rhs).iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-12);
    }
}
