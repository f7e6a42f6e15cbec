//! GKSL-form generators, semigroup exponentiation, relaxation rates, and
//! the generator-level trace bound with its small-time limit verification.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{MapError, Result};
use crate::linalg::{maxabs, unvec, vec_mat, CMatrix, I};
use crate::report::{BoundReport, InequalityId};
use crate::rng::{gaussian_matrix, SplitMix64};
use crate::spectral::{spectrum_of_transfer, SpectrumReport};
use crate::superop::{HermitianMatrix, Superoperator};

/// A generator in GKSL form,
/// L(ρ) = −i[H,ρ] + Σₖ γₖ (Vₖ ρ Vₖ† − ½{Vₖ†Vₖ, ρ}),
/// together with its transfer matrix. The dual of trace preservation of
/// e^{tL} makes the transfer trace-annihilating (L†(I) = 0), and 0 is
/// always an eigenvalue.
#[derive(Debug, Clone)]
pub struct GeneratorSpec {
    dim: usize,
    hamiltonian: HermitianMatrix,
    jumps: Vec<CMatrix>,
    rates: Vec<f64>,
    transfer: CMatrix,
}

/// Assembles a GKSL generator from a Hamiltonian, jump operators, and
/// nonnegative rates.
pub fn gksl_generator(
    hamiltonian: HermitianMatrix,
    jumps: Vec<CMatrix>,
    rates: Vec<f64>,
) -> Result<GeneratorSpec> {
    let d = hamiltonian.dim();
    if jumps.len() != rates.len() {
        return Err(MapError::DimensionMismatch(format!(
            "{} jump operators but {} rates",
            jumps.len(),
            rates.len()
        )));
    }
    for (i, v) in jumps.iter().enumerate() {
        if v.nrows() != d || v.ncols() != d {
            return Err(MapError::DimensionMismatch(format!(
                "jump operator {i} is {}x{}, expected {d}x{d}",
                v.nrows(),
                v.ncols()
            )));
        }
    }
    for (i, &g) in rates.iter().enumerate() {
        if g < 0.0 || !g.is_finite() {
            return Err(MapError::InvalidParameter(format!(
                "rate {i} is {g}; rates must be nonnegative"
            )));
        }
    }

    let id = CMatrix::identity(d, d);
    let h = hamiltonian.matrix();
    // −i[H,ρ]: transfer −i(I⊗H − Hᵀ⊗I)
    let mut transfer = (id.kronecker(h) - h.transpose().kronecker(&id)).map(|z| z * (-I));
    for (v, &g) in jumps.iter().zip(&rates) {
        let vdv = v.adjoint() * v;
        let dissipator = v.conjugate().kronecker(v)
            - (id.kronecker(&vdv) + vdv.transpose().kronecker(&id)).scale(0.5);
        transfer += dissipator.scale(g);
    }

    Ok(GeneratorSpec {
        dim: d,
        hamiltonian,
        jumps,
        rates,
        transfer,
    })
}

impl GeneratorSpec {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hamiltonian(&self) -> &HermitianMatrix {
        &self.hamiltonian
    }

    pub fn jumps(&self) -> &[CMatrix] {
        &self.jumps
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    pub fn transfer(&self) -> &CMatrix {
        &self.transfer
    }

    /// Max-abs entry of L†(I); zero for any GKSL generator.
    pub fn trace_annihilation_deviation(&self) -> f64 {
        let d = self.dim;
        let dual = unvec(
            &(self.transfer.adjoint() * vec_mat(&CMatrix::identity(d, d))),
            d,
        );
        maxabs(&dual)
    }

    pub fn spectrum(&self) -> Result<SpectrumReport> {
        spectrum_of_transfer(&self.transfer)
    }

    /// Frobenius norm of the transfer matrix.
    pub fn norm(&self) -> f64 {
        crate::linalg::fro_norm(&self.transfer)
    }

    /// Serializes as {"dim", "hamiltonian", "jumps", "rates"} with matrices
    /// as row-major [re, im] pairs.
    pub fn to_json(&self) -> String {
        let wire = GeneratorWire {
            dim: self.dim,
            hamiltonian: matrix_to_pairs(self.hamiltonian.matrix()),
            jumps: self.jumps.iter().map(matrix_to_pairs).collect(),
            rates: self.rates.clone(),
        };
        serde_json::to_string(&wire).expect("generator serialization cannot fail")
    }

    pub fn from_json(text: &str, tol: &Tolerances) -> Result<GeneratorSpec> {
        let wire: GeneratorWire = serde_json::from_str(text).map_err(|e| MapError::Parse {
            offset: 0,
            message: e.to_string(),
        })?;
        let h = HermitianMatrix::new(pairs_to_matrix(&wire.hamiltonian, wire.dim)?, tol)?;
        let jumps = wire
            .jumps
            .iter()
            .map(|j| pairs_to_matrix(j, wire.dim))
            .collect::<Result<Vec<_>>>()?;
        gksl_generator(h, jumps, wire.rates)
    }
}

#[derive(Serialize, Deserialize)]
struct GeneratorWire {
    dim: usize,
    hamiltonian: Vec<[f64; 2]>,
    jumps: Vec<Vec<[f64; 2]>>,
    rates: Vec<f64>,
}

fn matrix_to_pairs(m: &CMatrix) -> Vec<[f64; 2]> {
    let mut out = Vec::with_capacity(m.nrows() * m.ncols());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out.push([m[(i, j)].re, m[(i, j)].im]);
        }
    }
    out
}

fn pairs_to_matrix(pairs: &[[f64; 2]], dim: usize) -> Result<CMatrix> {
    if pairs.len() != dim * dim {
        return Err(MapError::DimensionMismatch(format!(
            "expected {} entries for a {dim}x{dim} matrix, got {}",
            dim * dim,
            pairs.len()
        )));
    }
    let mut m = CMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            let [re, im] = pairs[i * dim + j];
            m[(i, j)] = Complex64::new(re, im);
        }
    }
    Ok(m)
}

/// The semigroup element e^{tL} for t ≥ 0, via scaling-and-squaring Padé
/// exponentiation of the transfer matrix.
pub fn semigroup(gen: &GeneratorSpec, t: f64) -> Result<Superoperator> {
    if t < 0.0 || !t.is_finite() {
        return Err(MapError::InvalidParameter(format!(
            "semigroup time {t} must be finite and nonnegative"
        )));
    }
    let scaled = gen.transfer().scale(t);
    let exp = scaled.exp();
    if exp.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(MapError::NumericalFailure(format!(
            "matrix exponential overflowed at t = {t} (‖tL‖ = {:.3e})",
            t * gen.norm()
        )));
    }
    Superoperator::from_transfer(exp)
}

/// tr(L) ≤ d·min Re σ(L), the generator-level bound.
pub fn check_generator_bound(gen: &GeneratorSpec, tol: &Tolerances) -> Result<BoundReport> {
    let trace = gen.transfer().trace();
    if trace.im.abs() > tol.trace_imag {
        return Err(MapError::NonrealTrace { imag: trace.im });
    }
    let report = gen.spectrum()?;
    let rhs = gen.dim as f64 * report.min_re;
    Ok(BoundReport::le(
        InequalityId::GenBound,
        trace.re,
        rhs,
        tol.bound_slack,
    ))
}

/// Relaxation rates Γⱼ = −Re λⱼ over all d² eigenvalues of L, and the
/// bound max Γⱼ ≤ (1/d)·Σₖ Γₖ, which is the eigenvalue form of the
/// generator trace bound.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RelaxationReport {
    pub rates: Vec<f64>,
    pub max_rate: f64,
    pub mean_bound: f64,
    pub satisfied: bool,
}

pub fn relaxation_rates(gen: &GeneratorSpec, tol: &Tolerances) -> Result<RelaxationReport> {
    let report = gen.spectrum()?;
    let rates: Vec<f64> = report.eigenvalues.iter().map(|z| -z.re).collect();
    let max_rate = rates.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mean_bound = rates.iter().sum::<f64>() / gen.dim as f64;
    Ok(RelaxationReport {
        rates,
        max_rate,
        mean_bound,
        satisfied: max_rate <= mean_bound + tol.bound_slack,
    })
}

/// Relaxation report recast as a [`BoundReport`] row.
pub fn relaxation_bound(gen: &GeneratorSpec, tol: &Tolerances) -> Result<BoundReport> {
    let report = relaxation_rates(gen, tol)?;
    Ok(BoundReport::le(
        InequalityId::RelaxRate,
        report.max_rate,
        report.mean_bound,
        tol.bound_slack,
    ))
}

/// Residuals of the small-time limits recovering tr(L) and min Re σ(L)
/// from e^{L/n}:
/// r_trace(n) = |n(tr e^{L/n} − d²) − tr L| and
/// r_min_re(n) = |n(min Re σ(e^{L/n}) − 1) − min Re σ(L)|.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LimitResidual {
    pub n: u64,
    pub r_trace: f64,
    pub r_min_re: f64,
}

pub fn limit_formula_check(gen: &GeneratorSpec, n_list: &[u64]) -> Result<Vec<LimitResidual>> {
    let d2 = (gen.dim * gen.dim) as f64;
    let gen_spectrum = gen.spectrum()?;
    let gen_trace = gen.transfer().trace();
    let mut out = Vec::with_capacity(n_list.len());
    for &n in n_list {
        if n == 0 {
            return Err(MapError::InvalidParameter("n must be >= 1".into()));
        }
        let nf = n as f64;
        let step = semigroup(gen, 1.0 / nf)?;
        let step_spectrum = crate::spectral::spectrum(&step)?;
        let r_trace = ((step.trace_raw() - Complex64::from(d2)) * nf - gen_trace).norm();
        let r_min_re = (nf * (step_spectrum.min_re - 1.0) - gen_spectrum.min_re).abs();
        out.push(LimitResidual {
            n,
            r_trace,
            r_min_re,
        });
    }
    Ok(out)
}

/// Random GKSL generator: Gaussian Hermitian H of unit scale, `jump_count`
/// jump operators with standard complex Gaussian entries, rates uniform on
/// (0, 1]. Deterministic given the seed.
pub fn sample_gksl(dim: usize, jump_count: usize, seed: u64) -> Result<GeneratorSpec> {
    let mut rng = SplitMix64::new(seed);
    let g = gaussian_matrix(dim, dim, &mut rng);
    let h = HermitianMatrix::new((&g + g.adjoint()).scale(0.5), &Tolerances::default())?;
    let jumps: Vec<CMatrix> = (0..jump_count)
        .map(|_| gaussian_matrix(dim, dim, &mut rng))
        .collect();
    let rates: Vec<f64> = (0..jump_count)
        .map(|_| rng.next_f64_open_closed())
        .collect();
    gksl_generator(h, jumps, rates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{maxabs, multisets_match};
    use crate::positivity;
    use crate::rng::sub_seed;
    use crate::spectral;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn sigma_z() -> CMatrix {
        let mut m = CMatrix::identity(2, 2);
        m[(1, 1)] = Complex64::from(-1.0);
        m
    }

    fn lowering() -> CMatrix {
        // |0⟩⟨1|
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 1)] = Complex64::from(1.0);
        m
    }

    fn dephasing(gamma: f64) -> GeneratorSpec {
        gksl_generator(
            HermitianMatrix::new(CMatrix::zeros(2, 2), &tol()).unwrap(),
            vec![sigma_z()],
            vec![gamma],
        )
        .unwrap()
    }

    fn amplitude_damping(gamma: f64) -> GeneratorSpec {
        gksl_generator(
            HermitianMatrix::new(CMatrix::zeros(2, 2), &tol()).unwrap(),
            vec![lowering()],
            vec![gamma],
        )
        .unwrap()
    }

    #[test]
    fn zero_generator() {
        let gen = gksl_generator(
            HermitianMatrix::new(CMatrix::zeros(2, 2), &tol()).unwrap(),
            vec![],
            vec![],
        )
        .unwrap();
        assert_eq!(maxabs(gen.transfer()), 0.0);
        let report = check_generator_bound(&gen, &tol()).unwrap();
        assert_eq!(report.lhs, 0.0);
        assert_eq!(report.rhs, 0.0);
        assert!(report.satisfied);
        for r in limit_formula_check(&gen, &[1, 10, 100]).unwrap() {
            assert_eq!(r.r_trace, 0.0);
            assert!(r.r_min_re.abs() < 1e-12);
        }
    }

    #[test]
    fn dephasing_spectrum_and_saturation() {
        let gamma = 0.7;
        let gen = dephasing(gamma);
        let eigs = gen.spectrum().unwrap().eigenvalues;
        let expected = vec![
            Complex64::from(0.0),
            Complex64::from(0.0),
            Complex64::from(-2.0 * gamma),
            Complex64::from(-2.0 * gamma),
        ];
        assert!(multisets_match(&eigs, &expected, 1e-12));

        let report = check_generator_bound(&gen, &tol()).unwrap();
        assert!((report.lhs + 4.0 * gamma).abs() < 1e-12);
        assert!((report.rhs + 4.0 * gamma).abs() < 1e-12);
        assert!(report.slack.abs() <= 1e-10);

        let relax = relaxation_rates(&gen, &tol()).unwrap();
        assert!((relax.max_rate - 2.0 * gamma).abs() < 1e-12);
        assert!((relax.mean_bound - 2.0 * gamma).abs() < 1e-12);
        assert!(relax.satisfied);
    }

    #[test]
    fn amplitude_damping_spectrum_and_saturation() {
        let gamma = 0.4;
        let gen = amplitude_damping(gamma);
        let eigs = gen.spectrum().unwrap().eigenvalues;
        let expected = vec![
            Complex64::from(0.0),
            Complex64::from(-gamma),
            Complex64::from(-gamma / 2.0),
            Complex64::from(-gamma / 2.0),
        ];
        assert!(multisets_match(&eigs, &expected, 1e-12));

        let report = check_generator_bound(&gen, &tol()).unwrap();
        assert!((report.lhs + 2.0 * gamma).abs() < 1e-12);
        assert!(report.slack.abs() <= 1e-10);

        let relax = relaxation_rates(&gen, &tol()).unwrap();
        assert!((relax.max_rate - gamma).abs() < 1e-12);
        assert!((relax.mean_bound - gamma).abs() < 1e-12);
    }

    #[test]
    fn rejects_negative_rates() {
        assert!(gksl_generator(
            HermitianMatrix::new(CMatrix::zeros(2, 2), &tol()).unwrap(),
            vec![sigma_z()],
            vec![-0.1],
        )
        .is_err());
    }

    #[test]
    fn semigroup_at_zero_is_identity() {
        let gen = dephasing(0.3);
        let phi = semigroup(&gen, 0.0).unwrap();
        assert!(maxabs(&(phi.transfer() - Superoperator::identity(2).transfer())) < 1e-14);
        assert!(semigroup(&gen, -1.0).is_err());
    }

    #[test]
    fn dephasing_semigroup_damps_off_diagonals() {
        let gamma = 1.0;
        let gen = dephasing(gamma);
        let phi = semigroup(&gen, 50.0 / gamma).unwrap();
        let mut x = CMatrix::identity(2, 2).scale(0.5);
        x[(0, 1)] = Complex64::new(0.3, 0.1);
        x[(1, 0)] = Complex64::new(0.3, -0.1);
        let out = phi.apply(&x).unwrap();
        assert!(out[(0, 1)].norm() < 1e-20);
        assert!((out[(0, 0)] - x[(0, 0)]).norm() < 1e-12);
    }

    #[test]
    fn semigroup_law() {
        let gen = sample_gksl(2, 4, 99).unwrap();
        let s = 0.3;
        let t = 0.9;
        let whole = semigroup(&gen, s + t).unwrap();
        let composed = semigroup(&gen, s)
            .unwrap()
            .compose(&semigroup(&gen, t).unwrap())
            .unwrap();
        assert!(maxabs(&(whole.transfer() - composed.transfer())) < 1e-9);
    }

    #[test]
    fn gksl_samples_generate_cptp_semigroups() {
        for i in 0..5u64 {
            let gen = sample_gksl(3, 9, sub_seed(600, i)).unwrap();
            assert!(gen.trace_annihilation_deviation() <= 1e-10);
            let spectrum = gen.spectrum().unwrap();
            assert!(spectrum.max_re <= 1e-9);
            assert!(
                spectrum.eigenvalues.iter().any(|z| z.norm() <= 1e-8),
                "zero eigenvalue missing"
            );
            for t in [0.1, 1.0, 10.0] {
                let phi = semigroup(&gen, t).unwrap();
                assert!(phi.trace_preservation_deviation() <= 1e-8);
                let cp = positivity::is_cp(&phi, &tol()).unwrap();
                assert!(cp.min_choi_eigenvalue >= -1e-8);
            }
            for t in [0.01, 0.1, 1.0] {
                let phi = semigroup(&gen, t).unwrap();
                assert!(spectral::check_map_bound(&phi, &tol()).unwrap().satisfied);
            }
            let bound = check_generator_bound(&gen, &tol()).unwrap();
            let relax = relaxation_rates(&gen, &tol()).unwrap();
            assert!(bound.slack >= -1e-9);
            assert_eq!(bound.satisfied, relax.satisfied);
        }
    }

    #[test]
    fn limit_residuals_decrease_for_dephasing() {
        let gamma = 0.8;
        let gen = dephasing(gamma);
        let residuals = limit_formula_check(&gen, &[1, 10, 100, 1000]).unwrap();
        for pair in residuals.windows(2) {
            assert!(pair[1].r_trace <= pair[0].r_trace + 1e-12);
            assert!(pair[1].r_min_re <= pair[0].r_min_re + 1e-12);
        }
        let last = residuals.last().unwrap();
        assert!(
            last.r_trace <= 1e-2 * gamma * gamma,
            "r1(1000) = {}",
            last.r_trace
        );
    }

    #[test]
    fn limit_residuals_decrease_for_random_generators() {
        for i in 0..5u64 {
            let gen = sample_gksl(2, 4, sub_seed(700, i)).unwrap();
            let residuals = limit_formula_check(&gen, &[10, 100, 1000]).unwrap();
            for pair in residuals.windows(2) {
                assert!(pair[1].r_trace <= pair[0].r_trace + 1e-12);
                assert!(pair[1].r_min_re <= pair[0].r_min_re + 1e-12);
            }
        }
    }

    #[test]
    fn generator_json_round_trip() {
        let gen = sample_gksl(2, 3, 77).unwrap();
        let text = gen.to_json();
        let back = GeneratorSpec::from_json(&text, &tol()).unwrap();
        assert!(maxabs(&(back.transfer() - gen.transfer())) < 1e-12);
        assert_eq!(back.rates(), gen.rates());
    }
}
