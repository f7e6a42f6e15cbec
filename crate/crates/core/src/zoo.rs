//! Named example maps with closed-form reference data, and the `zoo verify`
//! manifest that checks every reference value numerically.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{MapError, Result};
use crate::linalg::{maxabs, multisets_match, CMatrix, ONE};
use crate::positivity;
use crate::spectral::{self, SpectrumReport};
use crate::superop::Superoperator;
use crate::transition::{OrthonormalBasis, TransitionMatrix};

/// Parameters of the one-parameter trace-preserving family
/// Φ_α(X) = [α(d−1)tr(X)I − αX + (1−α)Xᵀ] / (1 + α(d−2)(d+1)).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TTParams {
    pub dim: usize,
    pub alpha: f64,
}

impl TTParams {
    pub fn new(dim: usize, alpha: f64) -> Result<Self> {
        if dim < 2 {
            return Err(MapError::InvalidParameter(format!(
                "the family needs dim >= 2, got {dim}"
            )));
        }
        if !(0.0..=1.0).contains(&alpha) {
            return Err(MapError::InvalidParameter(format!(
                "alpha {alpha} outside [0, 1]"
            )));
        }
        Ok(Self { dim, alpha })
    }

    /// Normalization 1 + α(d−2)(d+1).
    pub fn normalizer(&self) -> f64 {
        let d = self.dim as f64;
        1.0 + self.alpha * (d - 2.0) * (d + 1.0)
    }
}

/// The Φ_α family: positive but not 2-positive for α ∈ [0, 1/d), completely
/// positive for α ∈ [1/d, 1/2], (d−1)-positive but not CP for α ∈ (1/2, 1].
/// Trace-preserving by construction; α = 0 at d = 2 is the transpose map.
pub fn tt_map(params: &TTParams) -> Superoperator {
    let d = params.dim;
    let alpha = params.alpha;
    let n = params.normalizer();
    let trace_part = {
        let v = crate::linalg::vec_mat(&CMatrix::identity(d, d));
        &v * v.transpose()
    };
    let id_part = CMatrix::identity(d * d, d * d);
    let transpose_part = Superoperator::transpose_map(d);
    let transfer = (trace_part.scale(alpha * (d as f64 - 1.0)) - id_part.scale(alpha)
        + transpose_part.transfer().scale(1.0 - alpha))
    .scale(1.0 / n);
    Superoperator::from_transfer(transfer).expect("square by construction")
}

/// Closed-form spectrum of Φ_α: simple eigenvalue 1, eigenvalue −1/N with
/// multiplicity d(d−1)/2, eigenvalue (1−2α)/N with multiplicity
/// (d−1)(d+2)/2, where N is the normalizer.
pub fn tt_closed_spectrum(params: &TTParams) -> SpectrumReport {
    let d = params.dim;
    let n = params.normalizer();
    let mut eigs = vec![ONE];
    let anti = Complex64::from(-1.0 / n);
    let sym = Complex64::from((1.0 - 2.0 * params.alpha) / n);
    eigs.extend(std::iter::repeat_n(anti, d * (d - 1) / 2));
    eigs.extend(std::iter::repeat_n(sym, (d - 1) * (d + 2) / 2));
    SpectrumReport::from_eigenvalues(eigs)
}

/// Threshold (3−d)/((d²−1)(d−2)+2): the trace bound holds for Φ_α exactly
/// when α is at least this value. Equals 1/2 at d = 2 and 0 at d = 3;
/// negative for d ≥ 4, where the bound holds for every α.
pub fn tt_threshold(dim: usize) -> f64 {
    let d = dim as f64;
    (3.0 - d) / ((d * d - 1.0) * (d - 2.0) + 2.0)
}

/// Parameters of the tightness construction: a unitary-conjugation map
/// violating the coefficient-c bound for a chosen c > d.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TightnessParams {
    pub dim: usize,
    pub c: f64,
    /// Scanned point with f(x) > 0.
    pub x: f64,
    /// arccos(x).
    pub alpha: f64,
}

/// The objective f(x) = (4−2c)x² + (4d−8)x + (4−4d+2c). It vanishes at
/// x = 1 with f'(1) = 4(d−c) < 0 for c > d, so points with f(x) > 0 exist
/// arbitrarily close to 1. f(x) equals tr(Φ) − c·min Re σ(Φ) − d² + c for
/// the constructed map.
pub fn tightness_objective(dim: usize, c: f64, x: f64) -> f64 {
    let d = dim as f64;
    (4.0 - 2.0 * c) * x * x + (4.0 * d - 8.0) * x + (4.0 - 4.0 * d + 2.0 * c)
}

/// Builds the tightness map for c > d: scans x = 1 − 2^{−m} until
/// f(x) > 0, sets α = arccos(x), H = α(|0⟩⟨0| − |1⟩⟨1|) embedded in d
/// dimensions, U = e^{iH}, Φ = U(·)U†. The result is completely positive
/// and trace-preserving with trace (d−2+2x)² and min Re σ = 2x² − 1, and
/// strictly violates the coefficient-c bound.
pub fn tightness_map(dim: usize, c: f64) -> Result<(TightnessParams, Superoperator)> {
    if dim < 2 {
        return Err(MapError::InvalidParameter(format!(
            "tightness construction needs dim >= 2, got {dim}"
        )));
    }
    if c <= dim as f64 {
        return Err(MapError::InvalidParameter(format!(
            "tightness construction requires c > d, got c = {c}, d = {dim}"
        )));
    }
    let mut x = 0.0;
    let mut found = false;
    for m in 1..200u32 {
        x = 1.0 - 0.5f64.powi(m as i32);
        if tightness_objective(dim, c, x) > 0.0 {
            found = true;
            break;
        }
    }
    if !found {
        return Err(MapError::NumericalFailure(format!(
            "no x with positive objective found for d = {dim}, c = {c}"
        )));
    }
    let alpha = x.acos();
    let mut u = CMatrix::identity(dim, dim);
    u[(0, 0)] = Complex64::from_polar(1.0, alpha);
    u[(1, 1)] = Complex64::from_polar(1.0, -alpha);
    let map = Superoperator::unitary_conjugation(&u)?;
    Ok((TightnessParams { dim, c, x, alpha }, map))
}

/// The qubit map Φ(X) = 4X₀₀|0⟩⟨0| + σₓ Xᵀ σₓ: positive but not
/// 2-positive, with trace 6, yet satisfying the transition-matrix trace
/// inequality in every orthonormal basis.
pub fn example3_map() -> Superoperator {
    let sx = sigma_x();
    Superoperator::from_action(2, |x| {
        let mut out = &sx * x.transpose() * &sx;
        out[(0, 0)] += x[(0, 0)] * 4.0;
        out
    })
}

/// The qubit map Φ(X) = σₓ Xᵀ σₓ: positive but not 2-positive, violating
/// the transition-matrix trace inequality in the standard basis (its
/// transition matrix there is σₓ, of trace 0).
pub fn sigma_x_transpose_map() -> Superoperator {
    let sx = sigma_x();
    Superoperator::from_action(2, |x| &sx * x.transpose() * &sx)
}

fn sigma_x() -> CMatrix {
    let mut m = CMatrix::zeros(2, 2);
    m[(0, 1)] = ONE;
    m[(1, 0)] = ONE;
    m
}

/// Special unitary U(φ, ξ, ω) = [[cos φ e^{iξ}, sin φ e^{iω}],
/// [−sin φ e^{−iω}, cos φ e^{−iξ}]]; its columns form the bases with
/// transition matrix [[4cos²φ, 1], [1, 4sin²φ]] for the map of
/// [`example3_map`].
pub fn special_unitary(phi: f64, xi: f64, omega: f64) -> CMatrix {
    let mut u = CMatrix::zeros(2, 2);
    u[(0, 0)] = Complex64::from_polar(phi.cos(), xi);
    u[(0, 1)] = Complex64::from_polar(phi.sin(), omega);
    u[(1, 0)] = -Complex64::from_polar(phi.sin(), -omega);
    u[(1, 1)] = Complex64::from_polar(phi.cos(), -xi);
    u
}

/// One entry of the verification manifest.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub key: String,
    pub passed: bool,
    pub detail: String,
}

/// Manifest of all reference-value checks on the example maps.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyManifest {
    pub entries: Vec<ManifestEntry>,
}

impl VerifyManifest {
    pub fn all_passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn failing_keys(&self) -> Vec<&str> {
        self.entries
            .iter()
            .filter(|e| !e.passed)
            .map(|e| e.key.as_str())
            .collect()
    }

    pub fn to_json(&self) -> String {
        let mut map = serde_json::Map::new();
        for entry in &self.entries {
            map.insert(
                entry.key.clone(),
                serde_json::json!({
                    "status": if entry.passed { "pass" } else { "fail" },
                    "detail": entry.detail,
                }),
            );
        }
        serde_json::to_string_pretty(&serde_json::Value::Object(map))
            .expect("manifest serialization cannot fail")
    }
}

/// Runs every reference-value check of this module. `alpha_step` sets the
/// grid spacing for the closed-form spectrum sweep; randomized checks
/// derive their streams from `seed`.
pub fn verify(seed: u64, alpha_step: f64, tol: &Tolerances) -> Result<VerifyManifest> {
    if !(alpha_step > 0.0 && alpha_step <= 1.0) {
        return Err(MapError::InvalidParameter(format!(
            "alpha grid step {alpha_step} outside (0, 1]"
        )));
    }
    let mut entries = Vec::new();
    let mut push = |key: &str, passed: bool, detail: String| {
        entries.push(ManifestEntry {
            key: key.to_string(),
            passed,
            detail,
        });
    };

    // Family 1: the Φ_α maps.
    {
        let transpose = tt_map(&TTParams::new(2, 0.0)?);
        let tr = transpose.trace(tol)?;
        let matches_transpose =
            maxabs(&(transpose.transfer() - Superoperator::transpose_map(2).transfer())) <= 1e-14;
        push(
            "Example_1_trace_transpose_d2",
            (tr - 2.0).abs() <= 1e-12 && matches_transpose,
            format!("trace {tr} (expect 2), transpose transfer match: {matches_transpose}"),
        );

        let cp_report = positivity::is_cp(&tt_map(&TTParams::new(3, 1.0 / 3.0)?), tol)?;
        push(
            "Example_1_cp_d3_alpha_third",
            cp_report.is_cp,
            format!("min Choi eigenvalue {:.3e}", cp_report.min_choi_eigenvalue),
        );

        let tr_half = tt_map(&TTParams::new(2, 0.5)?).trace(tol)?;
        push(
            "Example_1_trace_zero_alpha_half",
            tr_half.abs() <= 1e-12,
            format!("trace {tr_half} (expect 0)"),
        );

        push(
            "Example_1_threshold_d2",
            tt_threshold(2) == 0.5,
            format!("threshold {} (expect 0.5)", tt_threshold(2)),
        );
        push(
            "Example_1_threshold_d3",
            tt_threshold(3) == 0.0,
            format!("threshold {} (expect 0)", tt_threshold(3)),
        );

        let steps = (1.0 / alpha_step).round() as usize;
        let mut grid_ok = true;
        let mut flip_ok = true;
        let mut worst = 0.0f64;
        for dim in 2..=5usize {
            for s in 0..=steps {
                let alpha = (s as f64 * alpha_step).min(1.0);
                let params = TTParams::new(dim, alpha)?;
                let map = tt_map(&params);
                let numeric = spectral::spectrum(&map)?;
                let closed = tt_closed_spectrum(&params);
                if !multisets_match(&numeric.eigenvalues, &closed.eigenvalues, 1e-10) {
                    grid_ok = false;
                }
                let report = spectral::check_map_bound(&map, tol)?;
                let expected = alpha >= tt_threshold(dim) - 1e-12;
                if report.satisfied != expected {
                    flip_ok = false;
                }
                worst = worst.max(
                    numeric
                        .eigenvalues
                        .iter()
                        .zip(&closed.eigenvalues)
                        .map(|(a, b)| (a - b).norm())
                        .fold(0.0, f64::max),
                );
            }
        }
        push(
            "Example_1_spectrum_grid",
            grid_ok,
            format!("closed-form vs numeric spectra on d in 2..=5, step {alpha_step}; worst sorted gap {worst:.3e}"),
        );
        push(
            "Example_1_bound_flip",
            flip_ok,
            "trace-bound verdict flips at the threshold on the grid".to_string(),
        );
    }

    // Family 2: the tightness construction.
    {
        let mut all_ok = true;
        let mut detail = String::new();
        for (dim, c) in [(2usize, 2.5f64), (3, 4.0), (4, 5.0)] {
            let (params, map) = tightness_map(dim, c)?;
            let cp = positivity::is_cp(&map, tol)?;
            let tp = map.is_trace_preserving(tol);
            let bound = spectral::check_map_bound(&map, tol)?;
            let optimality = spectral::check_optimality(&map, c, tol)?;
            let ok = cp.is_cp
                && tp
                && bound.satisfied
                && optimality.satisfied
                && optimality.slack > 1e-6;
            all_ok &= ok;
            detail.push_str(&format!(
                "(d={dim}, c={c}): x={},margin={:.3e}; ",
                params.x, optimality.slack
            ));
        }
        push("Example_2_optimality", all_ok, detail);

        let (params, map) = tightness_map(3, 3.5)?;
        let numeric = spectral::spectrum(&map)?;
        let expected: Vec<Complex64> = [
            params.alpha,
            -params.alpha,
            2.0 * params.alpha,
            -2.0 * params.alpha,
        ]
        .iter()
        .map(|&a| Complex64::from_polar(1.0, a))
        .collect();
        let contains_all = expected
            .iter()
            .all(|e| numeric.eigenvalues.iter().any(|z| (z - e).norm() <= 1e-10));
        let min_re_ok = (numeric.min_re - (2.0 * params.x * params.x - 1.0)).abs() <= 1e-10;
        push(
            "Example_2_spectrum_d3",
            contains_all && min_re_ok,
            format!(
                "phase eigenvalues present: {contains_all}; min Re {} vs 2x²−1 = {}",
                numeric.min_re,
                2.0 * params.x * params.x - 1.0
            ),
        );
    }

    // Family 3: the explicit qubit map.
    {
        let map = example3_map();
        let choi = map.choi();
        let expected = expected_example3_choi();
        let dev = maxabs(&(choi.matrix() - &expected));
        push(
            "Example_3_choi",
            dev <= 1e-12,
            format!(
                "expected [[4,0,0,1],[0,1,0,0],[0,0,1,0],[1,0,0,0]]; entrywise deviation {dev:.3e}"
            ),
        );

        let tr = map.trace(tol)?;
        push(
            "Example_3_trace",
            (tr - 6.0).abs() <= 1e-12,
            format!("trace {tr} (expect 6)"),
        );

        let mut rng = crate::rng::SplitMix64::new(crate::rng::sub_seed(seed, 3));
        let mut transition_ok = true;
        let mut worst = 0.0f64;
        for _ in 0..100 {
            let phi_angle = rng.next_f64() * std::f64::consts::PI;
            let xi = rng.next_f64() * std::f64::consts::TAU;
            let om = rng.next_f64() * std::f64::consts::TAU;
            let u = special_unitary(phi_angle, xi, om);
            let basis = OrthonormalBasis::from_columns(u, tol)?;
            let t = TransitionMatrix::new(&map, &basis)?;
            let cos2 = phi_angle.cos().powi(2);
            let expected = [[4.0 * cos2, 1.0], [1.0, 4.0 * (1.0 - cos2)]];
            let mut dev = (t.trace() - 4.0).abs();
            for (j, row) in expected.iter().enumerate() {
                for (k, want) in row.iter().enumerate() {
                    dev = dev.max((t.entries()[(j, k)] - want).abs());
                }
            }
            worst = worst.max(dev);
            if dev > 1e-10 {
                transition_ok = false;
            }
        }
        push(
            "Example_3_transition",
            transition_ok,
            format!("100 random special-unitary bases; worst deviation {worst:.3e}"),
        );

        let mut lemma_ok = true;
        for i in 0..10u64 {
            let mut basis_rng = crate::rng::SplitMix64::new(crate::rng::sub_seed(seed, 100 + i));
            let basis = OrthonormalBasis::haar(2, &mut basis_rng);
            let report = crate::transition::check_lemma_tg(&map, &basis, tol)?;
            if !report.satisfied
                || (report.lhs - 6.0).abs() > 1e-10
                || (report.rhs - 8.0).abs() > 1e-9
            {
                lemma_ok = false;
            }
        }
        push(
            "Example_3_lemma_bound",
            lemma_ok,
            "trace 6 <= 2·tr(T_G) = 8 in 10 random bases".to_string(),
        );

        let k2 = positivity::falsify_k_positivity(&map, 2, 20, crate::rng::sub_seed(seed, 4), tol)?;
        let k1 = positivity::falsify_k_positivity(&map, 1, 20, crate::rng::sub_seed(seed, 5), tol)?;
        push(
            "Example_3_not_2positive",
            k2.best_value < -tol.witness_certify && k1.best_value >= -tol.witness_certify,
            format!(
                "rank-2 minimum {:.6} (negative expected), rank-1 minimum {:.3e} (nonnegative expected)",
                k2.best_value, k1.best_value
            ),
        );
    }

    // The σₓ-transpose counterexample.
    {
        let map = sigma_x_transpose_map();
        let tr = map.trace(tol)?;
        push(
            "Counterexample_sigma_x_trace",
            (tr - 2.0).abs() <= 1e-12,
            format!("trace {tr} (expect 2)"),
        );

        let basis = OrthonormalBasis::standard(2);
        let t = TransitionMatrix::new(&map, &basis)?;
        let expected = [[0.0, 1.0], [1.0, 0.0]];
        let mut dev = 0.0f64;
        for (j, row) in expected.iter().enumerate() {
            for (k, want) in row.iter().enumerate() {
                dev = dev.max((t.entries()[(j, k)] - want).abs());
            }
        }
        push(
            "Counterexample_sigma_x_transition",
            dev <= 1e-12,
            format!("standard-basis transition matrix deviation {dev:.3e} from σₓ"),
        );

        let report = crate::transition::check_lemma_tg(&map, &basis, tol)?;
        push(
            "Counterexample_sigma_x_violation",
            !report.satisfied && (report.lhs - 2.0).abs() <= 1e-12 && report.rhs.abs() <= 1e-12,
            format!(
                "lhs {} rhs {} satisfied {}",
                report.lhs, report.rhs, report.satisfied
            ),
        );

        let cp = positivity::is_cp(&map, tol)?;
        push(
            "Counterexample_sigma_x_not_cp",
            !cp.is_cp && (cp.min_choi_eigenvalue + 1.0).abs() <= 1e-9,
            format!(
                "min Choi eigenvalue {:.6} (expect −1)",
                cp.min_choi_eigenvalue
            ),
        );
    }

    Ok(VerifyManifest { entries })
}

/// The reference 4×4 Choi matrix of [`example3_map`].
pub fn expected_example3_choi() -> CMatrix {
    let rows = [
        [4.0, 0.0, 0.0, 1.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [1.0, 0.0, 0.0, 0.0],
    ];
    CMatrix::from_fn(4, 4, |i, j| Complex64::from(rows[i][j]))
}
