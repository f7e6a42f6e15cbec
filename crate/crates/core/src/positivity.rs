//! Positivity classification: the Choi criterion for complete positivity,
//! seesaw falsifiers for k-positivity (k ∈ {1,2}), and seeded random
//! ensembles of maps.
//!
//! The falsifier minimizes ⟨ψ|C(Φ)|ψ⟩ over unit vectors ψ = Σᵢ₌₁ᵏ aᵢ⊗bᵢ of
//! Schmidt rank ≤ k. With one side held orthonormal the optimum of the
//! other side is the minimal eigenvector of the Choi matrix contracted with
//! the fixed side (a kd×kd Hermitian problem), so each half-step is an
//! exact minimization and the objective never increases. A value below the
//! certification threshold proves the map is not k-positive; a nonnegative
//! minimum is evidence only, never a certificate.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{MapError, Result};
use crate::linalg::{hermitian_eigen, hermitian_power, maxabs, unvec, vec_mat, CMatrix, CVector};
use crate::rng::{gaussian_matrix, haar_unitary, sub_seed, SplitMix64};
use crate::superop::{ChoiMatrix, Superoperator};
use crate::transition::Rank2Witness;

/// Outcome of the Choi positivity test.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CpReport {
    pub is_cp: bool,
    /// Smallest eigenvalue of the (Hermitian part of the) Choi matrix.
    pub min_choi_eigenvalue: f64,
    /// Max-abs deviation of the Choi matrix from Hermiticity.
    pub hermiticity_deviation: f64,
}

/// Complete positivity via the Choi criterion: CP iff the Choi matrix is
/// positive semidefinite (and in particular Hermitian).
pub fn is_cp(phi: &Superoperator, tol: &Tolerances) -> Result<CpReport> {
    let choi = phi.choi();
    let dev = choi.hermiticity_deviation();
    let min = choi.min_eigenvalue()?;
    let hermitian = dev <= tol.hermiticity(maxabs(choi.matrix()));
    Ok(CpReport {
        is_cp: hermitian && min >= -tol.cp_min_eig,
        min_choi_eigenvalue: min,
        hermiticity_deviation: dev,
    })
}

/// Result of one multi-start seesaw falsification run.
#[derive(Debug, Clone)]
pub struct FalsifyOutcome {
    pub k: usize,
    /// Most negative witness value found across all restarts.
    pub best_value: f64,
    /// Present only when `best_value` certifies a violation (below
    /// −`witness_certify`).
    pub witness: Option<Rank2Witness>,
    pub restarts: usize,
    /// Restarts that hit the iteration cap before converging.
    pub unconverged_restarts: usize,
    /// Largest per-step objective increase observed (eigensolver noise;
    /// exact seesaw steps never increase the objective).
    pub max_step_increase: f64,
    pub seed: u64,
}

/// Seesaw minimization of ⟨ψ|C(Φ)|ψ⟩ over Schmidt-rank ≤ k unit vectors,
/// multi-started from seeded random bases. k must be 1 or 2.
pub fn falsify_k_positivity(
    phi: &Superoperator,
    k: usize,
    restarts: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<FalsifyOutcome> {
    if !(k == 1 || k == 2) {
        return Err(MapError::InvalidParameter(format!(
            "k-positivity falsifier supports k ∈ {{1, 2}}, got {k}"
        )));
    }
    if restarts == 0 {
        return Err(MapError::InvalidParameter("restarts must be >= 1".into()));
    }
    let d = phi.dim();
    let choi = phi.choi();
    let c = (choi.matrix() + choi.matrix().adjoint()).scale(0.5);

    let mut best_value = f64::INFINITY;
    let mut best_factors: Option<(CMatrix, CMatrix)> = None;
    let mut unconverged = 0usize;
    let mut max_increase = 0.0f64;

    for restart in 0..restarts {
        let mut rng = SplitMix64::new(sub_seed(seed, restart as u64));
        let mut b = orthonormal_columns(&gaussian_matrix(d, k, &mut rng));
        let mut a = CMatrix::zeros(d, k);
        let mut previous = f64::INFINITY;
        let mut converged = false;

        for _ in 0..tol.seesaw_max_iters {
            // a-step: with the b side orthonormal, the optimal concatenated
            // a-vector is the minimal eigenvector of the contracted Choi
            // matrix. The previous iterate stays inside the search family,
            // so each exact half-step is non-increasing.
            let bo = orthonormal_columns(&b);
            let (val_a, avec) = min_eig_step(&contract_b(&c, &bo, d, k))?;
            if val_a > previous {
                max_increase = max_increase.max(val_a - previous);
            }

            // b-step, symmetrically.
            let ao = orthonormal_columns(&columns_from_concat(&avec, d, k));
            let (val_b, bvec) = min_eig_step(&contract_a(&c, &ao, d, k))?;
            if val_b > val_a {
                max_increase = max_increase.max(val_b - val_a);
            }
            a = ao;
            b = columns_from_concat(&bvec, d, k);

            if previous - val_b < tol.seesaw_improvement {
                previous = previous.min(val_b);
                converged = true;
                break;
            }
            previous = val_b;
        }
        if !converged {
            unconverged += 1;
        }
        if previous < best_value {
            best_value = previous;
            best_factors = Some((a.clone(), b.clone()));
        }
    }

    let witness = if best_value < -tol.witness_certify {
        let (a, b) = best_factors.expect("a finite best value has factors");
        let zero = CVector::zeros(d);
        let (a2, b2) = if k == 2 {
            (a.column(1).into_owned(), b.column(1).into_owned())
        } else {
            (zero.clone(), zero)
        };
        let witness = Rank2Witness::new(
            phi,
            a.column(0).into_owned(),
            b.column(0).into_owned(),
            a2,
            b2,
        )?;
        Some(witness)
    } else {
        None
    };

    Ok(FalsifyOutcome {
        k,
        best_value,
        witness,
        restarts,
        unconverged_restarts: unconverged,
        max_step_increase: max_increase,
        seed,
    })
}

/// Positivity classification record: trace preservation, Hermiticity
/// preservation, complete positivity, and the k ∈ {1,2} falsifier results.
#[derive(Debug, Clone)]
pub struct PositivityVerdict {
    pub is_tp: bool,
    pub is_hp: bool,
    pub is_cp: bool,
    pub min_choi_eigenvalue: f64,
    pub k1_witness: Option<Rank2Witness>,
    pub k2_witness: Option<Rank2Witness>,
    pub min_found_k1: f64,
    pub min_found_k2: f64,
    pub restarts: usize,
    pub seed: u64,
}

/// Runs the CP test plus both falsifiers.
pub fn classify(
    phi: &Superoperator,
    restarts: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<PositivityVerdict> {
    let cp = is_cp(phi, tol)?;
    let k1 = falsify_k_positivity(phi, 1, restarts, sub_seed(seed, 1), tol)?;
    let k2 = falsify_k_positivity(phi, 2, restarts, sub_seed(seed, 2), tol)?;
    Ok(PositivityVerdict {
        is_tp: phi.is_trace_preserving(tol),
        is_hp: phi.is_hermiticity_preserving(tol),
        is_cp: cp.is_cp,
        min_choi_eigenvalue: cp.min_choi_eigenvalue,
        k1_witness: k1.witness,
        k2_witness: k2.witness,
        min_found_k1: k1.best_value,
        min_found_k2: k2.best_value,
        restarts,
        seed,
    })
}

/// Named random ensembles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EnsembleId {
    /// CPTP maps from Ginibre-random Choi matrices, renormalized to trace
    /// preservation.
    #[serde(rename = "CPTP_GINIBRE")]
    CptpGinibre,
    /// Completely positive maps without the trace-preservation
    /// renormalization (Choi trace normalized to d).
    #[serde(rename = "CP_GINIBRE")]
    CpGinibre,
    /// Trace-preserving decomposable maps Φ₁ + Φ₂∘τ.
    #[serde(rename = "DECOMPOSABLE")]
    Decomposable,
    /// Haar-random unitary conjugations.
    #[serde(rename = "UNITARY")]
    Unitary,
    /// GKSL generators (sampled by the generators module).
    #[serde(rename = "GKSL")]
    Gksl,
}

impl EnsembleId {
    pub fn as_str(&self) -> &'static str {
        match self {
            EnsembleId::CptpGinibre => "CPTP_GINIBRE",
            EnsembleId::CpGinibre => "CP_GINIBRE",
            EnsembleId::Decomposable => "DECOMPOSABLE",
            EnsembleId::Unitary => "UNITARY",
            EnsembleId::Gksl => "GKSL",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "CPTP_GINIBRE" => Some(EnsembleId::CptpGinibre),
            "CP_GINIBRE" => Some(EnsembleId::CpGinibre),
            "DECOMPOSABLE" => Some(EnsembleId::Decomposable),
            "UNITARY" => Some(EnsembleId::Unitary),
            "GKSL" => Some(EnsembleId::Gksl),
            _ => None,
        }
    }
}

/// Configuration of a seeded ensemble scan. `rank` is the Choi/Kraus rank
/// for map ensembles and the jump-operator count for GKSL.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub dim: usize,
    pub count: usize,
    pub seed: u64,
    pub rank: usize,
    pub ensemble: EnsembleId,
}

impl EnsembleConfig {
    pub fn new(ensemble: EnsembleId, dim: usize, count: usize, seed: u64) -> Self {
        Self {
            dim,
            count,
            seed,
            rank: dim * dim,
            ensemble,
        }
    }

    pub fn with_rank(mut self, rank: usize) -> Self {
        self.rank = rank;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim < 1 {
            return Err(MapError::InvalidParameter("dim must be >= 1".into()));
        }
        if self.count < 1 {
            return Err(MapError::InvalidParameter("count must be >= 1".into()));
        }
        if self.rank < 1 || self.rank > self.dim * self.dim {
            return Err(MapError::InvalidParameter(format!(
                "rank {} outside [1, {}]",
                self.rank,
                self.dim * self.dim
            )));
        }
        Ok(())
    }

    /// Loads from JSON or TOML, chosen by file extension.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| MapError::InvalidParameter(format!("{}: {e}", path.display())))?;
        let config: EnsembleConfig = if path.extension().is_some_and(|e| e == "toml") {
            toml_from_str(&text)?
        } else {
            serde_json::from_str(&text).map_err(|e| MapError::Parse {
                offset: 0,
                message: e.to_string(),
            })?
        };
        config.validate()?;
        Ok(config)
    }
}

// Minimal TOML reader for flat EnsembleConfig files; avoids a parser
// dependency for a five-key format.
fn toml_from_str(text: &str) -> Result<EnsembleConfig> {
    let mut dim = None;
    let mut count = None;
    let mut seed = None;
    let mut rank = None;
    let mut ensemble = None;
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(MapError::Parse {
                offset: 0,
                message: format!("not a key = value line: {line}"),
            });
        };
        let key = key.trim();
        let value = value.trim().trim_matches('"');
        match key {
            "dim" => dim = Some(parse_num(key, value)?),
            "count" => count = Some(parse_num(key, value)?),
            "seed" => seed = Some(parse_num(key, value)?),
            "rank" => rank = Some(parse_num(key, value)?),
            "ensemble" => {
                ensemble = Some(EnsembleId::parse(value).ok_or_else(|| MapError::Parse {
                    offset: 0,
                    message: format!("unknown ensemble {value}"),
                })?)
            }
            _ => {
                return Err(MapError::Parse {
                    offset: 0,
                    message: format!("unknown key {key}"),
                })
            }
        }
    }
    let dim = dim.ok_or_else(|| missing("dim"))? as usize;
    Ok(EnsembleConfig {
        dim,
        count: count.ok_or_else(|| missing("count"))? as usize,
        seed: seed.ok_or_else(|| missing("seed"))?,
        rank: rank.map(|r| r as usize).unwrap_or(dim * dim),
        ensemble: ensemble.ok_or_else(|| missing("ensemble"))?,
    })
}

fn parse_num(key: &str, value: &str) -> Result<u64> {
    value.parse().map_err(|_| MapError::Parse {
        offset: 0,
        message: format!("{key}: expected an integer, got {value}"),
    })
}

fn missing(key: &str) -> MapError {
    MapError::Parse {
        offset: 0,
        message: format!("missing key {key}"),
    }
}

/// CPTP map from a Ginibre-random Choi matrix of the given rank:
/// C = GG† with complex Gaussian G, renormalized by
/// C ← (Q^{-1/2} ⊗ I) C (Q^{-1/2} ⊗ I) with Q the partial trace of C over
/// the output factor. Deterministic given the seed; the rare singular-Q
/// draw resamples with an incremented sub-seed.
pub fn sample_cptp(dim: usize, rank: usize, seed: u64) -> Result<Superoperator> {
    let (map, _) = sample_cptp_with_diagnostics(dim, rank, seed)?;
    Ok(map)
}

/// As [`sample_cptp`], additionally reporting how many draws were rejected
/// for a near-singular partial trace.
pub fn sample_cptp_with_diagnostics(
    dim: usize,
    rank: usize,
    seed: u64,
) -> Result<(Superoperator, u32)> {
    let n = dim * dim;
    if rank < 1 || rank > n {
        return Err(MapError::InvalidParameter(format!(
            "Choi rank {rank} outside [1, {n}]"
        )));
    }
    for attempt in 0..64u32 {
        let mut rng = SplitMix64::new(sub_seed(seed, attempt as u64));
        let g = gaussian_matrix(n, rank, &mut rng);
        let c = &g * g.adjoint();
        let choi = ChoiMatrix::new(dim, c.clone())?;
        let q = choi.partial_trace_output();
        let (q_eigs, _) = hermitian_eigen(&q)?;
        let min = q_eigs.first().copied().unwrap_or(0.0);
        let max = q_eigs.last().copied().unwrap_or(0.0);
        if min <= 1e-12 * max.max(1.0) {
            continue;
        }
        let q_isqrt = hermitian_power(&q, -0.5, 0.0)?;
        let sandwich = q_isqrt.kronecker(&CMatrix::identity(dim, dim));
        let normalized = &sandwich * c * sandwich.adjoint();
        let map = Superoperator::from_choi(&ChoiMatrix::new(dim, normalized)?);
        return Ok((map, attempt));
    }
    Err(MapError::NumericalFailure(
        "CPTP sampling kept drawing singular partial traces".into(),
    ))
}

/// Completely positive map from an unnormalized Ginibre Choi matrix, trace
/// scaled to d so that map traces stay O(d). Not trace-preserving.
pub fn sample_cp(dim: usize, rank: usize, seed: u64) -> Result<Superoperator> {
    let n = dim * dim;
    let mut rng = SplitMix64::new(seed);
    let g = gaussian_matrix(n, rank, &mut rng);
    let mut c = &g * g.adjoint();
    let trace = c.trace().re;
    if trace <= 0.0 {
        return Err(MapError::NumericalFailure("zero Ginibre draw".into()));
    }
    c.scale_mut(dim as f64 / trace);
    Ok(Superoperator::from_choi(&ChoiMatrix::new(dim, c)?))
}

/// Trace-preserving decomposable map built from two completely positive
/// pieces: Φ = Φ₁ + Φ₂∘τ, normalized to X ↦ Φ(A^{-1/2} X A^{-1/2}) with
/// A = Φ†(I). The normalization is a completely positive conjugation that
/// commutes with the transpose up to another conjugation, so
/// decomposability is preserved.
pub fn decomposable_map(
    phi1: &Superoperator,
    phi2: &Superoperator,
    tol: &Tolerances,
) -> Result<Superoperator> {
    if phi1.dim() != phi2.dim() {
        return Err(MapError::DimensionMismatch(format!(
            "decomposable parts have dimensions {} and {}",
            phi1.dim(),
            phi2.dim()
        )));
    }
    let d = phi1.dim();
    let tau = Superoperator::transpose_map(d);
    let raw = phi1.add(&phi2.compose(&tau)?)?;
    let dual_id = unvec(
        &(raw.transfer().adjoint() * vec_mat(&CMatrix::identity(d, d))),
        d,
    );
    let a = (&dual_id + dual_id.adjoint()).scale(0.5);
    let (a_eigs, _) = hermitian_eigen(&a)?;
    let min = a_eigs.first().copied().unwrap_or(0.0);
    if min < tol.positive_definite {
        return Err(MapError::NotPositiveDefinite {
            min_eigenvalue: min,
        });
    }
    let a_isqrt = hermitian_power(&a, -0.5, 0.0)?;
    let inner = a_isqrt.transpose().kronecker(&a_isqrt);
    Superoperator::from_transfer(raw.transfer() * inner)
}

/// Random trace-preserving decomposable map: Φ₁, Φ₂ from Gaussian Kraus
/// sets of the given size, combined by [`decomposable_map`]. Deterministic
/// given the seed; draws with a near-singular normalizer resample with an
/// incremented sub-seed.
pub fn sample_decomposable(
    dim: usize,
    kraus_rank: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<Superoperator> {
    for attempt in 0..64u64 {
        let mut rng = SplitMix64::new(sub_seed(seed, attempt));
        let scale = 1.0 / ((dim * kraus_rank) as f64).sqrt();
        let draw_kraus = |rng: &mut SplitMix64| -> Vec<CMatrix> {
            (0..kraus_rank)
                .map(|_| gaussian_matrix(dim, dim, rng).scale(scale))
                .collect()
        };
        let phi1 = Superoperator::from_kraus(&draw_kraus(&mut rng))?;
        let phi2 = Superoperator::from_kraus(&draw_kraus(&mut rng))?;
        match decomposable_map(&phi1, &phi2, tol) {
            Ok(map) => return Ok(map),
            Err(MapError::NotPositiveDefinite { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(MapError::NumericalFailure(
        "decomposable sampling kept drawing singular normalizers".into(),
    ))
}

/// Haar-random unitary conjugation.
pub fn sample_unitary_conjugation(dim: usize, seed: u64) -> Result<Superoperator> {
    let mut rng = SplitMix64::new(seed);
    Superoperator::unitary_conjugation(&haar_unitary(dim, &mut rng))
}

/// Draws sample `index` of a map ensemble. GKSL configs belong to the
/// generators module and are rejected here.
pub fn sample(config: &EnsembleConfig, index: u64, tol: &Tolerances) -> Result<Superoperator> {
    config.validate()?;
    let seed = sub_seed(config.seed, index);
    match config.ensemble {
        EnsembleId::CptpGinibre => sample_cptp(config.dim, config.rank, seed),
        EnsembleId::CpGinibre => sample_cp(config.dim, config.rank, seed),
        EnsembleId::Decomposable => sample_decomposable(config.dim, config.rank, seed, tol),
        EnsembleId::Unitary => sample_unitary_conjugation(config.dim, seed),
        EnsembleId::Gksl => Err(MapError::InvalidParameter(
            "GKSL is a generator ensemble; use generators::sample_gksl".into(),
        )),
    }
}

/// Contraction of the Choi matrix with orthonormal b-columns: the kd×kd
/// Hermitian matrix whose minimal eigenvector is the optimal concatenated
/// a-side.
fn contract_b(c: &CMatrix, b: &CMatrix, d: usize, k: usize) -> CMatrix {
    let mut m = CMatrix::zeros(k * d, k * d);
    for i in 0..k {
        for ip in 0..k {
            for p in 0..d {
                for q in 0..d {
                    let mut s = num_complex::Complex64::default();
                    for mm in 0..d {
                        for nn in 0..d {
                            s += b[(mm, i)].conj() * c[(p * d + mm, q * d + nn)] * b[(nn, ip)];
                        }
                    }
                    m[(i * d + p, ip * d + q)] = s;
                }
            }
        }
    }
    m
}

/// Contraction with orthonormal a-columns; the b-side counterpart.
fn contract_a(c: &CMatrix, a: &CMatrix, d: usize, k: usize) -> CMatrix {
    let mut m = CMatrix::zeros(k * d, k * d);
    for i in 0..k {
        for ip in 0..k {
            for mm in 0..d {
                for nn in 0..d {
                    let mut s = num_complex::Complex64::default();
                    for p in 0..d {
                        for q in 0..d {
                            s += a[(p, i)].conj() * c[(p * d + mm, q * d + nn)] * a[(q, ip)];
                        }
                    }
                    m[(i * d + mm, ip * d + nn)] = s;
                }
            }
        }
    }
    m
}

fn min_eig_step(m: &CMatrix) -> Result<(f64, CVector)> {
    let (values, vectors) = hermitian_eigen(m)?;
    let value = values
        .first()
        .copied()
        .ok_or_else(|| MapError::DimensionMismatch("empty seesaw matrix".into()))?;
    Ok((value, vectors.column(0).into_owned()))
}

fn columns_from_concat(v: &CVector, d: usize, k: usize) -> CMatrix {
    let mut m = CMatrix::zeros(d, k);
    for i in 0..k {
        for p in 0..d {
            m[(p, i)] = v[i * d + p];
        }
    }
    m
}

fn orthonormal_columns(m: &CMatrix) -> CMatrix {
    m.clone().qr().q()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::sub_seed;
    use crate::spectral;
    use crate::transition::rank2_witness_value;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn transpose_is_not_cp() {
        let report = is_cp(&Superoperator::transpose_map(2), &tol()).unwrap();
        assert!(!report.is_cp);
        assert!((report.min_choi_eigenvalue + 1.0).abs() < 1e-12);
    }

    #[test]
    fn unitary_conjugation_is_cp() {
        let phi = sample_unitary_conjugation(3, 5).unwrap();
        assert!(is_cp(&phi, &tol()).unwrap().is_cp);
    }

    #[test]
    fn falsifier_finds_transpose_rank2_witness() {
        let phi = Superoperator::transpose_map(2);
        let outcome = falsify_k_positivity(&phi, 2, 50, 7, &tol()).unwrap();
        assert!(
            (outcome.best_value + 1.0).abs() < 1e-9,
            "best {}",
            outcome.best_value
        );
        let witness = outcome.witness.expect("certified violation");
        assert!((witness.value - outcome.best_value).abs() < 1e-9);
        let direct = rank2_witness_value(&phi, &witness).unwrap();
        assert!((direct - witness.value).abs() < 1e-10);
        assert!(outcome.max_step_increase <= 1e-12);
    }

    #[test]
    fn falsifier_rank1_on_transpose_finds_nothing() {
        // product vectors pair nonnegatively with the swap operator
        let phi = Superoperator::transpose_map(2);
        let outcome = falsify_k_positivity(&phi, 1, 20, 11, &tol()).unwrap();
        assert!(outcome.best_value >= -1e-9, "best {}", outcome.best_value);
        assert!(outcome.witness.is_none());
    }

    #[test]
    fn falsifier_on_example3() {
        // the minimal Choi eigenvector lies in span{e00, e11}, which has
        // Schmidt rank 2, so the rank-2 minimum equals the smallest Choi
        // eigenvalue 2 − √5
        let phi = crate::zoo::example3_map();
        let expected = 2.0 - 5.0f64.sqrt();
        let k2 = falsify_k_positivity(&phi, 2, 30, 13, &tol()).unwrap();
        assert!(
            (k2.best_value - expected).abs() < 1e-6,
            "k2 {}",
            k2.best_value
        );
        assert!(k2.witness.is_some());
        let k1 = falsify_k_positivity(&phi, 1, 30, 17, &tol()).unwrap();
        assert!(k1.best_value >= -1e-8, "k1 {}", k1.best_value);
        assert!(k1.witness.is_none());
    }

    #[test]
    fn falsifier_respects_cp_maps() {
        for i in 0..5u64 {
            let phi = sample_cptp(2, 4, sub_seed(200, i)).unwrap();
            let outcome = falsify_k_positivity(&phi, 2, 10, sub_seed(201, i), &tol()).unwrap();
            assert!(outcome.best_value >= -1e-8, "value {}", outcome.best_value);
            assert!(outcome.witness.is_none());
            assert!(outcome.max_step_increase <= 1e-12);
        }
    }

    #[test]
    fn classify_example3() {
        let verdict = classify(&crate::zoo::example3_map(), 20, 23, &tol()).unwrap();
        assert!(!verdict.is_tp);
        assert!(verdict.is_hp);
        assert!(!verdict.is_cp);
        assert!(verdict.k1_witness.is_none());
        assert!(verdict.k2_witness.is_some());
        assert!(verdict.min_found_k2 < -1e-8);
        assert!(verdict.min_found_k1 >= -1e-8);
        let witness = verdict.k2_witness.as_ref().unwrap();
        let direct = rank2_witness_value(&crate::zoo::example3_map(), witness).unwrap();
        assert!((direct - witness.value).abs() < 1e-10);
    }

    #[test]
    fn classify_cptp_sample_finds_no_witnesses() {
        let phi = sample_cptp(2, 4, 321).unwrap();
        let verdict = classify(&phi, 10, 5, &tol()).unwrap();
        assert!(verdict.is_tp && verdict.is_hp && verdict.is_cp);
        assert!(verdict.min_found_k1 >= -1e-9);
        assert!(verdict.min_found_k2 >= -1e-9);
        assert!(verdict.k1_witness.is_none() && verdict.k2_witness.is_none());
    }

    #[test]
    fn cptp_samples_are_cptp_and_deterministic() {
        let a = sample_cptp(3, 9, 42).unwrap();
        let b = sample_cptp(3, 9, 42).unwrap();
        assert_eq!(a.transfer(), b.transfer());
        assert!(a.trace_preservation_deviation() <= 1e-10);
        assert!(is_cp(&a, &tol()).unwrap().is_cp);
        let radius = spectral::spectrum(&a).unwrap().spectral_radius;
        assert!((radius - 1.0).abs() < 1e-9);
    }

    #[test]
    fn cptp_samples_satisfy_map_bound() {
        for d in 2..=4usize {
            for i in 0..20u64 {
                let phi = sample_cptp(d, d * d, sub_seed(300 + d as u64, i)).unwrap();
                let report = spectral::check_map_bound(&phi, &tol()).unwrap();
                assert!(report.slack >= -1e-9);
            }
        }
    }

    #[test]
    fn low_rank_choi_sampling() {
        let phi = sample_cptp(3, 1, 5).unwrap();
        assert!(phi.trace_preservation_deviation() <= 1e-10);
        let eigs = phi.choi().hermitian_eigenvalues().unwrap();
        let significant = eigs.iter().filter(|&&e| e > 1e-9).count();
        assert_eq!(significant, 1);
    }

    #[test]
    fn decomposable_samples_are_trace_preserving() {
        for i in 0..10u64 {
            let phi = sample_decomposable(3, 9, sub_seed(400, i), &tol()).unwrap();
            assert!(phi.trace_preservation_deviation() <= 1e-9);
            let report = spectral::check_map_bound(&phi, &tol()).unwrap();
            assert!(report.slack >= -1e-9, "slack {}", report.slack);
        }
    }

    #[test]
    fn decomposable_cp_branch_reduces_to_cptp() {
        // Φ₂ = 0: the normalized map is completely positive
        let mut rng = SplitMix64::new(31);
        let kraus: Vec<CMatrix> = (0..4).map(|_| gaussian_matrix(2, 2, &mut rng)).collect();
        let phi1 = Superoperator::from_kraus(&kraus).unwrap();
        let phi2 = Superoperator::from_kraus(&[CMatrix::zeros(2, 2)]).unwrap();
        let map = decomposable_map(&phi1, &phi2, &tol()).unwrap();
        assert!(map.trace_preservation_deviation() <= 1e-10);
        assert!(is_cp(&map, &tol()).unwrap().is_cp);
        assert!(spectral::check_map_bound(&map, &tol()).unwrap().satisfied);
    }

    #[test]
    fn decomposable_co_branch_with_identity_unitary_is_transpose() {
        // Φ₁ = 0, Φ₂ = id: the construction returns the transpose map, the
        // d = 2 counterexample to the trace bound
        let zero = Superoperator::from_kraus(&[CMatrix::zeros(2, 2)]).unwrap();
        let id = Superoperator::identity(2);
        let map = decomposable_map(&zero, &id, &tol()).unwrap();
        assert!(
            crate::linalg::maxabs(&(map.transfer() - Superoperator::transpose_map(2).transfer()))
                < 1e-12
        );
        assert!(!spectral::check_map_bound(&map, &tol()).unwrap().satisfied);

        let map3 = decomposable_map(
            &Superoperator::from_kraus(&[CMatrix::zeros(3, 3)]).unwrap(),
            &Superoperator::identity(3),
            &tol(),
        )
        .unwrap();
        let report = spectral::check_map_bound(&map3, &tol()).unwrap();
        assert!(report.satisfied && report.slack.abs() < 1e-9);
    }

    #[test]
    fn decomposable_samples_pass_rank1_falsifier() {
        for i in 0..3u64 {
            let phi = sample_decomposable(2, 4, sub_seed(500, i), &tol()).unwrap();
            let outcome = falsify_k_positivity(&phi, 1, 10, sub_seed(501, i), &tol()).unwrap();
            assert!(outcome.best_value >= -1e-8, "value {}", outcome.best_value);
        }
    }

    #[test]
    fn cp_samples_for_conjecture_scan() {
        let phi = sample_cp(3, 5, 11).unwrap();
        assert!(is_cp(&phi, &tol()).unwrap().is_cp);
        // generally not trace-preserving
        assert!(phi.trace_preservation_deviation() > 1e-6);
        let report = spectral::check_conjecture(&phi, &tol()).unwrap();
        assert!(report.lhs.is_finite() && report.rhs.is_finite());
    }

    #[test]
    fn ensemble_config_loading() {
        let json = r#"{"dim": 3, "count": 10, "seed": 42, "rank": 9, "ensemble": "CPTP_GINIBRE"}"#;
        let config: EnsembleConfig = serde_json::from_str(json).unwrap();
        assert_eq!(config.ensemble, EnsembleId::CptpGinibre);
        config.validate().unwrap();

        let toml = "dim = 3\ncount = 10\nseed = 42\nensemble = \"DECOMPOSABLE\"\n# comment\n";
        let config = toml_from_str(toml).unwrap();
        assert_eq!(config.ensemble, EnsembleId::Decomposable);
        assert_eq!(config.rank, 9);

        let bad = EnsembleConfig::new(EnsembleId::CptpGinibre, 2, 5, 1).with_rank(5);
        assert!(bad.validate().is_err());
    }

    #[test]
    fn sampler_rejects_gksl() {
        let config = EnsembleConfig::new(EnsembleId::Gksl, 2, 1, 1);
        assert!(sample(&config, 0, &tol()).is_err());
    }
}
