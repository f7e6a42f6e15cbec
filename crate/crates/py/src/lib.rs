//! Python bindings for the qmaps library.
//!
//! Matrices cross the boundary as `list[list[tuple[float, float]]]`
//! (row-major, one `(re, im)` pair per entry); spectra come back as lists
//! of `(re, im)` pairs; inequality reports as dicts mirroring the JSON
//! wire format.

use nalgebra::DMatrix;
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use qmaps::linalg::CMatrix;
use qmaps::positivity;
use qmaps::spectral;
use qmaps::superop::{ChoiMatrix, HermitianMatrix};
use qmaps::transition::{self, OrthonormalBasis};
use qmaps::zoo;
use qmaps::{generators, BoundReport, Tolerances};

type Entries = Vec<Vec<(f64, f64)>>;

fn err(e: qmaps::MapError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_matrix(entries: &Entries) -> PyResult<CMatrix> {
    let rows = entries.len();
    if rows == 0 {
        return Err(PyValueError::new_err("empty matrix"));
    }
    let cols = entries[0].len();
    if entries.iter().any(|r| r.len() != cols) {
        return Err(PyValueError::new_err("ragged matrix rows"));
    }
    Ok(DMatrix::from_fn(rows, cols, |i, j| {
        Complex64::new(entries[i][j].0, entries[i][j].1)
    }))
}

fn from_matrix(m: &CMatrix) -> Entries {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| (m[(i, j)].re, m[(i, j)].im))
                .collect()
        })
        .collect()
}

fn bound_dict<'py>(py: Python<'py>, report: &BoundReport) -> PyResult<Bound<'py, PyDict>> {
    let dict = PyDict::new(py);
    dict.set_item("inequality_id", report.inequality_id.as_str())?;
    dict.set_item("lhs", report.lhs)?;
    dict.set_item("rhs", report.rhs)?;
    dict.set_item("slack", report.slack)?;
    dict.set_item("satisfied", report.satisfied)?;
    dict.set_item("tolerance", report.tolerance)?;
    Ok(dict)
}

fn tol() -> Tolerances {
    Tolerances::default()
}

/// A linear map on d×d complex matrices, stored as its transfer matrix.
#[pyclass(name = "Superoperator", frozen)]
struct PySuperoperator {
    inner: qmaps::Superoperator,
}

#[pymethods]
impl PySuperoperator {
    #[staticmethod]
    fn identity(dim: usize) -> Self {
        Self {
            inner: qmaps::Superoperator::identity(dim),
        }
    }

    #[staticmethod]
    fn transpose_map(dim: usize) -> Self {
        Self {
            inner: qmaps::Superoperator::transpose_map(dim),
        }
    }

    #[staticmethod]
    fn depolarizing(dim: usize) -> Self {
        Self {
            inner: qmaps::Superoperator::completely_depolarizing(dim),
        }
    }

    #[staticmethod]
    fn from_kraus(kraus: Vec<Entries>) -> PyResult<Self> {
        let ops = kraus.iter().map(to_matrix).collect::<PyResult<Vec<_>>>()?;
        Ok(Self {
            inner: qmaps::Superoperator::from_kraus(&ops).map_err(err)?,
        })
    }

    /// Rebuilds a map from its Choi matrix entries.
    #[staticmethod]
    fn from_choi(dim: usize, entries: Entries) -> PyResult<Self> {
        let choi = ChoiMatrix::new(dim, to_matrix(&entries)?).map_err(err)?;
        Ok(Self {
            inner: qmaps::Superoperator::from_choi(&choi),
        })
    }

    /// Parses the JSON wire format {"dim": d, "entries": [[re, im], ...]}.
    #[staticmethod]
    fn from_choi_json(text: &str) -> PyResult<Self> {
        let choi = ChoiMatrix::from_json(text).map_err(err)?;
        Ok(Self {
            inner: qmaps::Superoperator::from_choi(&choi),
        })
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn transfer(&self) -> Entries {
        from_matrix(self.inner.transfer())
    }

    fn apply(&self, x: Entries) -> PyResult<Entries> {
        Ok(from_matrix(
            &self.inner.apply(&to_matrix(&x)?).map_err(err)?,
        ))
    }

    fn compose(&self, inner: &PySuperoperator) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.compose(&inner.inner).map_err(err)?,
        })
    }

    fn choi(&self) -> Entries {
        from_matrix(self.inner.choi().matrix())
    }

    fn choi_json(&self) -> String {
        self.inner.choi().to_json()
    }

    fn trace(&self) -> PyResult<f64> {
        self.inner.trace(&tol()).map_err(err)
    }

    fn is_trace_preserving(&self) -> bool {
        self.inner.is_trace_preserving(&tol())
    }

    fn hs_adjoint(&self) -> Self {
        Self {
            inner: self.inner.hs_adjoint(),
        }
    }

    fn mix_depolarizing(&self, lam: f64) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.mix_depolarizing(lam).map_err(err)?,
        })
    }

    /// Fixed point of a positive trace-preserving map: Hermitian, unit
    /// trace, positive semidefinite up to tolerance.
    fn fixed_point(&self) -> PyResult<Entries> {
        Ok(from_matrix(
            self.inner.fixed_point(&tol()).map_err(err)?.matrix(),
        ))
    }

    /// Eigenvalues of the transfer matrix as (re, im) pairs, sorted by
    /// (Re, Im).
    fn spectrum(&self) -> PyResult<Vec<(f64, f64)>> {
        let report = spectral::spectrum(&self.inner).map_err(err)?;
        Ok(report.eigenvalues.iter().map(|z| (z.re, z.im)).collect())
    }

    fn spectrum_report<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let report = spectral::spectrum(&self.inner).map_err(err)?;
        let dict = PyDict::new(py);
        dict.set_item(
            "eigenvalues",
            report
                .eigenvalues
                .iter()
                .map(|z| (z.re, z.im))
                .collect::<Vec<_>>(),
        )?;
        dict.set_item("min_re", report.min_re)?;
        dict.set_item("max_re", report.max_re)?;
        dict.set_item("spectral_radius", report.spectral_radius)?;
        dict.set_item("trace", report.trace)?;
        Ok(dict)
    }

    /// tr(Φ) ≤ d·min Re σ(Φ) + d² − d for trace-preserving maps.
    fn check_map_bound<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        bound_dict(
            py,
            &spectral::check_map_bound(&self.inner, &tol()).map_err(err)?,
        )
    }

    fn check_trivial_bound<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        bound_dict(
            py,
            &spectral::check_trivial_bound(&self.inner, &tol()).map_err(err)?,
        )
    }

    fn check_optimality<'py>(&self, py: Python<'py>, c: f64) -> PyResult<Bound<'py, PyDict>> {
        bound_dict(
            py,
            &spectral::check_optimality(&self.inner, c, &tol()).map_err(err)?,
        )
    }

    fn check_conjecture<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        bound_dict(
            py,
            &spectral::check_conjecture(&self.inner, &tol()).map_err(err)?,
        )
    }

    /// Transition matrix (T_G)jk = ⟨gj|Φ(|gk⟩⟨gk|)|gj⟩ for a basis given as
    /// the columns of a unitary.
    fn transition_matrix(&self, basis: Entries) -> PyResult<Vec<Vec<f64>>> {
        let basis = OrthonormalBasis::from_columns(to_matrix(&basis)?, &tol()).map_err(err)?;
        let t = transition::TransitionMatrix::new(&self.inner, &basis).map_err(err)?;
        Ok((0..t.dim())
            .map(|j| (0..t.dim()).map(|k| t.entries()[(j, k)]).collect())
            .collect())
    }

    /// tr(Φ) ≤ d·tr(T_G) in the given basis (standard basis when omitted).
    #[pyo3(signature = (basis=None))]
    fn check_lemma_tg<'py>(
        &self,
        py: Python<'py>,
        basis: Option<Entries>,
    ) -> PyResult<Bound<'py, PyDict>> {
        let basis = match basis {
            Some(entries) => {
                OrthonormalBasis::from_columns(to_matrix(&entries)?, &tol()).map_err(err)?
            }
            None => OrthonormalBasis::standard(self.inner.dim()),
        };
        bound_dict(
            py,
            &transition::check_lemma_tg(&self.inner, &basis, &tol()).map_err(err)?,
        )
    }

    /// Choi positivity test: (is_cp, min Choi eigenvalue).
    fn is_cp(&self) -> PyResult<(bool, f64)> {
        let report = positivity::is_cp(&self.inner, &tol()).map_err(err)?;
        Ok((report.is_cp, report.min_choi_eigenvalue))
    }

    /// Seesaw falsifier for k ∈ {1, 2}: dict with the most negative witness
    /// value found, the witness vector when certified, and run diagnostics.
    #[pyo3(signature = (k, restarts=50, seed=0))]
    fn falsify_k_positivity<'py>(
        &self,
        py: Python<'py>,
        k: usize,
        restarts: usize,
        seed: u64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let outcome = positivity::falsify_k_positivity(&self.inner, k, restarts, seed, &tol())
            .map_err(err)?;
        let dict = PyDict::new(py);
        dict.set_item("k", outcome.k)?;
        dict.set_item("min_found", outcome.best_value)?;
        dict.set_item("falsified", outcome.witness.is_some())?;
        dict.set_item("restarts", outcome.restarts)?;
        dict.set_item("unconverged_restarts", outcome.unconverged_restarts)?;
        dict.set_item("seed", outcome.seed)?;
        if let Some(w) = &outcome.witness {
            let witness = PyDict::new(py);
            let pairs =
                |v: &qmaps::linalg::CVector| v.iter().map(|z| (z.re, z.im)).collect::<Vec<_>>();
            witness.set_item("a1", pairs(&w.a1))?;
            witness.set_item("a2", pairs(&w.a2))?;
            witness.set_item("b1", pairs(&w.b1))?;
            witness.set_item("b2", pairs(&w.b2))?;
            witness.set_item("psi", pairs(&w.psi))?;
            witness.set_item("value", w.value)?;
            dict.set_item("witness", witness)?;
        } else {
            dict.set_item("witness", py.None())?;
        }
        Ok(dict)
    }

    fn __repr__(&self) -> String {
        format!("Superoperator(dim={})", self.inner.dim())
    }
}

/// A GKSL-form generator together with its transfer matrix.
#[pyclass(name = "Generator", frozen)]
struct PyGenerator {
    inner: generators::GeneratorSpec,
}

#[pymethods]
impl PyGenerator {
    /// L(ρ) = −i[H,ρ] + Σ γk (Vk ρ Vk† − ½{Vk†Vk, ρ}).
    #[staticmethod]
    fn gksl(hamiltonian: Entries, jumps: Vec<Entries>, rates: Vec<f64>) -> PyResult<Self> {
        let h = HermitianMatrix::new(to_matrix(&hamiltonian)?, &tol()).map_err(err)?;
        let jumps = jumps.iter().map(to_matrix).collect::<PyResult<Vec<_>>>()?;
        Ok(Self {
            inner: generators::gksl_generator(h, jumps, rates).map_err(err)?,
        })
    }

    /// Random GKSL generator with `jump_count` Gaussian jump operators.
    #[staticmethod]
    fn sample(dim: usize, jump_count: usize, seed: u64) -> PyResult<Self> {
        Ok(Self {
            inner: generators::sample_gksl(dim, jump_count, seed).map_err(err)?,
        })
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn transfer(&self) -> Entries {
        from_matrix(self.inner.transfer())
    }

    fn spectrum(&self) -> PyResult<Vec<(f64, f64)>> {
        let report = self.inner.spectrum().map_err(err)?;
        Ok(report.eigenvalues.iter().map(|z| (z.re, z.im)).collect())
    }

    /// tr(L) ≤ d·min Re σ(L).
    fn check_bound<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        bound_dict(
            py,
            &generators::check_generator_bound(&self.inner, &tol()).map_err(err)?,
        )
    }

    /// Relaxation rates Γj = −Re λj and the bound max Γ ≤ (1/d)·ΣΓ.
    fn relaxation_rates<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let report = generators::relaxation_rates(&self.inner, &tol()).map_err(err)?;
        let dict = PyDict::new(py);
        dict.set_item("rates", report.rates)?;
        dict.set_item("max_rate", report.max_rate)?;
        dict.set_item("mean_bound", report.mean_bound)?;
        dict.set_item("satisfied", report.satisfied)?;
        Ok(dict)
    }

    /// e^{tL} as a Superoperator.
    fn semigroup(&self, t: f64) -> PyResult<PySuperoperator> {
        Ok(PySuperoperator {
            inner: generators::semigroup(&self.inner, t).map_err(err)?,
        })
    }

    /// Residuals of the small-time limit formulas at each n.
    fn limit_check<'py>(&self, py: Python<'py>, n_list: Vec<u64>) -> PyResult<Bound<'py, PyList>> {
        let residuals = generators::limit_formula_check(&self.inner, &n_list).map_err(err)?;
        let out = PyList::empty(py);
        for r in residuals {
            let dict = PyDict::new(py);
            dict.set_item("n", r.n)?;
            dict.set_item("r_trace", r.r_trace)?;
            dict.set_item("r_min_re", r.r_min_re)?;
            out.append(dict)?;
        }
        Ok(out)
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn __repr__(&self) -> String {
        format!(
            "Generator(dim={}, jumps={})",
            self.inner.dim(),
            self.inner.jumps().len()
        )
    }
}

/// CPTP map from a Ginibre-random Choi matrix (deterministic per seed).
#[pyfunction]
#[pyo3(signature = (dim, rank=None, seed=0))]
fn sample_cptp(dim: usize, rank: Option<usize>, seed: u64) -> PyResult<PySuperoperator> {
    let rank = rank.unwrap_or(dim * dim);
    Ok(PySuperoperator {
        inner: positivity::sample_cptp(dim, rank, seed).map_err(err)?,
    })
}

/// Trace-preserving decomposable map Φ₁ + Φ₂∘τ from Gaussian Kraus sets.
#[pyfunction]
#[pyo3(signature = (dim, rank=None, seed=0))]
fn sample_decomposable(dim: usize, rank: Option<usize>, seed: u64) -> PyResult<PySuperoperator> {
    let rank = rank.unwrap_or(dim * dim);
    Ok(PySuperoperator {
        inner: positivity::sample_decomposable(dim, rank, seed, &tol()).map_err(err)?,
    })
}

/// Haar-random unitary conjugation.
#[pyfunction]
fn sample_unitary(dim: usize, seed: u64) -> PyResult<PySuperoperator> {
    Ok(PySuperoperator {
        inner: positivity::sample_unitary_conjugation(dim, seed).map_err(err)?,
    })
}

/// The one-parameter trace-preserving family
/// Φ_α(X) = [α(d−1)tr(X)I − αX + (1−α)Xᵀ] / (1 + α(d−2)(d+1)).
#[pyfunction]
fn tt_map(dim: usize, alpha: f64) -> PyResult<PySuperoperator> {
    let params = zoo::TTParams::new(dim, alpha).map_err(err)?;
    Ok(PySuperoperator {
        inner: zoo::tt_map(&params),
    })
}

/// Threshold α above which Φ_α satisfies the trace bound.
#[pyfunction]
fn tt_threshold(dim: usize) -> f64 {
    zoo::tt_threshold(dim)
}

/// Tightness construction for c > d; returns (params dict, map).
#[pyfunction]
fn tightness_map<'py>(
    py: Python<'py>,
    dim: usize,
    c: f64,
) -> PyResult<(Bound<'py, PyDict>, PySuperoperator)> {
    let (params, map) = zoo::tightness_map(dim, c).map_err(err)?;
    let dict = PyDict::new(py);
    dict.set_item("dim", params.dim)?;
    dict.set_item("c", params.c)?;
    dict.set_item("x", params.x)?;
    dict.set_item("alpha", params.alpha)?;
    Ok((dict, PySuperoperator { inner: map }))
}

/// The qubit map Φ(X) = 4X₀₀|0⟩⟨0| + σx Xᵀ σx.
#[pyfunction]
fn example3_map() -> PySuperoperator {
    PySuperoperator {
        inner: zoo::example3_map(),
    }
}

/// The qubit map Φ(X) = σx Xᵀ σx.
#[pyfunction]
fn sigma_x_transpose_map() -> PySuperoperator {
    PySuperoperator {
        inner: zoo::sigma_x_transpose_map(),
    }
}

/// Runs every reference-value check; returns {key: {"status", "detail"}}.
#[pyfunction]
#[pyo3(signature = (seed=0xE3, alpha_grid=0.1))]
fn zoo_verify(py: Python<'_>, seed: u64, alpha_grid: f64) -> PyResult<Py<PyAny>> {
    let manifest = zoo::verify(seed, alpha_grid, &tol()).map_err(err)?;
    let value: serde_json::Value =
        serde_json::from_str(&manifest.to_json()).expect("manifest emits valid JSON");
    json_to_py(py, &value)
}

fn json_to_py(py: Python<'_>, value: &serde_json::Value) -> PyResult<Py<PyAny>> {
    Ok(match value {
        serde_json::Value::Null => py.None(),
        serde_json::Value::Bool(b) => b.into_pyobject(py)?.to_owned().unbind().into_any(),
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                i.into_pyobject(py)?.unbind().into_any()
            } else {
                n.as_f64()
                    .unwrap_or(f64::NAN)
                    .into_pyobject(py)?
                    .unbind()
                    .into_any()
            }
        }
        serde_json::Value::String(s) => s.into_pyobject(py)?.unbind().into_any(),
        serde_json::Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            list.unbind().into_any()
        }
        serde_json::Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, v) in map {
                dict.set_item(k, json_to_py(py, v)?)?;
            }
            dict.unbind().into_any()
        }
    })
}

#[pymodule]
fn qmaps_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySuperoperator>()?;
    m.add_class::<PyGenerator>()?;
    m.add_function(wrap_pyfunction!(sample_cptp, m)?)?;
    m.add_function(wrap_pyfunction!(sample_decomposable, m)?)?;
    m.add_function(wrap_pyfunction!(sample_unitary, m)?)?;
    m.add_function(wrap_pyfunction!(tt_map, m)?)?;
    m.add_function(wrap_pyfunction!(tt_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(tightness_map, m)?)?;
    m.add_function(wrap_pyfunction!(example3_map, m)?)?;
    m.add_function(wrap_pyfunction!(sigma_x_transpose_map, m)?)?;
    m.add_function(wrap_pyfunction!(zoo_verify, m)?)?;
    Ok(())
}
