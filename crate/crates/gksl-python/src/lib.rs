//! Python bindings for the gksl library.
//!
//! Matrices cross the boundary as nested lists of Python complex numbers
//! (row-major); state vectors as flat lists. Everything heavier stays in
//! Rust.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use gksl::cp_analysis;
use gksl::documents::{self, GeneratorDocument};
use gksl::dynamics;
use gksl::generators::{GeneratorSpec, KossakowskiMatrix, TracelessBasis};
use gksl::numerics::{self, ComplexMatrix, ComplexVector};
use gksl::positivity;

type PyMatrix = Vec<Vec<Complex64>>;

fn to_err(e: gksl::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_matrix(data: &PyMatrix) -> PyResult<ComplexMatrix> {
    let rows = data.len();
    if rows == 0 {
        return Err(PyValueError::new_err("empty matrix"));
    }
    let cols = data[0].len();
    for row in data {
        if row.len() != cols {
            return Err(PyValueError::new_err("ragged matrix"));
        }
    }
    Ok(ComplexMatrix::from_fn(rows, cols, |i, j| data[i][j]))
}

fn from_matrix(m: &ComplexMatrix) -> PyMatrix {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

fn from_vector(v: &ComplexVector) -> Vec<Complex64> {
    v.iter().copied().collect()
}

/// A GKSL generator in the Gell-Mann basis: effective Hamiltonian plus
/// Kossakowski coefficient matrix.
#[pyclass(module = "gksl_py", skip_from_py_object)]
#[derive(Clone)]
struct Generator {
    spec: GeneratorSpec,
}

#[pymethods]
impl Generator {
    /// Generator(kossakowski, hamiltonian=None) — the coefficient matrix is
    /// (n²-1) x (n²-1); the Hamiltonian defaults to zero.
    #[new]
    #[pyo3(signature = (kossakowski, hamiltonian=None))]
    fn new(kossakowski: PyMatrix, hamiltonian: Option<PyMatrix>) -> PyResult<Self> {
        let c = KossakowskiMatrix::new(to_matrix(&kossakowski)?).map_err(to_err)?;
        let n = ((c.dim() + 1) as f64).sqrt().round() as usize;
        if n * n != c.dim() + 1 || n < 2 {
            return Err(PyValueError::new_err(format!(
                "coefficient matrix dimension {} is not n²-1 for any n >= 2",
                c.dim()
            )));
        }
        let h = match hamiltonian {
            Some(data) => to_matrix(&data)?,
            None => ComplexMatrix::zeros(n, n),
        };
        let spec = GeneratorSpec::new(h, c, TracelessBasis::gell_mann(n).map_err(to_err)?)
            .map_err(to_err)?;
        Ok(Generator { spec })
    }

    #[getter]
    fn n(&self) -> usize {
        self.spec.n()
    }

    fn hamiltonian(&self) -> PyMatrix {
        from_matrix(self.spec.hamiltonian())
    }

    fn kossakowski(&self) -> PyMatrix {
        from_matrix(self.spec.kossakowski().matrix())
    }

    /// L[rho].
    fn apply(&self, rho: PyMatrix) -> PyResult<PyMatrix> {
        Ok(from_matrix(
            &self.spec.apply(&to_matrix(&rho)?).map_err(to_err)?,
        ))
    }

    /// The n² x n² matrix of L in column-stacking vectorization.
    fn superoperator(&self) -> PyMatrix {
        from_matrix(self.spec.superoperator().matrix())
    }

    /// exp(Lt) as an n² x n² matrix.
    fn evolution_matrix(&self, t: f64) -> PyResult<PyMatrix> {
        let map = dynamics::evolution_map(&self.spec.superoperator(), t).map_err(to_err)?;
        Ok(from_matrix(map.matrix()))
    }

    /// Evolves a density matrix; returns (matrix, min_eigenvalue). Negative
    /// eigenvalues are reported, never clipped.
    fn evolve(&self, rho: PyMatrix, t: f64) -> PyResult<(PyMatrix, f64)> {
        let state = dynamics::DensityMatrix::new(to_matrix(&rho)?).map_err(to_err)?;
        let out =
            dynamics::evolve_state(&self.spec.superoperator(), &state, t).map_err(to_err)?;
        Ok((from_matrix(&out.matrix), out.min_eigenvalue))
    }

    /// Kossakowski criterion: (is_cp, min_eigenvalue).
    #[pyo3(signature = (tol = 1e-9))]
    fn kossakowski_cp(&self, tol: f64) -> (bool, f64) {
        let v = cp_analysis::kossakowski_cp_test(self.spec.kossakowski(), tol);
        (v.is_cp, v.min_kossakowski_eigenvalue.unwrap())
    }

    /// Choi-spectrum test of exp(Lt): (is_cp, min_choi_eigenvalue).
    #[pyo3(signature = (t, tol = 1e-9))]
    fn is_completely_positive(&self, t: f64, tol: f64) -> PyResult<(bool, f64)> {
        let map = dynamics::evolution_map(&self.spec.superoperator(), t).map_err(to_err)?;
        let v = cp_analysis::is_completely_positive(&map, tol).map_err(to_err)?;
        Ok((v.is_cp, v.min_choi_eigenvalue.unwrap()))
    }

    /// Unnormalized Choi matrix of exp(Lt).
    fn choi(&self, t: f64) -> PyResult<PyMatrix> {
        let map = dynamics::evolution_map(&self.spec.superoperator(), t).map_err(to_err)?;
        Ok(from_matrix(cp_analysis::choi_matrix(&map).matrix()))
    }

    /// Kraus operators of exp(Lt); fails when the map is not CP.
    #[pyo3(signature = (t, tol = 1e-9))]
    fn kraus(&self, t: f64, tol: f64) -> PyResult<Vec<PyMatrix>> {
        let map = dynamics::evolution_map(&self.spec.superoperator(), t).map_err(to_err)?;
        let kraus = cp_analysis::kraus_decomposition(&cp_analysis::choi_matrix(&map), tol)
            .map_err(to_err)?;
        Ok(kraus.operators().iter().map(from_matrix).collect())
    }

    /// Serializes to the generator document format.
    fn to_json(&self) -> PyResult<String> {
        Ok(documents::to_json(
            &GeneratorDocument::from_spec(&self.spec).map_err(to_err)?,
        ))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Generator> {
        let doc: GeneratorDocument = documents::parse(text).map_err(to_err)?;
        Ok(Generator {
            spec: doc.to_spec().map_err(to_err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!("Generator(n={}, rates_dim={})", self.spec.n(), self.spec.kossakowski().dim())
    }
}

/// Outcome of a positivity search.
#[pyclass(module = "gksl_py")]
struct Report {
    #[pyo3(get)]
    verdict: String,
    #[pyo3(get)]
    min_eigenvalue_found: f64,
    #[pyo3(get)]
    witness_state: Vec<Complex64>,
    #[pyo3(get)]
    witness_time: f64,
    #[pyo3(get)]
    samples_used: usize,
    #[pyo3(get)]
    refinement_steps: usize,
    #[pyo3(get)]
    note: Option<String>,
}

impl From<positivity::PositivityReport> for Report {
    fn from(r: positivity::PositivityReport) -> Self {
        Report {
            verdict: r.verdict.as_str().into(),
            min_eigenvalue_found: r.min_eigenvalue_found,
            witness_state: from_vector(&r.witness_state),
            witness_time: r.witness_time,
            samples_used: r.samples_used,
            refinement_steps: r.refinement_steps,
            note: r.note,
        }
    }
}

/// Constructive witness for a violated C1 + C2 >= 0 condition.
#[pyclass(module = "gksl_py")]
struct Witness {
    inner: cp_analysis::BreakdownWitness,
}

#[pymethods]
impl Witness {
    #[getter]
    fn l_value(&self) -> f64 {
        self.inner.l_value
    }

    #[getter]
    fn quadratic_form(&self) -> f64 {
        self.inner.quadratic_form
    }

    #[getter]
    fn xi(&self) -> Vec<Complex64> {
        from_vector(&self.inner.xi)
    }

    #[getter]
    fn phi(&self) -> PyMatrix {
        from_matrix(&self.inner.phi)
    }

    #[getter]
    fn psi(&self) -> PyMatrix {
        from_matrix(&self.inner.psi)
    }

    /// <phi|exp(Lt)[|psi><psi|]|phi> for the normalized vectors; negative at
    /// small t when the witness certifies a positivity breakdown.
    fn short_time_check(&self, g1: &Generator, g2: &Generator, t: f64) -> PyResult<f64> {
        self.inner
            .short_time_check(&g1.spec, &g2.spec, t)
            .map_err(to_err)
    }
}

/// Summary of the closed-form counterexample verification.
#[pyclass(module = "gksl_py")]
struct CounterexampleSummary {
    #[pyo3(get)]
    passed: bool,
    #[pyo3(get)]
    points_checked: usize,
    #[pyo3(get)]
    max_closed_form_residual: f64,
    #[pyo3(get)]
    max_eigenvalue_mismatch: f64,
    #[pyo3(get)]
    min_z_eigenvalue: f64,
    #[pyo3(get)]
    min_state_eigenvalue: f64,
    #[pyo3(get)]
    failures: Vec<String>,
}

/// The orthonormal traceless basis used for coefficient matrices.
#[pyfunction]
fn gell_mann_basis(n: usize) -> PyResult<Vec<PyMatrix>> {
    let basis = TracelessBasis::gell_mann(n).map_err(to_err)?;
    Ok(basis.matrices().iter().map(from_matrix).collect())
}

/// Ascending eigenvalues of a Hermitian matrix.
#[pyfunction]
fn hermitian_eigenvalues(m: PyMatrix) -> PyResult<Vec<f64>> {
    Ok(numerics::hermitian_eigensystem(&to_matrix(&m)?)
        .map_err(to_err)?
        .eigenvalues)
}

/// exp(t·A).
#[pyfunction]
fn matrix_exponential(m: PyMatrix, t: f64) -> PyResult<PyMatrix> {
    Ok(from_matrix(
        &numerics::matrix_exponential(&to_matrix(&m)?, t).map_err(to_err)?,
    ))
}

/// Coherence components of a 2x2 Hermitian matrix over {σ0, σ1, σ2, σ3}.
#[pyfunction]
fn coherence_vector(rho: PyMatrix) -> PyResult<Vec<f64>> {
    let v = dynamics::CoherenceVector::from_hermitian(&to_matrix(&rho)?).map_err(to_err)?;
    Ok(v.components.to_vec())
}

/// Necessary condition for positivity of the factorized semigroup:
/// (holds, min eigenvalue of C1 + C2).
#[pyfunction]
#[pyo3(signature = (c1, c2, tol = 1e-9))]
fn kossakowski_sum_condition(c1: PyMatrix, c2: PyMatrix, tol: f64) -> PyResult<(bool, f64)> {
    let c1 = KossakowskiMatrix::new(to_matrix(&c1)?).map_err(to_err)?;
    let c2 = KossakowskiMatrix::new(to_matrix(&c2)?).map_err(to_err)?;
    let v = cp_analysis::kossakowski_sum_condition(&c1, &c2, tol).map_err(to_err)?;
    Ok((v.holds, v.min_eigenvalue))
}

/// Constructive witness when the condition fails.
#[pyfunction]
#[pyo3(signature = (g1, g2, seed = 0))]
fn breakdown_witness(g1: &Generator, g2: &Generator, seed: u64) -> PyResult<Witness> {
    Ok(Witness {
        inner: cp_analysis::breakdown_witness(&g1.spec, &g2.spec, seed).map_err(to_err)?,
    })
}

/// Positivity search over the factorized map of two generators.
#[pyfunction]
#[pyo3(signature = (g1, g2, grid, budget = 500, seed = 0))]
fn tensor_positivity(
    g1: &Generator,
    g2: &Generator,
    grid: Vec<f64>,
    budget: usize,
    seed: u64,
) -> PyResult<Report> {
    Ok(positivity::tensor_positivity_search(&g1.spec, &g2.spec, &grid, budget, seed)
        .map_err(to_err)?
        .into())
}

/// Seeded breakdown search for the tensor square of a positive but not
/// completely positive generator.
#[pyfunction]
#[pyo3(signature = (g, grid, budget = 500, seed = 0))]
fn breakdown_search(g: &Generator, grid: Vec<f64>, budget: usize, seed: u64) -> PyResult<Report> {
    Ok(positivity::tensor_square_breakdown_search(&g.spec, &grid, budget, seed)
        .map_err(to_err)?
        .into())
}

/// Largest ε0 in [0, eps_max] with C + εΓ positive semidefinite throughout.
#[pyfunction]
fn perturbation_cp_interval(c: PyMatrix, gamma: PyMatrix, eps_max: f64) -> PyResult<f64> {
    let c = KossakowskiMatrix::new(to_matrix(&c)?).map_err(to_err)?;
    cp_analysis::perturbation_cp_interval(&c, &to_matrix(&gamma)?, eps_max).map_err(to_err)
}

/// Z matrix of the closed-form factorized evolution.
#[pyfunction]
fn counterexample_z_matrix(
    mu: f64,
    alpha: f64,
    varphi: f64,
    t: f64,
    rate: f64,
) -> PyResult<PyMatrix> {
    Ok(from_matrix(
        &positivity::counterexample_z_matrix(mu, alpha, varphi, t, rate).map_err(to_err)?,
    ))
}

/// (z_plus, z_minus) of the closed-form second term.
#[pyfunction]
fn counterexample_eigenvalues(mu: f64, alpha: f64, t: f64, rate: f64) -> PyResult<(f64, f64)> {
    positivity::counterexample_eigenvalues(mu, alpha, t, rate).map_err(to_err)
}

/// Full grid verification of the closed-form counterexample.
#[pyfunction]
#[pyo3(signature = (rate = 4.0))]
fn verify_counterexample(rate: f64) -> PyResult<CounterexampleSummary> {
    let report =
        positivity::verify_counterexample(&positivity::CounterexampleGrid::default(), rate)
            .map_err(to_err)?;
    Ok(CounterexampleSummary {
        passed: report.passed,
        points_checked: report.points_checked,
        max_closed_form_residual: report.max_closed_form_residual,
        max_eigenvalue_mismatch: report.max_eigenvalue_mismatch,
        min_z_eigenvalue: report.min_z_eigenvalue,
        min_state_eigenvalue: report.min_state_eigenvalue,
        failures: report.failures,
    })
}

/// The elementary generator pair (isotropic damping, single-axis damping) at
/// the given rate.
#[pyfunction]
#[pyo3(signature = (rate = 4.0))]
fn elementary_pair(rate: f64) -> (Generator, Generator) {
    let (g1, g2) = positivity::elementary_pair(rate);
    (Generator { spec: g1 }, Generator { spec: g2 })
}

#[pymodule]
fn gksl_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<Generator>()?;
    m.add_class::<Report>()?;
    m.add_class::<Witness>()?;
    m.add_class::<CounterexampleSummary>()?;
    m.add_function(wrap_pyfunction!(gell_mann_basis, m)?)?;
    m.add_function(wrap_pyfunction!(hermitian_eigenvalues, m)?)?;
    m.add_function(wrap_pyfunction!(matrix_exponential, m)?)?;
    m.add_function(wrap_pyfunction!(coherence_vector, m)?)?;
    m.add_function(wrap_pyfunction!(kossakowski_sum_condition, m)?)?;
    m.add_function(wrap_pyfunction!(breakdown_witness, m)?)?;
    m.add_function(wrap_pyfunction!(tensor_positivity, m)?)?;
    m.add_function(wrap_pyfunction!(breakdown_search, m)?)?;
    m.add_function(wrap_pyfunction!(perturbation_cp_interval, m)?)?;
    m.add_function(wrap_pyfunction!(counterexample_z_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(counterexample_eigenvalues, m)?)?;
    m.add_function(wrap_pyfunction!(verify_counterexample, m)?)?;
    m.add_function(wrap_pyfunction!(elementary_pair, m)?)?;
    Ok(())
}
