//! Python bindings for `pdm_spectra`.

use pdm_spectra::analytic;
use pdm_spectra::harness::{self, Suite, Tolerances, DEFAULT_GRID};
use pdm_spectra::oracle;
use pdm_spectra::{Error, MassModel, Parity, QuantumNumbers};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::InvalidInput(_)
        | Error::Domain { .. }
        | Error::Parameter(_)
        | Error::Singular { .. } => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn quantum_numbers(n_r: u32, ell: u32, d: u32, parity: Option<&str>) -> PyResult<QuantumNumbers> {
    let parity = match parity {
        Some(p) => Some(p.parse::<Parity>().map_err(to_py)?),
        None => None,
    };
    QuantumNumbers::new(n_r, ell, d, parity).map_err(to_py)
}

/// Poschl-Teller parameters of one `(ell, d)` channel.
#[pyclass(name = "PtParams", frozen)]
struct PyPtParams(analytic::PtParams);

#[pymethods]
impl PyPtParams {
    #[getter]
    fn kappa(&self) -> f64 {
        self.0.kappa
    }
    #[getter]
    fn lambda_(&self) -> f64 {
        self.0.lambda
    }
    #[getter]
    fn delta(&self) -> f64 {
        self.0.delta
    }
    #[getter]
    fn c(&self) -> f64 {
        self.0.c
    }
    #[getter]
    fn zeta(&self) -> f64 {
        self.0.zeta
    }
    #[getter]
    fn d(&self) -> u32 {
        self.0.d
    }
    #[getter]
    fn ell_d(&self) -> f64 {
        self.0.ell_d.to_f64()
    }
    #[getter]
    fn q_limit(&self) -> f64 {
        self.0.q_limit()
    }
    fn energy(&self, n_r: u32) -> f64 {
        self.0.energy(n_r)
    }
    fn epsilon(&self, n_r: u32) -> f64 {
        self.0.epsilon(n_r)
    }
    fn potential(&self, q: f64) -> PyResult<f64> {
        self.0.potential(q).map_err(to_py)
    }
    fn __repr__(&self) -> String {
        format!(
            "PtParams(kappa={}, lambda={}, delta={}, zeta={}, d={})",
            self.0.kappa, self.0.lambda, self.0.delta, self.0.zeta, self.0.d
        )
    }
}

/// Normalized bound state.
#[pyclass(name = "BoundState", frozen)]
struct PyBoundState(analytic::BoundState);

#[pymethods]
impl PyBoundState {
    #[new]
    #[pyo3(signature = (n_r, ell, d, zeta = 1.0, parity = None))]
    fn new(n_r: u32, ell: u32, d: u32, zeta: f64, parity: Option<&str>) -> PyResult<Self> {
        let qn = quantum_numbers(n_r, ell, d, parity)?;
        analytic::BoundState::new(qn, zeta).map(Self).map_err(to_py)
    }
    #[getter]
    fn energy(&self) -> f64 {
        self.0.energy()
    }
    #[getter]
    fn norm_constant(&self) -> f64 {
        self.0.norm_constant()
    }
    #[getter]
    fn params(&self) -> PyPtParams {
        PyPtParams(*self.0.params())
    }
    fn phi(&self, q: f64) -> f64 {
        self.0.phi(q)
    }
    fn radial(&self, r: f64) -> f64 {
        self.0.radial(r)
    }
    fn norm_squared(&self) -> PyResult<f64> {
        self.0.norm_squared().map_err(to_py)
    }
    fn overlap(&self, other: &PyBoundState) -> PyResult<f64> {
        self.0.overlap(&other.0).map_err(to_py)
    }
    fn nodes(&self) -> usize {
        self.0.nodes()
    }
    /// Largest relative residual of the radial equation over `radii`.
    #[pyo3(signature = (radii = None))]
    fn residual(&self, radii: Option<Vec<f64>>) -> PyResult<f64> {
        let radii = radii.unwrap_or_else(harness::residual_radii);
        oracle::radial_residual(&self.0, &radii)
            .map(|pts| oracle::max_relative_residual(&pts))
            .map_err(to_py)
    }
    fn __repr__(&self) -> String {
        format!(
            "BoundState({}, zeta={}, E={})",
            self.0.qn(),
            self.0.zeta(),
            self.0.energy()
        )
    }
}

#[pyfunction]
#[pyo3(signature = (n_r, ell, d, zeta = 1.0, parity = None))]
fn energy(n_r: u32, ell: u32, d: u32, zeta: f64, parity: Option<&str>) -> PyResult<f64> {
    analytic::energy(&quantum_numbers(n_r, ell, d, parity)?, zeta).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (ell, d, zeta = 1.0, parity = None))]
fn pt_params(ell: u32, d: u32, zeta: f64, parity: Option<&str>) -> PyResult<PyPtParams> {
    analytic::pt_params(&quantum_numbers(0, ell, d, parity)?, zeta)
        .map(PyPtParams)
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (r, zeta = 1.0))]
fn mass(r: f64, zeta: f64) -> PyResult<f64> {
    MassModel::squared_lorentzian(zeta)
        .and_then(|m| m.mass(r))
        .map_err(to_py)
}

/// Finite-difference energies of the lowest `n_states` levels.
#[pyfunction]
#[pyo3(signature = (ell, d, zeta = 1.0, parity = None, n_states = 5, grid = DEFAULT_GRID))]
fn solve_pt<'py>(
    py: Python<'py>,
    ell: u32,
    d: u32,
    zeta: f64,
    parity: Option<&str>,
    n_states: usize,
    grid: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let params = analytic::pt_params(&quantum_numbers(0, ell, d, parity)?, zeta).map_err(to_py)?;
    let report = py
        .detach(|| oracle::solve_pt(&params, n_states, grid))
        .map_err(to_py)?;
    let out = PyDict::new(py);
    out.set_item("energies", report.energies())?;
    out.set_item("error_estimates", report.error_estimates.clone())?;
    out.set_item("grid_size", report.grid_size)?;
    Ok(out)
}

#[pyfunction]
#[pyo3(signature = (n_r, ell, d_start, zeta = 1.0, run_oracle = true, grid = DEFAULT_GRID))]
fn degeneracy_ladder<'py>(
    py: Python<'py>,
    n_r: u32,
    ell: u32,
    d_start: u32,
    zeta: f64,
    run_oracle: bool,
    grid: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let report = py
        .detach(|| {
            harness::degeneracy_ladder(
                n_r,
                ell,
                d_start,
                zeta,
                run_oracle.then_some(grid),
                &Tolerances::default(),
            )
        })
        .map_err(to_py)?;
    let ladder = report
        .ladder
        .iter()
        .map(|r| {
            let row = PyDict::new(py);
            row.set_item("n_r", r.n_r)?;
            row.set_item("ell", r.ell)?;
            row.set_item("d", r.d)?;
            row.set_item("ell_d", r.ell_d)?;
            row.set_item("E_analytic", r.e_analytic)?;
            row.set_item("E_numeric", r.e_numeric)?;
            row.set_item("abs_err", r.abs_err)?;
            Ok(row)
        })
        .collect::<PyResult<Vec<_>>>()?;
    let out = PyDict::new(py);
    out.set_item("ladder", ladder)?;
    out.set_item("max_pairwise_spread", report.max_pairwise_spread)?;
    out.set_item("claim_satisfied", report.claim_satisfied)?;
    out.set_item("oracle_confirmed", report.oracle_confirmed)?;
    Ok(out)
}

/// Gram matrix of states `0..=n_max` and its largest deviation from identity.
#[pyfunction]
#[pyo3(signature = (ell, d, zeta = 1.0, n_max = 4, parity = None))]
fn orthonormality_matrix(
    ell: u32,
    d: u32,
    zeta: f64,
    n_max: u32,
    parity: Option<&str>,
) -> PyResult<(Vec<Vec<f64>>, f64)> {
    let qn = quantum_numbers(0, ell, d, parity)?;
    harness::orthonormality_matrix(ell, d, qn.parity, zeta, n_max)
        .map(|g| (g.matrix, g.max_deviation))
        .map_err(to_py)
}

/// Runs a named verification suite; returns `(check, measured, threshold, pass)` tuples.
#[pyfunction]
#[pyo3(signature = (suite = "all", grid = DEFAULT_GRID))]
fn verify(py: Python<'_>, suite: &str, grid: usize) -> PyResult<Vec<(String, f64, f64, bool)>> {
    let suite: Suite = suite.parse().map_err(to_py)?;
    let checks = py
        .detach(|| harness::run_suite(suite, grid, &Tolerances::default()))
        .map_err(to_py)?;
    Ok(checks
        .into_iter()
        .map(|c| {
            (
                format!("{}: {}", c.suite, c.check),
                c.measured,
                c.threshold,
                c.pass,
            )
        })
        .collect())
}

#[pymodule]
#[pyo3(name = "pdm_spectra")]
fn pdm_spectra_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPtParams>()?;
    m.add_class::<PyBoundState>()?;
    m.add_function(wrap_pyfunction!(energy, m)?)?;
    m.add_function(wrap_pyfunction!(pt_params, m)?)?;
    m.add_function(wrap_pyfunction!(mass, m)?)?;
    m.add_function(wrap_pyfunction!(solve_pt, m)?)?;
    m.add_function(wrap_pyfunction!(degeneracy_ladder, m)?)?;
    m.add_function(wrap_pyfunction!(orthonormality_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
