use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use hbac_core::config::parse_config;
use hbac_core::noe::two_qubit_fixed_point;
use hbac_core::runner::run_scenario as run_core_scenario;
use hbac_core::{channels, noe, ppa, solomon, state, HbacError};

fn to_py(e: HbacError) -> PyErr {
    match e {
        HbacError::NonConvergence { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn bath(eps_b: f64) -> PyResult<state::BathSpec> {
    state::BathSpec::new(eps_b).map_err(to_py)
}

#[pyclass(name = "BathSpec", frozen, from_py_object)]
#[derive(Clone)]
struct PyBathSpec(state::BathSpec);

#[pymethods]
impl PyBathSpec {
    #[new]
    fn new(eps_b: f64) -> PyResult<Self> {
        bath(eps_b).map(Self)
    }

    #[getter]
    fn polarization(&self) -> f64 {
        self.0.polarization()
    }

    #[getter]
    fn delta(&self) -> f64 {
        self.0.delta()
    }

    fn __repr__(&self) -> String {
        format!("BathSpec(eps_b={})", self.0.polarization())
    }
}

/// Diagonal n-qubit state; qubit 0 is the most significant bit.
#[pyclass(name = "DiagonalState", frozen, from_py_object)]
#[derive(Clone)]
struct PyDiagonalState(state::DiagonalState);

#[pymethods]
impl PyDiagonalState {
    #[new]
    fn new(populations: Vec<f64>) -> PyResult<Self> {
        state::DiagonalState::from_populations(populations)
            .map(Self)
            .map_err(to_py)
    }

    #[staticmethod]
    fn maximally_mixed(qubits: usize) -> PyResult<Self> {
        state::DiagonalState::maximally_mixed(qubits)
            .map(Self)
            .map_err(to_py)
    }

    #[staticmethod]
    fn thermal(qubits: usize, eps_b: f64) -> PyResult<Self> {
        state::DiagonalState::thermal(qubits, bath(eps_b)?)
            .map(Self)
            .map_err(to_py)
    }

    #[getter]
    fn num_qubits(&self) -> usize {
        self.0.num_qubits()
    }

    #[getter]
    fn populations(&self) -> Vec<f64> {
        self.0.populations().to_vec()
    }

    fn polarization(&self, qubit: usize) -> PyResult<f64> {
        self.0.polarization(qubit).map_err(to_py)
    }

    fn polarizations(&self) -> Vec<f64> {
        self.0.polarizations().0
    }

    fn tensor(&self, other: &PyDiagonalState) -> PyResult<Self> {
        self.0.tensor(&other.0).map(Self).map_err(to_py)
    }

    fn trace_out(&self, qubit: usize) -> PyResult<Self> {
        self.0.trace_out(qubit).map(Self).map_err(to_py)
    }

    fn l1_distance(&self, other: &PyDiagonalState) -> PyResult<f64> {
        self.0.l1_distance(&other.0).map_err(to_py)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __repr__(&self) -> String {
        format!("DiagonalState({:?})", self.0.populations())
    }
}

#[pyclass(name = "RunReport", frozen)]
struct PyRunReport(hbac_core::RunReport);

#[pymethods]
impl PyRunReport {
    #[getter]
    fn protocol(&self) -> String {
        self.0.protocol.to_string()
    }

    #[getter]
    fn iterations(&self) -> usize {
        self.0.iterations
    }

    #[getter]
    fn converged(&self) -> bool {
        self.0.converged
    }

    #[getter]
    fn settled_round(&self) -> usize {
        self.0.settled_round
    }

    #[getter]
    fn target_polarization(&self) -> f64 {
        self.0.target_polarization()
    }

    #[getter]
    fn final_polarizations(&self) -> Vec<f64> {
        self.0.final_polarizations.0.clone()
    }

    #[getter]
    fn final_state(&self) -> PyDiagonalState {
        PyDiagonalState(self.0.final_state.clone())
    }

    #[getter]
    fn trajectory(&self) -> Vec<Vec<f64>> {
        self.0.trajectory.iter().map(|p| p.0.clone()).collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "RunReport(protocol={}, iterations={}, converged={}, target={})",
            self.0.protocol,
            self.0.iterations,
            self.0.converged,
            self.0.target_polarization()
        )
    }
}

#[pyfunction]
fn thermal_qubit(eps_b: f64) -> PyResult<PyDiagonalState> {
    Ok(PyDiagonalState(state::thermal_qubit(bath(eps_b)?)))
}

#[pyfunction]
fn apply_permutation(state: &PyDiagonalState, perm: Vec<usize>) -> PyResult<PyDiagonalState> {
    channels::apply_permutation(&state.0, &perm)
        .map(PyDiagonalState)
        .map_err(to_py)
}

#[pyfunction]
fn sort_step(state: &PyDiagonalState) -> PyDiagonalState {
    PyDiagonalState(channels::sort_step(&state.0))
}

#[pyfunction]
fn refresh_reset(state: &PyDiagonalState, qubit: usize, eps_b: f64) -> PyResult<PyDiagonalState> {
    channels::refresh_reset(&state.0, qubit, bath(eps_b)?)
        .map(PyDiagonalState)
        .map_err(to_py)
}

#[pyfunction]
fn state_reset(
    state: &PyDiagonalState,
    i: usize,
    j: usize,
    ratio: f64,
) -> PyResult<PyDiagonalState> {
    channels::state_reset(&state.0, i, j, ratio)
        .map(PyDiagonalState)
        .map_err(to_py)
}

#[pyfunction]
fn saturate(state: &PyDiagonalState, qubit: usize) -> PyResult<PyDiagonalState> {
    channels::saturate(&state.0, qubit)
        .map(PyDiagonalState)
        .map_err(to_py)
}

fn ppa_config(
    qubits: usize,
    eps_b: f64,
    reset_qubits: Option<Vec<usize>>,
    tol: f64,
    max_iters: usize,
) -> PyResult<ppa::PpaConfig> {
    let reset = reset_qubits.unwrap_or_else(|| (1..qubits).collect());
    Ok(ppa::PpaConfig::new(reset, bath(eps_b)?)
        .with_tol(tol)
        .with_max_iters(max_iters))
}

fn noe_config(
    eps_b: f64,
    driven_qubit: usize,
    ratio: Option<f64>,
    tol: f64,
    max_iters: usize,
) -> PyResult<noe::NoeConfig> {
    let mut cfg = noe::NoeConfig::new(bath(eps_b)?)
        .with_driven_qubit(driven_qubit)
        .with_tol(tol)
        .with_max_iters(max_iters);
    cfg.ratio_override = ratio;
    Ok(cfg)
}

#[pyfunction]
#[pyo3(signature = (state, eps_b, reset_qubits=None))]
fn ppa_round(
    state: &PyDiagonalState,
    eps_b: f64,
    reset_qubits: Option<Vec<usize>>,
) -> PyResult<PyDiagonalState> {
    let cfg = ppa_config(state.0.num_qubits(), eps_b, reset_qubits, 1e-12, 1)?;
    ppa::ppa_round(&state.0, &cfg)
        .map(PyDiagonalState)
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (state, eps_b, reset_qubits=None, tol=1e-12, max_iters=1_000_000))]
fn run_ppa(
    state: &PyDiagonalState,
    eps_b: f64,
    reset_qubits: Option<Vec<usize>>,
    tol: f64,
    max_iters: usize,
) -> PyResult<PyRunReport> {
    let cfg = ppa_config(state.0.num_qubits(), eps_b, reset_qubits, tol, max_iters)?;
    ppa::run_ppa(&state.0, &cfg).map(PyRunReport).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (state, eps_b, driven_qubit=1, ratio=None))]
fn noe_round(
    state: &PyDiagonalState,
    eps_b: f64,
    driven_qubit: usize,
    ratio: Option<f64>,
) -> PyResult<PyDiagonalState> {
    let cfg = noe_config(eps_b, driven_qubit, ratio, 1e-12, 1)?;
    noe::noe_round(&state.0, &cfg)
        .map(PyDiagonalState)
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (state, eps_b, driven_qubit=1, ratio=None, tol=1e-12, max_iters=1_000_000))]
fn run_noe(
    state: &PyDiagonalState,
    eps_b: f64,
    driven_qubit: usize,
    ratio: Option<f64>,
    tol: f64,
    max_iters: usize,
) -> PyResult<PyRunReport> {
    let cfg = noe_config(eps_b, driven_qubit, ratio, tol, max_iters)?;
    noe::run_noe(&state.0, &cfg).map(PyRunReport).map_err(to_py)
}

/// Returns `(eps_ppa, eps_noe, ratio, excess)`; `ratio` is `None` when the
/// PPA polarization is zero.
#[pyfunction]
fn enhancement_report(
    ppa: &PyRunReport,
    noe: &PyRunReport,
) -> PyResult<(f64, f64, Option<f64>, f64)> {
    let e = noe::enhancement_report(&ppa.0, &noe.0).map_err(to_py)?;
    Ok((e.eps_ppa, e.eps_noe, e.ratio, e.excess))
}

#[pyfunction]
fn noe_two_qubit_fixed_point(ratio: f64) -> f64 {
    two_qubit_fixed_point(ratio)
}

fn solomon_params(
    rho1: f64,
    rho2: f64,
    sigma: f64,
    s1_eq: f64,
    s2_eq: f64,
) -> PyResult<solomon::SolomonParams> {
    solomon::SolomonParams::new(rho1, rho2, sigma, s1_eq, s2_eq).map_err(to_py)
}

fn mode(saturated: bool) -> solomon::DriveMode {
    if saturated {
        solomon::DriveMode::Saturated
    } else {
        solomon::DriveMode::Free
    }
}

#[pyfunction]
#[pyo3(signature = (rho1, rho2, sigma, s1_eq, s2_eq, s1, s2, saturated=false))]
#[allow(clippy::too_many_arguments)]
fn solomon_rhs(
    rho1: f64,
    rho2: f64,
    sigma: f64,
    s1_eq: f64,
    s2_eq: f64,
    s1: f64,
    s2: f64,
    saturated: bool,
) -> PyResult<(f64, f64)> {
    let params = solomon_params(rho1, rho2, sigma, s1_eq, s2_eq)?;
    Ok(solomon::solomon_rhs(&params, s1, s2, mode(saturated)))
}

/// Returns `(t, s1, s2)` sample lists.
#[pyfunction]
#[pyo3(signature = (rho1, rho2, sigma, s1_eq, s2_eq, s1_0, s2_0, t_end, dt, saturated=false))]
#[allow(clippy::too_many_arguments)]
fn integrate(
    rho1: f64,
    rho2: f64,
    sigma: f64,
    s1_eq: f64,
    s2_eq: f64,
    s1_0: f64,
    s2_0: f64,
    t_end: f64,
    dt: f64,
    saturated: bool,
) -> PyResult<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let params = solomon_params(rho1, rho2, sigma, s1_eq, s2_eq)?;
    let traj =
        solomon::integrate(&params, s1_0, s2_0, t_end, dt, mode(saturated)).map_err(to_py)?;
    Ok((traj.t, traj.s1, traj.s2))
}

#[pyfunction]
fn steady_state_saturated(
    rho1: f64,
    rho2: f64,
    sigma: f64,
    s1_eq: f64,
    s2_eq: f64,
) -> PyResult<f64> {
    let params = solomon_params(rho1, rho2, sigma, s1_eq, s2_eq)?;
    Ok(solomon::steady_state_saturated(&params))
}

/// Runs a TOML scenario and returns `(rendered_output, all_converged)`.
/// Output paths in the config are ignored.
#[pyfunction]
fn run_scenario(config: &str) -> PyResult<(String, bool)> {
    let cfg = parse_config(config).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let outcome = run_core_scenario(&cfg).map_err(to_py)?;
    Ok((outcome.render(), outcome.all_converged()))
}

#[pymodule]
fn hbac(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyBathSpec>()?;
    m.add_class::<PyDiagonalState>()?;
    m.add_class::<PyRunReport>()?;
    m.add_function(wrap_pyfunction!(thermal_qubit, m)?)?;
    m.add_function(wrap_pyfunction!(apply_permutation, m)?)?;
    m.add_function(wrap_pyfunction!(sort_step, m)?)?;
    m.add_function(wrap_pyfunction!(refresh_reset, m)?)?;
    m.add_function(wrap_pyfunction!(state_reset, m)?)?;
    m.add_function(wrap_pyfunction!(saturate, m)?)?;
    m.add_function(wrap_pyfunction!(ppa_round, m)?)?;
    m.add_function(wrap_pyfunction!(run_ppa, m)?)?;
    m.add_function(wrap_pyfunction!(noe_round, m)?)?;
    m.add_function(wrap_pyfunction!(run_noe, m)?)?;
    m.add_function(wrap_pyfunction!(enhancement_report, m)?)?;
    m.add_function(wrap_pyfunction!(noe_two_qubit_fixed_point, m)?)?;
    m.add_function(wrap_pyfunction!(solomon_rhs, m)?)?;
    m.add_function(wrap_pyfunction!(integrate, m)?)?;
    m.add_function(wrap_pyfunction!(steady_state_saturated, m)?)?;
    m.add_function(wrap_pyfunction!(run_scenario, m)?)?;
    Ok(())
}
