//! Python bindings: parameters, equilibria, stability checks and simulation.

use pyo3::exceptions::{PyArithmeticError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use scirs::integrator::{sample_omega as core_sample, IntegrationConfig};
use scirs::model::PARAM_NAMES;
use scirs::stability;
use scirs::{Compartments, Error, ParamValues};
use scirs_cli::commands;
use scirs_cli::config::{read_params, Format, InitialStates, RunConfig, System};
use scirs_cli::CliError;

fn core_err(e: Error) -> PyErr {
    match e {
        Error::InvalidParameter { .. }
        | Error::InvalidConfig(_)
        | Error::NoEndemicEquilibrium { .. } => PyValueError::new_err(e.to_string()),
        Error::NonFiniteState { .. } => PyArithmeticError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn cli_err(e: CliError) -> PyErr {
    match e {
        CliError::Numerical(msg) => PyArithmeticError::new_err(msg),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// Serializable value to a Python object via JSON.
fn to_py<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn tuple3<C: Compartments<3>>(s: &C) -> (f64, f64, f64) {
    let [a, b, c] = s.to_array();
    (a, b, c)
}

#[pyclass(name = "ModelParams", frozen, eq, skip_from_py_object)]
#[derive(Clone, Copy, PartialEq)]
struct PyModelParams {
    inner: scirs::ModelParams,
}

#[pymethods]
impl PyModelParams {
    #[new]
    #[allow(non_snake_case)]
    #[pyo3(signature = (*, A, epsilon, a, v, mu, delta, b_I, b_C))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        A: f64,
        epsilon: f64,
        a: f64,
        v: f64,
        mu: f64,
        delta: f64,
        b_I: f64,
        b_C: f64,
    ) -> PyResult<Self> {
        let inner = ParamValues {
            recruitment: A,
            immunity_loss: epsilon,
            transmission: a,
            vaccination: v,
            mortality: mu,
            infectious_fraction: delta,
            infectious_recovery: b_I,
            carrier_recovery: b_C,
        }
        .validate()
        .map_err(core_err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn case1() -> Self {
        Self {
            inner: scirs::presets::case1(),
        }
    }

    #[staticmethod]
    fn case2() -> Self {
        Self {
            inner: scirs::presets::case2(),
        }
    }

    /// Reads a `name = value` or JSON params file.
    #[staticmethod]
    fn from_file(path: std::path::PathBuf) -> PyResult<Self> {
        Ok(Self {
            inner: read_params(&path).map_err(cli_err)?,
        })
    }

    fn get(&self, name: &str) -> PyResult<f64> {
        self.inner
            .get(name)
            .ok_or_else(|| PyValueError::new_err(format!("unknown parameter `{name}`")))
    }

    /// Copy with one parameter changed.
    fn replace(&self, name: &str, value: f64) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.with(name, value).map_err(core_err)?,
        })
    }

    fn as_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        for n in PARAM_NAMES {
            d.set_item(n, self.inner.get(n))?;
        }
        Ok(d)
    }

    fn reproduction_number(&self) -> f64 {
        self.inner.reproduction_number()
    }

    fn carrying_population(&self) -> f64 {
        self.inner.carrying_population()
    }

    /// `(S0, 0, 0)`.
    fn dfe(&self) -> (f64, f64, f64) {
        tuple3(&self.inner.dfe())
    }

    /// `(S*, C*, I*)`; raises `ValueError` when R0 <= 1.
    fn dee(&self) -> PyResult<(f64, f64, f64)> {
        Ok(tuple3(&self.inner.dee().map_err(core_err)?))
    }

    /// `(M*, I*, R*)` of the transformed system.
    fn transformed_dee(&self) -> PyResult<(f64, f64, f64)> {
        Ok(tuple3(&self.inner.transformed_dee().map_err(core_err)?))
    }

    fn equilibrium_report<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner.equilibrium_report())
    }

    fn __repr__(&self) -> String {
        let fields: Vec<String> = PARAM_NAMES
            .iter()
            .map(|n| format!("{n}={}", self.inner.get(n).unwrap_or(f64::NAN)))
            .collect();
        format!("ModelParams({})", fields.join(", "))
    }
}

/// `(holds, lhs, rhs)` of the explicit stability condition.
#[pyfunction]
fn gas_condition(p: &PyModelParams) -> PyResult<(bool, f64, f64)> {
    let g = stability::gas_condition(&p.inner).map_err(core_err)?;
    Ok((g.holds, g.lhs, g.rhs))
}

#[pyfunction]
#[pyo3(signature = (p, seed = 0, budget = stability::DEFAULT_SEARCH_BUDGET))]
fn find_diagonal_d(p: &PyModelParams, seed: u64, budget: usize) -> Option<(f64, f64, f64)> {
    stability::find_diagonal_d(&stability::build_q(&p.inner), seed, budget)
        .map(|d| (d[0], d[1], d[2]))
}

/// Full stability report with verdict, as a dict.
#[pyfunction]
#[pyo3(signature = (p, seed = 0, budget = stability::DEFAULT_SEARCH_BUDGET))]
fn check<'py>(
    py: Python<'py>,
    p: &PyModelParams,
    seed: u64,
    budget: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let report = commands::check(&p.inner, seed, budget).map_err(cli_err)?;
    to_py(py, &report)
}

/// Uniform samples from the feasible region, as `(S, C, I)` tuples.
#[pyfunction]
#[pyo3(signature = (p, n, seed = 0))]
fn sample_omega(p: &PyModelParams, n: usize, seed: u64) -> Vec<(f64, f64, f64)> {
    core_sample(&p.inner, n, seed).iter().map(tuple3).collect()
}

fn parse_system(name: &str) -> PyResult<System> {
    match name {
        "full" => Ok(System::Full),
        "limit" => Ok(System::Limit),
        "sir" => Ok(System::Sir),
        "mir" => Ok(System::Mir),
        other => Err(PyValueError::new_err(format!(
            "unknown system `{other}` (expected full, limit, sir or mir)"
        ))),
    }
}

/// Integrates from each initial state. Returns a dict with `columns`,
/// `equilibrium`, and per-run `t`, `states` and `converged_at`.
#[pyfunction]
#[pyo3(signature = (p, initial, system = "limit", h = 1e-3, t_end = 2000.0, stride = None, tol = 1e-3))]
#[allow(clippy::too_many_arguments)]
fn simulate<'py>(
    py: Python<'py>,
    p: &PyModelParams,
    initial: Vec<Vec<f64>>,
    system: &str,
    h: f64,
    t_end: f64,
    stride: Option<usize>,
    tol: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let mut integration = IntegrationConfig::with_step(h, t_end);
    if let Some(k) = stride {
        integration.record_stride = k;
    }
    integration.convergence_tol = tol;
    let cfg = RunConfig {
        params: p.inner,
        system: parse_system(system)?,
        integration,
        initial_states: InitialStates::Explicit(initial),
        output_path: Default::default(),
        output_format: Format::Json,
    };
    let sim = py.detach(|| commands::simulate(&cfg)).map_err(cli_err)?;
    let out = to_py(py, &sim)?;
    let runs = out.get_item("runs")?;
    for (k, run) in sim.runs.iter().enumerate() {
        let r = runs.get_item(k)?;
        r.set_item("t", run.times.clone())?;
        r.set_item("states", run.states.clone())?;
    }
    Ok(out)
}

#[pymodule]
fn pyscirs(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModelParams>()?;
    m.add_function(wrap_pyfunction!(gas_condition, m)?)?;
    m.add_function(wrap_pyfunction!(find_diagonal_d, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(sample_omega, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    Ok(())
}
