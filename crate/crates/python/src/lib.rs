//! Python bindings: `import fqnm`.

use std::path::PathBuf;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use fqnm_core::baselines::{upwind_step as core_upwind, weno5_step as core_weno5};
use fqnm_core::euler::{run_euler, shu_osher_init};
use fqnm_core::harness::{parse_config, run_experiment as core_run_experiment};
use fqnm_core::quantization::{check_quantization_bound, dequantize, quantize};
use fqnm_core::transfer::{self, conservative_step, TransferLedger};
use fqnm_core::{oracles, Boundary, FluxModel, Grid1D, IntegerField, QuantScale, RealField, StepParams};

fn value_err(e: fqnm_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_boundary(name: &str) -> PyResult<Boundary> {
    match name {
        "periodic" => Ok(Boundary::Periodic),
        "fixed-extrapolation" | "extrapolation" => Ok(Boundary::FixedExtrapolation),
        other => Err(PyValueError::new_err(format!(
            "unknown boundary '{other}' (expected 'periodic' or 'fixed-extrapolation')"
        ))),
    }
}

fn real_field(values: Vec<f64>) -> PyResult<RealField> {
    RealField::new(values).map_err(value_err)
}

fn integer_field(values: Vec<i64>) -> PyResult<IntegerField> {
    IntegerField::new(values).map_err(value_err)
}

#[pyclass(name = "QuantScale", frozen)]
struct PyQuantScale {
    inner: QuantScale,
}

#[pymethods]
impl PyQuantScale {
    #[new]
    fn new(delta: f64) -> PyResult<Self> {
        Ok(Self {
            inner: QuantScale::new(delta).map_err(value_err)?,
        })
    }

    #[getter]
    fn delta(&self) -> f64 {
        self.inner.delta()
    }

    fn quantize(&self, values: Vec<f64>) -> PyResult<Vec<i64>> {
        Ok(quantize(&real_field(values)?, self.inner).map_err(value_err)?.into_inner())
    }

    fn dequantize(&self, q: Vec<i64>) -> PyResult<Vec<f64>> {
        Ok(dequantize(&integer_field(q)?, self.inner).into_inner())
    }

    /// Max-norm quantization error of `values`.
    fn check_bound(&self, values: Vec<f64>) -> PyResult<f64> {
        check_quantization_bound(&real_field(values)?, self.inner).map_err(value_err)
    }

    fn __repr__(&self) -> String {
        format!("QuantScale(delta={:?})", self.inner.delta())
    }
}

#[pyclass(name = "FluxModel", frozen)]
struct PyFluxModel {
    inner: FluxModel,
}

#[pymethods]
impl PyFluxModel {
    #[staticmethod]
    fn advection(speed: f64) -> Self {
        Self {
            inner: FluxModel::Advection { speed },
        }
    }

    #[staticmethod]
    fn burgers() -> Self {
        Self {
            inner: FluxModel::Burgers,
        }
    }

    #[getter]
    fn name(&self) -> &'static str {
        self.inner.name()
    }

    fn flux(&self, u: f64) -> f64 {
        self.inner.flux(u)
    }

    fn f_plus(&self, u: f64) -> f64 {
        self.inner.f_plus(u)
    }

    fn f_minus(&self, u: f64) -> f64 {
        self.inner.f_minus(u)
    }

    fn max_wave_speed(&self, u_lo: f64, u_hi: f64) -> f64 {
        self.inner.max_wave_speed(u_lo, u_hi)
    }

    fn __repr__(&self) -> String {
        format!("FluxModel({})", self.inner)
    }
}

/// Step parameters of the integer transfer operator and the float baselines.
#[pyclass(name = "Stepper", frozen)]
struct PyStepper {
    inner: StepParams,
}

#[pymethods]
impl PyStepper {
    #[new]
    #[pyo3(signature = (dt, dx, delta, model, boundary = "periodic"))]
    fn new(dt: f64, dx: f64, delta: f64, model: PyRef<'_, PyFluxModel>, boundary: &str) -> PyResult<Self> {
        let scale = QuantScale::new(delta).map_err(value_err)?;
        Ok(Self {
            inner: StepParams::new(dt, dx, scale, model.inner, parse_boundary(boundary)?).map_err(value_err)?,
        })
    }

    #[getter]
    fn lambda_(&self) -> f64 {
        self.inner.lambda()
    }

    fn phi_plus(&self, q: i64) -> PyResult<i64> {
        transfer::phi_plus(q, &self.inner).map_err(value_err)
    }

    fn phi_minus(&self, q: i64) -> PyResult<i64> {
        transfer::phi_minus(q, &self.inner).map_err(value_err)
    }

    fn interface_transfer(&self, q_left: i64, q_right: i64) -> PyResult<i64> {
        transfer::interface_transfer(q_left, q_right, &self.inner).map_err(value_err)
    }

    /// One integer step; returns `(field, (left_outflow, right_outflow))`.
    fn step(&self, q: Vec<i64>) -> PyResult<(Vec<i64>, (i128, i128))> {
        let mut ledger = TransferLedger::default();
        let next = conservative_step(&integer_field(q)?, &self.inner, &mut ledger).map_err(value_err)?;
        Ok((
            next.into_inner(),
            (ledger.left_boundary_outflow, ledger.right_boundary_outflow),
        ))
    }

    /// `n_steps` integer steps; returns `(final_field, masses)`.
    fn run(&self, q: Vec<i64>, n_steps: usize) -> PyResult<(Vec<i64>, Vec<i128>)> {
        let rec = transfer::run(&integer_field(q)?, &self.inner, n_steps, n_steps.max(1)).map_err(value_err)?;
        Ok((rec.final_field.into_inner(), rec.masses))
    }

    fn upwind_step(&self, u: Vec<f64>) -> PyResult<Vec<f64>> {
        Ok(core_upwind(&real_field(u)?, &self.inner).map_err(value_err)?.into_inner())
    }

    fn weno5_step(&self, u: Vec<f64>) -> PyResult<Vec<f64>> {
        Ok(core_weno5(&real_field(u)?, &self.inner).map_err(value_err)?.into_inner())
    }
}

#[pyfunction]
fn total_mass(q: Vec<i64>) -> i128 {
    transfer::total_mass(&q)
}

/// Hopf–Lax entropy solution of Burgers for `u0 = sin(2πx/L)`.
#[pyfunction]
#[pyo3(signature = (x, t, length = 1.0))]
fn hopf_lax(x: f64, t: f64, length: f64) -> PyResult<f64> {
    let ic = oracles::SineIc::new(length).map_err(value_err)?;
    Ok(oracles::hopf_lax(x, t, &ic))
}

/// Exhaustive monotonicity scan; returns a dict with `passed`, `stencils_checked`
/// and `counterexample` (None or `(stencil, argument, before, after)`).
#[pyfunction]
fn verify_monotone_stencil<'py>(
    py: Python<'py>,
    model: PyRef<'_, PyFluxModel>,
    lambda_: f64,
    delta: f64,
    q_range: i64,
) -> PyResult<Bound<'py, PyDict>> {
    let report = oracles::verify_monotone_stencil(model.inner, lambda_, delta, q_range).map_err(value_err)?;
    let out = PyDict::new(py);
    out.set_item("passed", report.passed())?;
    out.set_item("stencils_checked", report.stencils_checked)?;
    out.set_item(
        "counterexample",
        report
            .counterexample
            .map(|c| (c.stencil.to_vec(), c.argument, c.before, c.after)),
    )?;
    Ok(out)
}

/// Shu–Osher run; returns a dict of `x, rho, mom, ene, p` lists plus `steps`
/// and the final per-component integer `masses`.
#[pyfunction]
#[pyo3(signature = (n_cells = 400, t_final = 1.8, cfl = 0.9, delta = 1e-4, gamma = 1.4))]
fn shu_osher<'py>(
    py: Python<'py>,
    n_cells: usize,
    t_final: f64,
    cfl: f64,
    delta: f64,
    gamma: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let run = py
        .detach(|| -> fqnm_core::Result<_> {
            let grid = Grid1D::new(n_cells, -5.0, 10.0, Boundary::FixedExtrapolation)?;
            let scale = QuantScale::new(delta)?;
            let s0 = shu_osher_init(&grid, gamma, [scale; 3])?;
            let run = run_euler(&s0, &grid, gamma, cfl, t_final)?;
            let rows = run.state.primitive_rows(&grid, gamma)?;
            Ok((run, rows))
        })
        .map_err(value_err)?;
    let (run, rows) = run;
    let out = PyDict::new(py);
    for (k, name) in ["x", "rho", "mom", "ene", "p"].iter().enumerate() {
        out.set_item(*name, rows.iter().map(|r| r[k]).collect::<Vec<_>>())?;
    }
    out.set_item("steps", run.ledger.step_count)?;
    out.set_item("masses", run.state.masses().to_vec())?;
    Ok(out)
}

/// Runs an `fqnm-lab` config file; returns the paths written.
#[pyfunction]
#[pyo3(signature = (config_path, out_dir = None))]
fn run_experiment(py: Python<'_>, config_path: PathBuf, out_dir: Option<PathBuf>) -> PyResult<Vec<String>> {
    let mut cfg = parse_config(&config_path).map_err(|e| PyValueError::new_err(e.to_string()))?;
    if let Some(dir) = out_dir {
        cfg.out_dir = dir;
    }
    let summary = py
        .detach(|| core_run_experiment(&cfg))
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(summary.files.iter().map(|p| p.display().to_string()).collect())
}

#[pymodule]
fn fqnm(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyQuantScale>()?;
    m.add_class::<PyFluxModel>()?;
    m.add_class::<PyStepper>()?;
    m.add_function(wrap_pyfunction!(total_mass, m)?)?;
    m.add_function(wrap_pyfunction!(hopf_lax, m)?)?;
    m.add_function(wrap_pyfunction!(verify_monotone_stencil, m)?)?;
    m.add_function(wrap_pyfunction!(shu_osher, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    Ok(())
}
