//! Python module `quasifree`. Matrices cross the boundary as nested lists of
//! complex numbers; records come back as plain dicts.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyBool, PyDict, PyList, PyString};
use quasifree_core::bdf_rep::{bdf_state_build, bdf_vacuum_bound, normal_ordered_pdm, pair_probability, BdfSpec};
use quasifree_core::fock_oracle::{exp_number, quasi_free_oracle_state};
use quasifree_core::quasifree::{self as qf, QuasiFreeSpec};
use quasifree_core::vacuum_energy::{self as ve, ExternalDensity, TrialParams};
use quasifree_core::verify::{self, Suite, VerifyOptions};
use quasifree_core::{constants, CMatrix, Tolerances};
use serde_json::Value;

fn err(e: quasifree_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => PyBool::new(py, *b).to_owned().into_any(),
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_pyobject(py)?.into_any(),
            None => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => PyString::new(py, s).into_any(),
        Value::Array(a) => {
            let l = PyList::empty(py);
            for x in a {
                l.append(to_py(py, x)?)?;
            }
            l.into_any()
        }
        Value::Object(o) => {
            let d = PyDict::new(py);
            for (k, x) in o {
                d.set_item(k, to_py(py, x)?)?;
            }
            d.into_any()
        }
    })
}

fn serialize<'py>(py: Python<'py>, v: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let value = serde_json::to_value(v).map_err(|e| PyValueError::new_err(e.to_string()))?;
    to_py(py, &value)
}

fn matrix(rows: Vec<Vec<Complex64>>) -> PyResult<CMatrix> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(PyValueError::new_err("expected a square matrix"));
    }
    Ok(CMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

fn density(py: Python<'_>, nu: Option<&Bound<'_, PyAny>>) -> PyResult<ExternalDensity> {
    match nu {
        None => ExternalDensity::uniform_ball(1.0).map_err(err),
        Some(obj) => {
            let text: String = py.import("json")?.call_method1("dumps", (obj,))?.extract()?;
            serde_json::from_str(&text).map_err(|e| PyValueError::new_err(format!("invalid nu: {e}")))
        }
    }
}

/// The optimized constants as a dict.
#[pyfunction]
#[pyo3(signature = (recompute = false))]
fn constants_report(py: Python<'_>, recompute: bool) -> PyResult<Bound<'_, PyAny>> {
    serialize(py, &constants::constants_with(recompute))
}

/// ω(e^{−β𝒩}) = det(1 + (e^{−β} − 1)γ) for the quasi-free state with 1-pdm γ.
#[pyfunction]
fn hf_generating_function(gamma: Vec<Vec<Complex64>>, beta: f64) -> PyResult<f64> {
    qf::hf_generating_function(&matrix(gamma)?, beta).map_err(err)
}

/// The same quantity measured on the dense Fock-space state.
#[pyfunction]
fn oracle_generating_function(gamma: Vec<Vec<Complex64>>, beta: f64) -> PyResult<f64> {
    let spec = QuasiFreeSpec::hf(matrix(gamma)?);
    let state = quasi_free_oracle_state(&spec).map_err(err)?;
    Ok(state.expectation(&exp_number(state.basis(), beta)).map_err(err)?.re)
}

#[pyfunction]
fn hf_sector_distribution(gamma: Vec<Vec<Complex64>>) -> PyResult<Vec<f64>> {
    qf::hf_sector_distribution(&matrix(gamma)?).map_err(err)
}

#[pyfunction]
fn mixed_vacuum_bound(tr_gamma: f64) -> PyResult<f64> {
    qf::mixed_vacuum_bound(tr_gamma).map_err(err)
}

#[pyfunction]
fn interpolated_vacuum_bound(tr_d: f64, tr_vv: f64, beta: f64, theta: f64) -> PyResult<f64> {
    qf::interpolated_vacuum_bound(tr_d, tr_vv, beta, theta).map_err(err)
}

/// Runs one suite (or "all") and returns the report dict.
#[pyfunction]
#[pyo3(signature = (suite = "all", dim = 4, trials = 20, seed = 0))]
fn run_verify<'py>(py: Python<'py>, suite: &str, dim: usize, trials: usize, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let opts = VerifyOptions::new(dim, trials, seed);
    let reports = if suite == "all" {
        verify::run_all(&opts).map_err(err)?
    } else {
        vec![verify::run_suite(suite.parse::<Suite>().map_err(err)?, &opts).map_err(err)?]
    };
    serialize(py, &reports)
}

fn trial_params(py: Python<'_>, alpha_c: f64, lam: f64, nu: Option<&Bound<'_, PyAny>>, c_lambda: f64) -> PyResult<TrialParams> {
    let p = TrialParams::optimal(1.0, alpha_c, lam, density(py, nu)?, c_lambda);
    p.check_model().map_err(err)?;
    Ok(p)
}

/// Rows of (Z, E_upper, E_lower, N_lower, pZ_lower) plus the thresholds.
#[pyfunction]
#[pyo3(signature = (z_grid, alpha_c = 1.0, lam = 1.0, nu = None, c_lambda = 1.0))]
fn energy_table<'py>(
    py: Python<'py>,
    z_grid: Vec<f64>,
    alpha_c: f64,
    lam: f64,
    nu: Option<&Bound<'py, PyAny>>,
    c_lambda: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let model = trial_params(py, alpha_c, lam, nu, c_lambda)?;
    let (th, rows) = ve::energy_table(&model, &z_grid).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("thresholds", serialize(py, &th)?)?;
    out.set_item("rows", serialize(py, &rows)?)?;
    Ok(out.into_any())
}

/// 1 − e^{−κZ^{2/3}}, or None at or below Z̃₁.
#[pyfunction]
#[pyo3(signature = (z, alpha_c = 1.0, lam = 1.0, nu = None, c_lambda = 1.0))]
fn pair_probability_lower_bound(
    py: Python<'_>,
    z: f64,
    alpha_c: f64,
    lam: f64,
    nu: Option<&Bound<'_, PyAny>>,
    c_lambda: f64,
) -> PyResult<Option<f64>> {
    let model = trial_params(py, alpha_c, lam, nu, c_lambda)?;
    let b = ve::pair_probability_lower_bound(z, &model.with_z(z)).map_err(err)?;
    Ok(b.valid.then_some(b.value))
}

/// Exact pair probability of the BDF state in `spec_json`, with its overlap bound.
#[pyfunction]
fn bdf_pair_probability<'py>(py: Python<'py>, spec_json: &str) -> PyResult<Bound<'py, PyAny>> {
    let spec = BdfSpec::from_json(spec_json, &Tolerances::default()).map_err(err)?;
    let state = bdf_state_build(&spec).map_err(err)?;
    let measured = normal_ordered_pdm(&state, &spec.frame).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("pair_probability", pair_probability(&state))?;
    d.set_item("vacuum_overlap", state.vacuum_overlap())?;
    d.set_item("vacuum_bound", bdf_vacuum_bound(&spec).map_err(err)?)?;
    d.set_item("relative_number", measured.n_avg)?;
    Ok(d.into_any())
}

#[pymodule]
fn quasifree(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(constants_report, m)?)?;
    m.add_function(wrap_pyfunction!(hf_generating_function, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_generating_function, m)?)?;
    m.add_function(wrap_pyfunction!(hf_sector_distribution, m)?)?;
    m.add_function(wrap_pyfunction!(mixed_vacuum_bound, m)?)?;
    m.add_function(wrap_pyfunction!(interpolated_vacuum_bound, m)?)?;
    m.add_function(wrap_pyfunction!(run_verify, m)?)?;
    m.add_function(wrap_pyfunction!(energy_table, m)?)?;
    m.add_function(wrap_pyfunction!(pair_probability_lower_bound, m)?)?;
    m.add_function(wrap_pyfunction!(bdf_pair_probability, m)?)?;
    Ok(())
}
