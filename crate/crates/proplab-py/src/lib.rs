//! Python bindings for proplab.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use proplab::experiments::{self, DecayReport, ExperimentConfig};
use proplab::{potentials, Grid};

fn err(e: proplab::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Turns a flat `{"grid.n": 512, ...}` dict into a config; values go through `str()`.
fn config(d: Option<&Bound<'_, PyDict>>) -> PyResult<ExperimentConfig> {
    let mut pairs = Vec::new();
    if let Some(d) = d {
        for (k, v) in d.iter() {
            let value = match v.extract::<bool>() {
                Ok(b) => b.to_string(),
                Err(_) => v.str()?.to_string(),
            };
            pairs.push((k.str()?.to_string(), value));
        }
    }
    pairs.sort();
    let refs: Vec<(&str, &str)> = pairs.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect();
    ExperimentConfig::from_pairs(&refs).map_err(err)
}

/// Grid points x_j = -L + j h of the symmetric Dirichlet grid.
#[pyfunction]
#[pyo3(signature = (n, half_width))]
fn grid_points(n: usize, half_width: f64) -> PyResult<Vec<f64>> {
    Ok(Grid::symmetric(n, half_width).map_err(err)?.points())
}

/// Potential named by the `potential.*` keys of `config`, sampled at `xs`.
#[pyfunction]
#[pyo3(signature = (xs, config=None))]
fn potential(xs: Vec<f64>, config: Option<&Bound<'_, PyDict>>) -> PyResult<Vec<f64>> {
    let cfg = self::config(config)?;
    xs.iter()
        .map(|&x| potentials::evaluate(&cfg.potential, x).map_err(err))
        .collect()
}

/// `Ṽ_β(x) = (i/2)[V(e^{iβ}x) - V(e^{-iβ}x)]` at `xs`.
#[pyfunction]
#[pyo3(signature = (xs, beta, config=None))]
fn v_beta(xs: Vec<f64>, beta: f64, config: Option<&Bound<'_, PyDict>>) -> PyResult<Vec<f64>> {
    let cfg = self::config(config)?;
    xs.iter()
        .map(|&x| potentials::v_beta(&cfg.potential, x, beta).map_err(err))
        .collect()
}

fn to_dict<'py>(py: Python<'py>, rep: &DecayReport) -> PyResult<Bound<'py, PyDict>> {
    let out = PyDict::new(py);
    out.set_item("kind", &rep.kind)?;
    out.set_item("passed", rep.passed())?;
    out.set_item("config_hash", &rep.config_hash)?;
    out.set_item("summary", rep.summary())?;
    out.set_item("flags", rep.flags.clone())?;
    let values = PyDict::new(py);
    for (k, v) in rep.integrals.iter().chain(&rep.bounds).chain(&rep.constants) {
        values.set_item(k, *v)?;
    }
    out.set_item("values", values)?;
    let series = PyDict::new(py);
    for name in &rep.columns {
        series.set_item(name, rep.column(name).unwrap_or_default())?;
    }
    out.set_item("series", series)?;
    let certs = PyList::empty(py);
    for c in &rep.certificates {
        let d = PyDict::new(py);
        d.set_item("name", &c.name)?;
        d.set_item("params", &c.params)?;
        d.set_item("lambda_min", c.lambda_min)?;
        d.set_item("margin", c.margin)?;
        d.set_item("tolerance", c.tolerance)?;
        d.set_item("passed", c.passed)?;
        certs.append(d)?;
    }
    out.set_item("certificates", certs)?;
    let checks = PyDict::new(py);
    for c in &rep.checks {
        checks.set_item(&c.name, c.passed)?;
    }
    out.set_item("checks", checks)?;
    Ok(out)
}

/// Runs the certificate battery for `config`.
#[pyfunction]
#[pyo3(signature = (config=None))]
fn certify<'py>(py: Python<'py>, config: Option<&Bound<'py, PyDict>>) -> PyResult<Bound<'py, PyDict>> {
    let cfg = self::config(config)?;
    let rep = py.allow_threads(|| experiments::run_certificates(&cfg)).map_err(err)?;
    to_dict(py, &rep)
}

/// Runs the experiment selected by `experiment.kind`.
#[pyfunction]
#[pyo3(signature = (config=None, jobs=1))]
fn run<'py>(py: Python<'py>, config: Option<&Bound<'py, PyDict>>, jobs: usize) -> PyResult<Bound<'py, PyDict>> {
    let cfg = self::config(config)?;
    let rep = py
        .allow_threads(|| experiments::run_experiment(&cfg, jobs))
        .map_err(err)?;
    to_dict(py, &rep)
}

/// Same as `run`, reading a key=value config file.
#[pyfunction]
#[pyo3(signature = (path, overrides=Vec::new(), jobs=1))]
fn run_file<'py>(py: Python<'py>, path: &str, overrides: Vec<String>, jobs: usize) -> PyResult<Bound<'py, PyDict>> {
    let cfg = experiments::parse_config(path, &overrides).map_err(err)?;
    let rep = py
        .allow_threads(|| experiments::run_experiment(&cfg, jobs))
        .map_err(err)?;
    to_dict(py, &rep)
}

#[pymodule]
fn proplab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(grid_points, m)?)?;
    m.add_function(wrap_pyfunction!(potential, m)?)?;
    m.add_function(wrap_pyfunction!(v_beta, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(run_file, m)?)?;
    Ok(())
}
