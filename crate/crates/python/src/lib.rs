use polyint::frontend::cli::{cli_run, CliResult};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn call(args: Vec<String>) -> CliResult {
    cli_run(std::iter::once("polyint".to_string()).chain(args))
}

fn flags(mut args: Vec<String>, var: &str, json: bool) -> Vec<String> {
    args.extend(["--var".to_string(), var.to_string()]);
    if json {
        args.push("--json".into());
    }
    args
}

/// Output of a command; errors (exit code 2) raise `ValueError`.
fn payload(r: CliResult) -> PyResult<(String, String)> {
    if r.exit_code == 2 {
        return Err(PyValueError::new_err(r.payload));
    }
    Ok((r.status.as_str().to_string(), r.payload))
}

/// Runs the command line `args` (without the program name) and returns
/// `(status, payload, exit_code)`.
#[pyfunction]
fn run(args: Vec<String>) -> (String, String, i32) {
    let r = call(args);
    (r.status.as_str().to_string(), r.payload, r.exit_code)
}

/// `(status, result)`; status is `Integrated` or `NoIntegralFound`.
#[pyfunction]
#[pyo3(signature = (expr, var = "x", json = false))]
fn integrate(expr: &str, var: &str, json: bool) -> PyResult<(String, String)> {
    payload(call(flags(vec!["integrate".into(), expr.into()], var, json)))
}

#[pyfunction]
#[pyo3(signature = (expr, var = "x"))]
fn derive(expr: &str, var: &str) -> PyResult<String> {
    payload(call(flags(vec!["derive".into(), expr.into()], var, false))).map(|(_, p)| p)
}

/// Whether `claim` differentiates to `expr`.
#[pyfunction]
#[pyo3(signature = (expr, claim, var = "x"))]
fn verify(expr: &str, claim: &str, var: &str) -> PyResult<bool> {
    let (status, _) = payload(call(flags(
        vec!["verify".into(), expr.into(), "--claim".into(), claim.into()],
        var,
        false,
    )))?;
    Ok(status == "Verified")
}

#[pyfunction]
#[pyo3(signature = (expr, claim = None, var = "x", json = false))]
fn descend(expr: &str, claim: Option<&str>, var: &str, json: bool) -> PyResult<(String, String)> {
    let mut args = vec!["descend".to_string(), expr.to_string()];
    if let Some(c) = claim {
        args.extend(["--claim".to_string(), c.to_string()]);
    }
    payload(call(flags(args, var, json)))
}

/// JSON dump of the residual tensor for the argument `h`.
#[pyfunction]
#[pyo3(signature = (h, var = "x"))]
fn tensor_check(h: &str, var: &str) -> PyResult<String> {
    payload(call(flags(vec!["tensor-check".into(), h.into()], var, true))).map(|(_, p)| p)
}

#[pymodule]
fn polyint_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(integrate, m)?)?;
    m.add_function(wrap_pyfunction!(derive, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(descend, m)?)?;
    m.add_function(wrap_pyfunction!(tensor_check, m)?)?;
    Ok(())
}
