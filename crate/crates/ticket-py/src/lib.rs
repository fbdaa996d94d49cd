use std::time::Duration;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use ticket::cli::{decision_json, Emit};
use ticket::combinator::{check_derivation, CombDerivation};
use ticket::formula::{parse_formula, Formula};
use ticket::oracle::{enumerate_inhabitants, SearchBound};
use ticket::shadow::{decide as decide_formula, Caps, DecideConfig, Engine};

fn formula(text: &str) -> PyResult<Formula> {
    parse_formula(text).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Parses a formula and returns its normalized printed form.
#[pyfunction]
fn parse(text: &str) -> PyResult<String> {
    Ok(formula(text)?.to_string())
}

/// Decides a formula; returns the decision as a JSON string.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (text, engine = "auto", max_nodes = 10, max_shadow_nodes = 48, max_shadows = 200_000, max_candidates = 256, time_budget = 60.0))]
fn decide(
    py: Python<'_>,
    text: &str,
    engine: &str,
    max_nodes: usize,
    max_shadow_nodes: usize,
    max_shadows: usize,
    max_candidates: usize,
    time_budget: f64,
) -> PyResult<String> {
    let phi = formula(text)?;
    let engine = match engine {
        "auto" => Engine::Auto,
        "bounded" => Engine::Bounded,
        "shadow" => Engine::Shadow,
        other => return Err(PyValueError::new_err(format!("unknown engine {other:?}"))),
    };
    if !(time_budget.is_finite() && time_budget > 0.0) {
        return Err(PyValueError::new_err("time_budget must be positive"));
    }
    let config = DecideConfig {
        engine,
        caps: Caps {
            max_nodes,
            max_shadow_nodes,
            max_shadows,
            max_candidates,
            time_budget: Some(Duration::from_secs_f64(time_budget)),
        },
        ..DecideConfig::default()
    };
    let d = py.detach(|| decide_formula(&phi, &config));
    Ok(decision_json(&d, &config, Emit::Both).to_string())
}

/// True if the JSON certificate derives exactly the given formula.
#[pyfunction]
fn check(certificate: &str, text: &str) -> PyResult<bool> {
    let phi = formula(text)?;
    let value: serde_json::Value =
        serde_json::from_str(certificate).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let d = CombDerivation::from_json(&value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(check_derivation(&d).is_ok_and(|ty| ty == phi))
}

/// Closed normal inhabitants up to a node bound, smallest first.
#[pyfunction]
#[pyo3(signature = (text, max_nodes = 9))]
fn inhabitants(py: Python<'_>, text: &str, max_nodes: usize) -> PyResult<Vec<String>> {
    let phi = formula(text)?;
    let terms = py.detach(|| enumerate_inhabitants(&phi, &SearchBound::nodes(max_nodes)));
    Ok(terms.iter().map(|t| t.to_string()).collect())
}

#[pymodule]
fn ticket_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(parse, m)?)?;
    m.add_function(wrap_pyfunction!(decide, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(inhabitants, m)?)?;
    Ok(())
}
