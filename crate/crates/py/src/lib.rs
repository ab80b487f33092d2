//! Python bindings: plan and run searches, query communication figures and
//! run the verification suites.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use distgrover::distsim::{bind_ledger, comparison_table, iteration_cost, node_qubit_counts};
use distgrover::verify::{Scope, SuiteOptions};
use distgrover::{algorithms, BooleanOracle, PartitionConfig, Variant};

create_exception!(distgrover_py, SearchError, PyException);

fn err(e: distgrover::Error) -> PyErr {
    SearchError::new_err(format!("[{}] {e}", e.kind()))
}

fn variant(name: &str) -> PyResult<Variant> {
    name.parse().map_err(err)
}

fn partition(n: usize, t: Option<usize>) -> PyResult<Option<PartitionConfig>> {
    t.map(|t| PartitionConfig::new(n, t)).transpose().map_err(err)
}

/// Iteration count, `theta` and (exact variants) `phi` and `K`.
#[pyfunction]
fn plan<'py>(py: Python<'py>, variant_name: &str, n: usize, a: usize) -> PyResult<Bound<'py, PyDict>> {
    let p = algorithms::make_plan(variant(variant_name)?, n, a).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("variant", p.variant.as_str())?;
    d.set_item("theta", p.theta)?;
    d.set_item("iterations", p.iterations)?;
    d.set_item("phi", p.phi)?;
    d.set_item("k", p.k())?;
    Ok(d)
}

/// Runs one search over the oracle whose solutions are the given bit strings.
#[pyfunction]
#[pyo3(signature = (variant_name, n, solutions, t=None))]
fn run<'py>(
    py: Python<'py>,
    variant_name: &str,
    n: usize,
    solutions: Vec<String>,
    t: Option<usize>,
) -> PyResult<Bound<'py, PyDict>> {
    let v = variant(variant_name)?;
    let oracle = BooleanOracle::from_strings(n, &solutions).map_err(err)?;
    let cfg = partition(n, t)?;
    let mut result = algorithms::run_search(v, &oracle, cfg.as_ref()).map_err(err)?;
    if let Some(cfg) = &cfg {
        result = bind_ledger(result, cfg).map_err(err)?;
    }
    let d = PyDict::new(py);
    d.set_item("variant", v.as_str())?;
    d.set_item("iterations", result.plan.iterations)?;
    d.set_item("phi", result.plan.phi)?;
    d.set_item("success_probability", result.success_probability)?;
    d.set_item("distribution", result.distribution)?;
    d.set_item("trace", result.trace)?;
    d.set_item("communication", result.ledger.map(|l| l.run_total))?;
    Ok(d)
}

/// Qubit transfers of one distributed iteration.
#[pyfunction]
fn communication_per_iteration(n: usize, t: usize) -> PyResult<u64> {
    PartitionConfig::new(n, t).map_err(err)?;
    Ok(iteration_cost(n, t))
}

/// Size of the largest computing node.
#[pyfunction]
fn max_node_qubits(n: usize, t: usize) -> PyResult<usize> {
    let cfg = PartitionConfig::new(n, t).map_err(err)?;
    Ok(node_qubit_counts(&cfg).max)
}

/// `(algorithm, qubits, success, communication)` rows.
#[pyfunction]
#[pyo3(signature = (n, t, a=1))]
fn compare(n: usize, t: usize, a: usize) -> PyResult<Vec<(String, usize, String, u64)>> {
    let cfg = PartitionConfig::new(n, t).map_err(err)?;
    Ok(comparison_table(&cfg, a)
        .map_err(err)?
        .into_iter()
        .map(|r| (r.algorithm.to_string(), r.qubits, r.success.to_string(), r.communication))
        .collect())
}

/// Runs a verification suite; returns `(all_passed, passed, failed)`.
#[pyfunction]
#[pyo3(signature = (scope="all", max_n=5, points=100, seed=7))]
fn verify(scope: &str, max_n: usize, points: usize, seed: u64) -> PyResult<(bool, usize, usize)> {
    let scope: Scope = scope.parse().map_err(err)?;
    let opts = SuiteOptions { max_n, points, seed, ..SuiteOptions::default() };
    let report = scope.run(&opts).map_err(err)?;
    Ok((report.all_passed, report.passed, report.failed))
}

#[pymodule]
fn distgrover_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("SearchError", m.py().get_type::<SearchError>())?;
    m.add_function(wrap_pyfunction!(plan, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(communication_per_iteration, m)?)?;
    m.add_function(wrap_pyfunction!(max_node_qubits, m)?)?;
    m.add_function(wrap_pyfunction!(compare, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
