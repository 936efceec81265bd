//! Python bindings.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use planarflow::engine::{msms_max_flow, Config};
use planarflow::generate::{generate as generate_instance, GenParams, Kind};
use planarflow::instance::{parse_instance, serialize_instance, Instance as CoreInstance};
use planarflow::planar::{Capacity, DartGraph};
use planarflow::solvers::{oracle_for_graph, BackendKind};

/// A planar flow instance: embedded graph plus sources and sinks.
#[pyclass(name = "Instance", module = "planarflow_py")]
struct PyInstance {
    inner: CoreInstance,
}

#[pymethods]
impl PyInstance {
    #[getter]
    fn node_count(&self) -> usize {
        self.inner.graph.node_count()
    }

    #[getter]
    fn arc_count(&self) -> usize {
        self.inner.graph.arc_count()
    }

    #[getter]
    fn face_count(&self) -> usize {
        self.inner.graph.face_count()
    }

    #[getter]
    fn sources(&self) -> Vec<usize> {
        self.inner.terminals.sources().to_vec()
    }

    #[getter]
    fn sinks(&self) -> Vec<usize> {
        self.inner.terminals.sinks().to_vec()
    }

    /// Arcs as `(tail, head, capacity)` with 0-based nodes.
    fn arcs(&self) -> Vec<(usize, usize, Capacity)> {
        self.inner.graph.arcs().iter().map(|a| (a.tail, a.head, a.capacity)).collect()
    }

    /// Canonical text form, readable by `parse`.
    fn serialize(&self) -> String {
        serialize_instance(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!(
            "Instance(nodes={}, arcs={}, sources={}, sinks={})",
            self.node_count(),
            self.arc_count(),
            self.inner.terminals.sources().len(),
            self.inner.terminals.sinks().len()
        )
    }
}

/// Result of a solve.
#[pyclass(name = "FlowResult", module = "planarflow_py", get_all)]
struct PyFlowResult {
    value: Capacity,
    flow: Vec<Capacity>,
    depth: usize,
    levels: usize,
    audit_failures: Vec<String>,
}

#[pymethods]
impl PyFlowResult {
    fn __repr__(&self) -> String {
        format!("FlowResult(value={}, depth={}, audit_failures={})", self.value, self.depth, self.audit_failures.len())
    }
}

#[pyfunction]
fn parse(text: &str) -> PyResult<PyInstance> {
    parse_instance(text).map(|inner| PyInstance { inner }).map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pyfunction]
#[pyo3(signature = (kind, n, seed=0, cap_max=1_000_000, source_fraction=0.05, sink_fraction=0.05))]
fn generate(kind: &str, n: usize, seed: u64, cap_max: Capacity, source_fraction: f64, sink_fraction: f64) -> PyResult<PyInstance> {
    let kind: Kind = kind.parse().map_err(PyValueError::new_err)?;
    if n < 2 || cap_max < 1 {
        return Err(PyValueError::new_err("need n >= 2 and cap_max >= 1"));
    }
    let params = GenParams { kind, n, seed, cap_max, source_fraction, sink_fraction };
    Ok(PyInstance { inner: generate_instance(&params) })
}

#[pyfunction]
#[pyo3(signature = (instance, backend="dinic", base_case=None, audit=false))]
fn solve(instance: &PyInstance, backend: &str, base_case: Option<usize>, audit: bool) -> PyResult<PyFlowResult> {
    let backend = BackendKind::by_name(backend).ok_or_else(|| PyValueError::new_err(format!("unknown backend {backend:?}")))?;
    let defaults = Config::default();
    let config = Config { backend, base_case: base_case.unwrap_or(defaults.base_case), audit, ..defaults };
    let g = &instance.inner.graph;
    let run = msms_max_flow(g, &instance.inner.terminals, &config).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(PyFlowResult {
        value: run.value,
        flow: run.flow.arc_values()[..g.arc_count()].to_vec(),
        depth: run.depth(),
        levels: run.levels.len(),
        audit_failures: run.failures.iter().map(|f| format!("{} item {} level {}: {}", f.check.name(), f.item, f.level, f.detail)).collect(),
    })
}

/// Reference max-flow value computed independently of the recursive solver.
#[pyfunction]
fn oracle(instance: &PyInstance) -> Capacity {
    let inst = &instance.inner;
    oracle_for_graph(&inst.graph, inst.terminals.sources(), inst.terminals.sinks()).0.value
}

#[pymodule]
pub fn planarflow_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyInstance>()?;
    m.add_class::<PyFlowResult>()?;
    m.add_function(wrap_pyfunction!(parse, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(oracle, m)?)?;
    Ok(())
}
