//! Python bindings: problems (including objectives written in Python),
//! algorithms, topologies, islands, archipelagos and the multistart strategies.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use isle::archipelago::IslandSnapshot;
use isle::migration::{MigrationParams, ReplacementPolicy};
use isle::problem::Objective;
use isle::rng::{mix_seed, Rng};
use isle::strategy::{self, PruningParams};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

create_exception!(_isle, IsleError, PyException, "Base class of the optimizer's errors.");
create_exception!(_isle, ObjectiveError, IsleError, "An objective failed or returned a non-finite value.");
create_exception!(_isle, ParameterError, IsleError, "Invalid parameter, bounds, dimension or configuration.");

fn err(e: isle::Error) -> PyErr {
    use isle::Error as E;
    let msg = e.to_string();
    match e {
        E::NonFinite { .. } | E::Objective { .. } => ObjectiveError::new_err(msg),
        E::Evolving | E::NoIslands | E::IslandPanicked(_) | E::EmptyArchive | E::EmptyPopulation => {
            IsleError::new_err(msg)
        }
        E::Io(_) => PyOSError::new_err(msg),
        _ => ParameterError::new_err(msg),
    }
}

fn json_err(e: impl std::fmt::Display) -> PyErr {
    ParameterError::new_err(e.to_string())
}

/// Turns a tag and keyword arguments into the core's tagged JSON form.
/// Algorithm values (for `inner`) are embedded as their own JSON.
fn tagged(py: Python<'_>, name: &str, kwargs: Option<&Bound<'_, PyDict>>) -> PyResult<serde_json::Value> {
    let mut map = serde_json::Map::new();
    map.insert("name".into(), name.into());
    if let Some(kwargs) = kwargs {
        let dumps = py.import("json")?.getattr("dumps")?;
        for (k, v) in kwargs.iter() {
            let key: String = k.extract()?;
            let value = if let Ok(alg) = v.cast::<PyAlgorithm>() {
                serde_json::to_value(&alg.borrow().inner).map_err(json_err)?
            } else {
                let text: String = dumps.call1((v,))?.extract()?;
                serde_json::from_str(&text).map_err(json_err)?
            };
            map.insert(key, value);
        }
    }
    Ok(serde_json::Value::Object(map))
}

fn from_tagged<T: serde::de::DeserializeOwned>(value: serde_json::Value) -> PyResult<T> {
    serde_path_to_error::deserialize(value).map_err(json_err)
}

// ---------------------------------------------------------------- problems

/// A Python callable as an objective. Calls go through a per-problem lock
/// unless the callable is declared safe for concurrent use.
struct Scripted {
    callable: Py<PyAny>,
    gate: Option<Py<PyAny>>,
}

impl Objective for Scripted {
    fn value(&self, x: &[f64]) -> Result<f64, String> {
        Python::attach(|py| {
            let call = || -> PyResult<f64> {
                let arg = PyList::new(py, x)?;
                self.callable.bind(py).call1((arg,))?.extract()
            };
            let result = match &self.gate {
                // acquiring a threading lock releases the interpreter lock while waiting
                Some(gate) => {
                    let gate = gate.bind(py);
                    gate.call_method0("acquire").map_err(|e| e.to_string())?;
                    let r = call();
                    gate.call_method0("release").map_err(|e| e.to_string())?;
                    r
                }
                None => call(),
            };
            result.map_err(|e| e.to_string())
        })
    }
}

/// Box-constrained minimization problem. Built from a Python callable
/// `objective(x: list[float]) -> float`, or by the benchmark constructors.
#[pyclass(name = "Problem", module = "isle._isle", skip_from_py_object, frozen)]
#[derive(Clone)]
struct PyProblem {
    inner: isle::Problem,
}

#[pymethods]
impl PyProblem {
    #[new]
    #[pyo3(signature = (objective, lower, upper, integer_dim=0, name="scripted", concurrency_safe=false))]
    fn new(
        py: Python<'_>,
        objective: Py<PyAny>,
        lower: Vec<f64>,
        upper: Vec<f64>,
        integer_dim: usize,
        name: &str,
        concurrency_safe: bool,
    ) -> PyResult<Self> {
        if !objective.bind(py).is_callable() {
            return Err(ParameterError::new_err("objective must be callable"));
        }
        let gate = if concurrency_safe {
            None
        } else {
            Some(py.import("threading")?.getattr("RLock")?.call0()?.unbind())
        };
        let bounds = isle::Bounds::new(lower, upper).map_err(err)?;
        let inner = isle::Problem::new(name, bounds, integer_dim, Arc::new(Scripted { callable: objective, gate }))
            .map_err(err)?;
        Ok(PyProblem { inner })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name().to_string()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn integer_dim(&self) -> usize {
        self.inner.integer_dim()
    }

    #[getter]
    fn lower(&self) -> Vec<f64> {
        self.inner.bounds().lower().to_vec()
    }

    #[getter]
    fn upper(&self) -> Vec<f64> {
        self.inner.bounds().upper().to_vec()
    }

    /// Evaluations counted so far through this handle.
    #[getter]
    fn evaluations(&self) -> u64 {
        self.inner.evaluations()
    }

    /// Validates `x` and returns its objective value.
    fn evaluate(&self, py: Python<'_>, x: Vec<f64>) -> PyResult<f64> {
        let p = self.inner.clone();
        py.detach(move || p.evaluate(&x)).map_err(err)
    }

    fn __call__(&self, py: Python<'_>, x: Vec<f64>) -> PyResult<f64> {
        self.evaluate(py, x)
    }

    fn __repr__(&self) -> String {
        format!("Problem(name={:?}, dim={}, integer_dim={})", self.inner.name(), self.inner.dim(), self.inner.integer_dim())
    }
}

/// Builds a benchmark problem by name, e.g. `problem("rastrigin", dim=5)`.
#[pyfunction]
#[pyo3(signature = (name, **kwargs))]
fn problem(py: Python<'_>, name: &str, kwargs: Option<&Bound<'_, PyDict>>) -> PyResult<PyProblem> {
    let spec: isle::problems::ProblemSpec = from_tagged(tagged(py, name, kwargs)?)?;
    Ok(PyProblem { inner: spec.build(None).map_err(err)? })
}

// ---------------------------------------------------------------- individuals and populations

/// A decision vector with its objective value.
#[pyclass(name = "Individual", module = "isle._isle", skip_from_py_object, frozen)]
#[derive(Clone)]
struct PyIndividual {
    inner: isle::Individual,
}

#[pymethods]
impl PyIndividual {
    #[getter]
    fn x(&self) -> Vec<f64> {
        self.inner.x().to_vec()
    }

    #[getter]
    fn f(&self) -> f64 {
        self.inner.f()
    }

    fn __repr__(&self) -> String {
        format!("Individual(f={}, x={:?})", self.inner.f(), self.inner.x())
    }
}

fn individual(inner: isle::Individual) -> PyIndividual {
    PyIndividual { inner }
}

#[pyclass(name = "Population", module = "isle._isle", skip_from_py_object)]
#[derive(Clone)]
struct PyPopulation {
    inner: isle::Population,
}

#[pymethods]
impl PyPopulation {
    /// `size` points drawn uniformly from the problem's box.
    #[new]
    #[pyo3(signature = (problem, size, seed=0))]
    fn new(py: Python<'_>, problem: &PyProblem, size: usize, seed: u64) -> PyResult<Self> {
        let p = problem.inner.clone();
        let inner = py.detach(move || isle::Population::random(&p, size, seed)).map_err(err)?;
        Ok(PyPopulation { inner })
    }

    /// A population holding exactly the given decision vectors.
    #[staticmethod]
    fn from_vectors(py: Python<'_>, problem: &PyProblem, xs: Vec<Vec<f64>>) -> PyResult<Self> {
        let p = problem.inner.clone();
        let inner = py.detach(move || isle::Population::from_vectors(&p, xs)).map_err(err)?;
        Ok(PyPopulation { inner })
    }

    fn champion(&self) -> PyResult<PyIndividual> {
        self.inner.champion().map(|c| individual(c.clone())).map_err(err)
    }

    fn fitnesses(&self) -> Vec<f64> {
        self.inner.fitnesses()
    }

    fn individuals(&self) -> Vec<PyIndividual> {
        self.inner.individuals().iter().cloned().map(individual).collect()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Population(problem={:?}, size={})", self.inner.problem().name(), self.inner.len())
    }
}

// ---------------------------------------------------------------- algorithms

/// An optimizer with its parameters.
#[pyclass(name = "Algorithm", module = "isle._isle", skip_from_py_object, frozen)]
#[derive(Clone)]
struct PyAlgorithm {
    inner: isle::Algorithm,
}

#[pymethods]
impl PyAlgorithm {
    #[getter]
    fn name(&self) -> &'static str {
        self.inner.name()
    }

    /// Smallest population the algorithm accepts.
    #[getter]
    fn min_population(&self) -> usize {
        self.inner.min_population()
    }

    /// One call on `population`, in place, with the generator seeded by `seed`.
    #[pyo3(signature = (population, seed=0))]
    fn evolve(&self, py: Python<'_>, population: &mut PyPopulation, seed: u64) -> PyResult<()> {
        let alg = self.inner.clone();
        let mut pop = population.inner.clone();
        let pop = py
            .detach(move || {
                let mut rng = Rng::stream(seed, isle::archipelago::ALGORITHM_STREAM);
                alg.evolve(&mut pop, &mut rng).map(|_| pop)
            })
            .map_err(err)?;
        population.inner = pop;
        Ok(())
    }

    /// The parameters as JSON, in the configuration-file format.
    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(json_err)
    }

    fn __repr__(&self) -> String {
        format!("Algorithm({})", serde_json::to_string(&self.inner).unwrap_or_default())
    }
}

/// Builds an algorithm by name, e.g. `algorithm("de", generations=500)`.
#[pyfunction]
#[pyo3(signature = (name, **kwargs))]
fn algorithm(py: Python<'_>, name: &str, kwargs: Option<&Bound<'_, PyDict>>) -> PyResult<PyAlgorithm> {
    let inner: isle::Algorithm = from_tagged(tagged(py, name, kwargs)?)?;
    inner.validate().map_err(err)?;
    Ok(PyAlgorithm { inner })
}

// ---------------------------------------------------------------- topologies

/// A topology recipe, materialized once the island count is known.
#[pyclass(name = "Topology", module = "isle._isle", skip_from_py_object, frozen)]
#[derive(Clone)]
struct PyTopology {
    inner: isle::TopologySpec,
}

#[pymethods]
impl PyTopology {
    #[getter]
    fn name(&self) -> &'static str {
        self.inner.name()
    }

    /// Directed edges `(src, dst)` of the topology over `n` islands.
    fn edges(&self, n: usize) -> PyResult<Vec<(usize, usize)>> {
        Ok(self.inner.build(n).map_err(err)?.edges().collect())
    }

    fn __repr__(&self) -> String {
        format!("Topology({})", serde_json::to_string(&self.inner).unwrap_or_default())
    }
}

/// Builds a topology by name, e.g. `topology("watts_strogatz", k=2, beta=0.1)`.
#[pyfunction]
#[pyo3(signature = (name, **kwargs))]
fn topology(py: Python<'_>, name: &str, kwargs: Option<&Bound<'_, PyDict>>) -> PyResult<PyTopology> {
    Ok(PyTopology { inner: from_tagged(tagged(py, name, kwargs)?)? })
}

// ---------------------------------------------------------------- islands

fn replacement_policy(name: &str) -> PyResult<ReplacementPolicy> {
    from_tagged(serde_json::Value::String(name.into()))
}

static NEXT_SEED: AtomicU64 = AtomicU64::new(0);

/// Islands built without a seed get distinct ones, reproducible per process.
fn default_seed() -> u64 {
    mix_seed(0x15_1e, NEXT_SEED.fetch_add(1, Ordering::Relaxed))
}

/// One population, one algorithm and its migration settings.
#[pyclass(name = "Island", module = "isle._isle", skip_from_py_object)]
#[derive(Clone)]
struct PyIsland {
    inner: isle::Island,
}

#[pymethods]
impl PyIsland {
    #[new]
    #[pyo3(signature = (problem, algorithm, size, acceptance_probability=1.0, replacement="conditional_worst", seed=None, rate=1, frequency=1))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        py: Python<'_>,
        problem: &PyProblem,
        algorithm: &PyAlgorithm,
        size: usize,
        acceptance_probability: f64,
        replacement: &str,
        seed: Option<u64>,
        rate: usize,
        frequency: usize,
    ) -> PyResult<Self> {
        let replacement = replacement_policy(replacement)?;
        let migration = MigrationParams {
            rate,
            frequency,
            acceptance_probability,
        };
        let (p, alg) = (problem.inner.clone(), algorithm.inner.clone());
        let seed = seed.unwrap_or_else(default_seed);
        let inner = py
            .detach(move || {
                Ok::<_, isle::Error>(isle::Island::new(&p, alg, size, seed)?
                    .with_migration(migration)?
                    .with_replacement(replacement))
            })
            .map_err(err)?;
        Ok(PyIsland { inner })
    }

    /// Runs `iterations` algorithm calls, blocking.
    #[pyo3(signature = (iterations=1))]
    fn evolve(&mut self, py: Python<'_>, iterations: u64) -> PyResult<()> {
        let mut island = self.inner.clone();
        let island = py
            .detach(move || {
                for _ in 0..iterations {
                    island.evolve_once()?;
                }
                Ok(island)
            })
            .map_err(err)?;
        self.inner = island;
        Ok(())
    }

    fn champion(&self) -> PyResult<PyIndividual> {
        self.inner.champion().map(|c| individual(c.clone())).map_err(err)
    }

    #[getter]
    fn population(&self) -> PyPopulation {
        PyPopulation { inner: self.inner.population().clone() }
    }

    #[getter]
    fn algorithm(&self) -> PyAlgorithm {
        PyAlgorithm { inner: self.inner.algorithm().clone() }
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.inner.seed()
    }

    #[getter]
    fn iterations(&self) -> u64 {
        self.inner.iterations()
    }

    #[getter]
    fn evaluations(&self) -> u64 {
        self.inner.evaluations()
    }

    #[getter]
    fn acceptance_probability(&self) -> f64 {
        self.inner.migration().acceptance_probability
    }

    #[getter]
    fn replacement(&self) -> PyResult<String> {
        Ok(serde_json::to_value(self.inner.replacement())
            .map_err(json_err)?
            .as_str()
            .unwrap_or_default()
            .to_string())
    }

    fn __len__(&self) -> usize {
        self.inner.population().len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Island(algorithm={}, size={}, seed={})",
            self.inner.algorithm().name(),
            self.inner.population().len(),
            self.inner.seed()
        )
    }
}

// ---------------------------------------------------------------- archipelagos

fn snapshot_dict<'py>(py: Python<'py>, s: &IslandSnapshot) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("island", s.island)?;
    d.set_item("champion_f", s.champion_f)?;
    d.set_item("evaluations", s.evaluations)?;
    d.set_item("iterations", s.iterations)?;
    Ok(d)
}

/// Islands connected by a topology. `evolve` returns at once; `join` waits.
#[pyclass(name = "Archipelago", module = "isle._isle")]
struct PyArchipelago {
    inner: Option<isle::Archipelago>,
}

impl PyArchipelago {
    fn get(&self) -> &isle::Archipelago {
        self.inner.as_ref().expect("archipelago present until drop")
    }

    fn get_mut(&mut self) -> &mut isle::Archipelago {
        self.inner.as_mut().expect("archipelago present until drop")
    }
}

impl Drop for PyArchipelago {
    // island threads may need the interpreter, so wait for them without holding it
    fn drop(&mut self) {
        if let Some(a) = self.inner.take() {
            Python::attach(|py| py.detach(move || drop(a)));
        }
    }
}

#[pymethods]
impl PyArchipelago {
    #[new]
    #[pyo3(signature = (topology=None, lockstep=false, max_concurrency=None))]
    fn new(topology: Option<&PyTopology>, lockstep: bool, max_concurrency: Option<usize>) -> PyResult<Self> {
        let spec = topology.map_or(isle::TopologySpec::Unconnected, |t| t.inner.clone());
        let inner = isle::Archipelago::new(spec)
            .with_lockstep(lockstep)
            .with_max_concurrency(max_concurrency)
            .map_err(err)?;
        Ok(PyArchipelago { inner: Some(inner) })
    }

    /// Builds an archipelago from a JSON blueprint (the `topology`, `islands`,
    /// `lockstep` part of a configuration file); island `i` gets `mix_seed(seed, i)`.
    #[staticmethod]
    #[pyo3(signature = (spec, problem, seed=0))]
    fn from_json(py: Python<'_>, spec: &str, problem: &PyProblem, seed: u64) -> PyResult<Self> {
        let spec = parse_spec(spec)?;
        let p = problem.inner.clone();
        let inner = py.detach(move || spec.build(&p, seed)).map_err(err)?;
        Ok(PyArchipelago { inner: Some(inner) })
    }

    /// Appends a copy of `island`, returning its index.
    fn push_back(&mut self, island: &PyIsland) -> PyResult<usize> {
        self.get_mut().push_back(island.inner.clone()).map_err(err)
    }

    /// Starts `iterations` cycles on every island in the background.
    #[pyo3(signature = (iterations=1))]
    fn evolve(&mut self, iterations: u64) -> PyResult<()> {
        self.get_mut().evolve(iterations).map_err(err)
    }

    /// Waits for the background cycles to finish.
    fn join(&mut self, py: Python<'_>) -> PyResult<()> {
        let a = self.get_mut();
        py.detach(|| a.join()).map_err(err)
    }

    fn is_evolving(&self) -> bool {
        self.get().is_evolving()
    }

    /// The best champion over all islands.
    fn best(&self) -> PyResult<PyIndividual> {
        self.get().best().map(individual).map_err(err)
    }

    /// `(island index, champion)` of the best island.
    fn best_with_island(&self) -> PyResult<(usize, PyIndividual)> {
        self.get().best_with_island().map(|(i, c)| (i, individual(c))).map_err(err)
    }

    /// A copy of island `index`.
    fn island(&self, index: usize) -> PyResult<PyIsland> {
        Ok(PyIsland { inner: self.get().island(index).map_err(err)?.clone() })
    }

    /// Re-draws every population from `mix_seed(seed, i)` and clears the mailboxes.
    fn reset(&mut self, seed: u64) -> PyResult<()> {
        self.get_mut().reset(seed).map_err(err)
    }

    /// Per-island progress; safe to call while evolving.
    fn snapshot<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyDict>>> {
        self.get().snapshot().iter().map(|s| snapshot_dict(py, s)).collect()
    }

    fn pending_migrants(&self, index: usize) -> usize {
        self.get().pending_migrants(index)
    }

    #[getter]
    fn evaluations(&self) -> u64 {
        self.get().evaluations()
    }

    #[getter]
    fn topology(&self) -> PyTopology {
        PyTopology { inner: self.get().topology_spec().clone() }
    }

    /// Number of migration events of each kind logged so far.
    fn migration_counts<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        for r in self.get().migration_log() {
            let kind = serde_json::to_value(r.kind).map_err(json_err)?;
            let key = kind.as_str().unwrap_or("unknown").to_string();
            let n: usize = d.get_item(&key)?.map_or(Ok(0), |v| v.extract())?;
            d.set_item(key, n + 1)?;
        }
        Ok(d)
    }

    fn __len__(&self) -> usize {
        self.get().len()
    }

    fn __repr__(&self) -> String {
        let a = self.get();
        format!("Archipelago(topology={}, islands={})", a.topology_spec().name(), a.len())
    }
}

fn parse_spec(text: &str) -> PyResult<isle::ArchipelagoSpec> {
    let mut de = serde_json::Deserializer::from_str(text);
    let spec: isle::ArchipelagoSpec = serde_path_to_error::deserialize(&mut de).map_err(json_err)?;
    spec.validate().map_err(err)?;
    Ok(spec)
}

// ---------------------------------------------------------------- strategies

/// Champions collected from repeated runs.
#[pyclass(name = "ChampionArchive", module = "isle._isle", frozen)]
struct PyArchive {
    inner: strategy::ChampionArchive,
}

#[pymethods]
impl PyArchive {
    fn fitnesses(&self) -> Vec<f64> {
        self.inner.fitnesses()
    }

    fn best(&self) -> PyResult<PyIndividual> {
        self.inner.best_individual().map(individual).ok_or_else(|| err(isle::Error::EmptyArchive))
    }

    /// `(run, f, x)` per entry.
    fn entries(&self) -> Vec<(usize, f64, Vec<f64>)> {
        self.inner.entries().iter().map(|e| (e.run, e.f, e.x.clone())).collect()
    }

    fn to_tsv(&self) -> String {
        self.inner.to_tsv()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }
}

/// Runs `runs` independent campaigns: reset with `run_seed(seed, k)`,
/// evolve `iterations`, join, archive the best champion.
#[pyfunction]
fn multistart_campaign(
    py: Python<'_>,
    archipelago: &mut PyArchipelago,
    runs: usize,
    iterations: u64,
    seed: u64,
) -> PyResult<PyArchive> {
    let a = archipelago.get_mut();
    let inner = py
        .detach(|| strategy::multistart_campaign(a, runs, iterations, seed))
        .map_err(err)?;
    Ok(PyArchive { inner })
}

/// Result of `pruning_cycles`.
#[pyclass(name = "PruningOutcome", module = "isle._isle", frozen, get_all)]
struct PyPruningOutcome {
    best: PyIndividual,
    /// `(lower, upper)` after each cycle, outermost first.
    bounds: Vec<(Vec<f64>, Vec<f64>)>,
    evaluations: u64,
    archive_sizes: Vec<usize>,
}

/// Alternates multistart campaigns of the archipelago blueprint `spec`
/// (JSON) with cluster pruning of the search box.
#[pyfunction]
#[pyo3(signature = (problem, spec, cycles, runs_per_cycle, iterations, seed=0, keep_fraction=None, padding=None))]
#[allow(clippy::too_many_arguments)]
fn pruning_cycles(
    py: Python<'_>,
    problem: &PyProblem,
    spec: &str,
    cycles: usize,
    runs_per_cycle: usize,
    iterations: u64,
    seed: u64,
    keep_fraction: Option<f64>,
    padding: Option<f64>,
) -> PyResult<PyPruningOutcome> {
    let spec = parse_spec(spec)?;
    let mut params = PruningParams::new(cycles, runs_per_cycle, iterations);
    if let Some(k) = keep_fraction {
        params.keep_fraction = k;
    }
    if let Some(p) = padding {
        params.padding = p;
    }
    let p = problem.inner.clone();
    let out = py
        .detach(move || strategy::pruning_cycles(&p, &spec, &params, seed))
        .map_err(err)?;
    Ok(PyPruningOutcome {
        best: individual(out.best),
        bounds: out.bounds.iter().map(|b| (b.lower().to_vec(), b.upper().to_vec())).collect(),
        evaluations: out.evaluations,
        archive_sizes: out.archives.iter().map(|a| a.len()).collect(),
    })
}

/// Registered names of `kind` ("problems", "algorithms" or "topologies")
/// with their parameter signatures.
#[pyfunction]
fn registry(kind: &str) -> PyResult<Vec<(&'static str, &'static str)>> {
    match kind {
        "problems" => Ok(isle::problems::REGISTRY.to_vec()),
        "algorithms" => Ok(isle::algorithms::REGISTRY.to_vec()),
        "topologies" => Ok(isle::topology::REGISTRY.to_vec()),
        _ => Err(PyValueError::new_err(format!("unknown registry `{kind}`"))),
    }
}

#[pyfunction]
fn seed_for(master: u64, index: u64) -> u64 {
    mix_seed(master, index)
}

#[pymodule]
fn _isle(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("IsleError", py.get_type::<IsleError>())?;
    m.add("ObjectiveError", py.get_type::<ObjectiveError>())?;
    m.add("ParameterError", py.get_type::<ParameterError>())?;
    m.add_class::<PyProblem>()?;
    m.add_class::<PyIndividual>()?;
    m.add_class::<PyPopulation>()?;
    m.add_class::<PyAlgorithm>()?;
    m.add_class::<PyTopology>()?;
    m.add_class::<PyIsland>()?;
    m.add_class::<PyArchipelago>()?;
    m.add_class::<PyArchive>()?;
    m.add_class::<PyPruningOutcome>()?;
    m.add_function(wrap_pyfunction!(problem, m)?)?;
    m.add_function(wrap_pyfunction!(algorithm, m)?)?;
    m.add_function(wrap_pyfunction!(topology, m)?)?;
    m.add_function(wrap_pyfunction!(multistart_campaign, m)?)?;
    m.add_function(wrap_pyfunction!(pruning_cycles, m)?)?;
    m.add_function(wrap_pyfunction!(registry, m)?)?;
    m.add_function(wrap_pyfunction!(seed_for, m)?)?;
    Ok(())
}
