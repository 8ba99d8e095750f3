//! Python bindings for `entropic-core`.

use std::fmt::Display;

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use entropic_core::dataio::{self, DataError, Dataset, SyntheticSpec};
use entropic_core::entropy::{self, DiscreteDistribution, EntropyOrder, LogBase};
use entropic_core::explorer::{self, Bounds, ExploreConfig, Surface, SurfaceId};
use entropic_core::learning::{self, LearnerState};
use entropic_core::selforg::{self, EntropyObjectiveConfig, GaConfig, Partition};

fn value_err(e: impl Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn data_err(e: DataError) -> PyErr {
    match e {
        DataError::Io(io) => PyIOError::new_err(io.to_string()),
        other => value_err(other),
    }
}

fn distribution(probs: Vec<f64>) -> PyResult<DiscreteDistribution> {
    DiscreteDistribution::new(probs).map_err(value_err)
}

fn log_base(base: &str) -> PyResult<LogBase> {
    base.parse().map_err(value_err)
}

fn order(alpha: &str) -> PyResult<EntropyOrder> {
    alpha.parse().map_err(value_err)
}

fn surface_id(surface: &str) -> PyResult<SurfaceId> {
    surface.parse().map_err(value_err)
}

/// Shannon entropy of `probs`. `base` is "2", "e" or "10".
#[pyfunction]
#[pyo3(signature = (probs, base="2"))]
fn shannon_entropy(probs: Vec<f64>, base: &str) -> PyResult<f64> {
    Ok(entropy::shannon_entropy(
        &distribution(probs)?,
        log_base(base)?,
    ))
}

/// Rényi entropy of order `alpha` (alpha >= 0, alpha != 1).
#[pyfunction]
#[pyo3(signature = (probs, alpha, base="2"))]
fn renyi_entropy(probs: Vec<f64>, alpha: f64, base: &str) -> PyResult<f64> {
    entropy::renyi_entropy(&distribution(probs)?, alpha, log_base(base)?).map_err(value_err)
}

/// Boltzmann constant times the natural-log Shannon entropy, in J/K.
#[pyfunction]
fn thermodynamic_entropy(probs: Vec<f64>) -> PyResult<f64> {
    Ok(entropy::thermodynamic_entropy(&distribution(probs)?))
}

#[pyfunction]
#[pyo3(signature = (p, base="2"))]
fn info_content(p: f64, base: &str) -> PyResult<f64> {
    entropy::info_content(p, log_base(base)?).map_err(value_err)
}

/// Mean Shannon entropy over a list of distributions.
#[pyfunction]
#[pyo3(signature = (rows, base="2"))]
fn normalized_entropy(rows: Vec<Vec<f64>>, base: &str) -> PyResult<f64> {
    let ds = rows
        .into_iter()
        .map(distribution)
        .collect::<PyResult<Vec<_>>>()?;
    entropy::normalized_entropy(&ds, log_base(base)?).map_err(value_err)
}

#[pyclass(name = "Dataset", module = "entropic", frozen)]
pub struct PyDataset {
    inner: Dataset,
}

#[pymethods]
impl PyDataset {
    #[new]
    #[pyo3(signature = (rows, labels=None))]
    fn new(rows: Vec<Vec<f64>>, labels: Option<Vec<usize>>) -> PyResult<Self> {
        Ok(Self {
            inner: Dataset::new(rows, labels).map_err(data_err)?,
        })
    }

    #[staticmethod]
    #[pyo3(signature = (path, has_header=false, label_column=None))]
    fn load_csv(path: &str, has_header: bool, label_column: Option<usize>) -> PyResult<Self> {
        Ok(Self {
            inner: dataio::load_csv(path, has_header, label_column).map_err(data_err)?,
        })
    }

    /// Three Gaussian clusters of 100 rows, plus optional uniform noise columns.
    #[staticmethod]
    #[pyo3(signature = (noise_dims=0, seed=0))]
    fn default300(noise_dims: usize, seed: u64) -> PyResult<Self> {
        let spec = SyntheticSpec::default300(noise_dims, seed);
        Ok(Self {
            inner: dataio::generate_synthetic(&spec).map_err(data_err)?,
        })
    }

    /// Dataset described by a synthetic-spec JSON document.
    #[staticmethod]
    fn from_spec_json(text: &str) -> PyResult<Self> {
        let spec = SyntheticSpec::from_json(text).map_err(data_err)?;
        Ok(Self {
            inner: dataio::generate_synthetic(&spec).map_err(data_err)?,
        })
    }

    fn save_csv(&self, path: &str) -> PyResult<()> {
        dataio::save_csv(&self.inner, path).map_err(|e| PyIOError::new_err(e.to_string()))
    }

    #[getter]
    fn rows(&self) -> Vec<Vec<f64>> {
        self.inner.rows().to_vec()
    }

    #[getter]
    fn labels(&self) -> Option<Vec<usize>> {
        self.inner.labels().map(<[usize]>::to_vec)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Dataset(rows={}, dim={}, labelled={})",
            self.inner.len(),
            self.inner.dim(),
            self.inner.labels().is_some()
        )
    }
}

/// Table learner trained by gradient descent with an adaptive rate.
#[pyclass(name = "Learner", module = "entropic")]
pub struct PyLearner {
    state: LearnerState,
}

#[pymethods]
impl PyLearner {
    /// `targets` defaults to the identity mapping.
    #[new]
    #[pyo3(signature = (inputs, outputs, targets=None, rho=0.5, seed=0))]
    fn new(
        inputs: usize,
        outputs: usize,
        targets: Option<Vec<usize>>,
        rho: f64,
        seed: u64,
    ) -> PyResult<Self> {
        let targets = targets.unwrap_or_else(|| (0..inputs).collect());
        let state =
            learning::init_learner(inputs, outputs, targets, rho, seed).map_err(value_err)?;
        Ok(Self { state })
    }

    fn step(&mut self) -> PyResult<f64> {
        self.state = learning::step(&self.state).map_err(value_err)?;
        Ok(learning::loss(&self.state))
    }

    /// Trains until converged or `iters` steps; returns the loss per record.
    #[pyo3(signature = (iters=2000))]
    fn train(&mut self, iters: u64) -> PyResult<Vec<f64>> {
        let (end, trace) = learning::train(self.state.clone(), iters, &[]).map_err(value_err)?;
        self.state = end;
        Ok(trace.records.iter().map(|r| r.loss).collect())
    }

    fn gradient(&self) -> Vec<f64> {
        learning::gradient(&self.state)
    }

    /// Mean per-row entropy in bits; `order` is "shannon" or a Rényi order.
    #[pyo3(signature = (order="shannon"))]
    fn entropy(&self, order: &str) -> PyResult<f64> {
        learning::mapping_entropy(&self.state, self::order(order)?).map_err(value_err)
    }

    #[getter]
    fn loss(&self) -> f64 {
        learning::loss(&self.state)
    }

    #[getter]
    fn t(&self) -> u64 {
        self.state.t()
    }

    #[getter]
    fn rate(&self) -> f64 {
        self.state.rate()
    }

    #[getter]
    fn predictions(&self) -> Vec<Vec<f64>> {
        (0..self.state.num_inputs())
            .map(|i| self.state.prediction_row(i).to_vec())
            .collect()
    }

    #[getter]
    fn weights(&self) -> Vec<f64> {
        self.state.weights().to_vec()
    }
}

#[pyclass(name = "ClusterResult", module = "entropic", frozen, get_all)]
pub struct PyClusterResult {
    assignment: Vec<usize>,
    objective: f64,
    initial_objective: f64,
    best_per_generation: Vec<f64>,
}

fn objective_config(
    bins: usize,
    alpha: &str,
    min_cluster_size: usize,
) -> PyResult<EntropyObjectiveConfig> {
    Ok(EntropyObjectiveConfig {
        bins_per_dim: bins,
        order: order(alpha)?,
        base: LogBase::Two,
        min_cluster_size,
    })
}

/// Partitions `data` into `k` clusters by minimizing within-cluster entropy.
#[pyfunction]
#[pyo3(signature = (
    data, k, iterations=10000, seed=0, bins=8, alpha="shannon", population=32,
    tournament_size=3, mutation_moves=1, guided_mutation=false, min_cluster_size=2
))]
#[allow(clippy::too_many_arguments)]
fn cluster(
    py: Python<'_>,
    data: &PyDataset,
    k: usize,
    iterations: usize,
    seed: u64,
    bins: usize,
    alpha: &str,
    population: usize,
    tournament_size: usize,
    mutation_moves: usize,
    guided_mutation: bool,
    min_cluster_size: usize,
) -> PyResult<PyClusterResult> {
    let obj = objective_config(bins, alpha, min_cluster_size)?;
    let ga = GaConfig {
        population,
        iterations,
        mutation_moves_per_child: mutation_moves,
        tournament_size,
        seed,
        guided_mutation,
    };
    let ds = &data.inner;
    let r = py
        .detach(|| selforg::entropic_self_organize(ds, k, &obj, &ga))
        .map_err(value_err)?;
    Ok(PyClusterResult {
        assignment: r.partition.assignment().to_vec(),
        objective: r.objective,
        initial_objective: r.initial_objective,
        best_per_generation: r.trace.records.iter().map(|g| g.best_objective).collect(),
    })
}

/// Exhaustive minimum over all assignments; small inputs only.
#[pyfunction]
#[pyo3(signature = (data, k, bins=8, alpha="shannon", min_cluster_size=2))]
fn brute_force_min(
    data: &PyDataset,
    k: usize,
    bins: usize,
    alpha: &str,
    min_cluster_size: usize,
) -> PyResult<(Vec<usize>, f64)> {
    let obj = objective_config(bins, alpha, min_cluster_size)?;
    let (p, value) = selforg::brute_force_min(&data.inner, k, &obj).map_err(value_err)?;
    Ok((p.assignment().to_vec(), value))
}

#[pyfunction]
#[pyo3(signature = (data, assignment, k, bins=8, alpha="shannon", min_cluster_size=2))]
fn partition_entropy(
    data: &PyDataset,
    assignment: Vec<usize>,
    k: usize,
    bins: usize,
    alpha: &str,
    min_cluster_size: usize,
) -> PyResult<f64> {
    let obj = objective_config(bins, alpha, min_cluster_size)?;
    let p = Partition::from_assignment(assignment, k).map_err(value_err)?;
    selforg::partition_entropy(&data.inner, &p, &obj).map_err(value_err)
}

/// Fraction of rows misassigned under the best cluster-to-label matching.
#[pyfunction]
fn error_rate(assignment: Vec<usize>, labels: Vec<usize>) -> PyResult<f64> {
    let k = assignment.iter().max().map_or(1, |&m| m + 1);
    let p = Partition::from_assignment(assignment, k).map_err(value_err)?;
    dataio::error_rate(&p, &labels).map_err(data_err)
}

#[pyfunction]
fn surface_eval(surface: &str, x: f64, y: f64) -> PyResult<f64> {
    Ok(surface_id(surface)?.eval(x, y))
}

#[pyclass(name = "ExploreResult", module = "entropic", frozen, get_all)]
pub struct PyExploreResult {
    x: Vec<f64>,
    y: Vec<f64>,
    z: Vec<f64>,
    entropy: Vec<f64>,
    counts: Vec<u64>,
    edges: Vec<f64>,
    warmup_entropy: f64,
    final_entropy: f64,
}

/// Random-walk warmup followed by greedy entropy-gain moves on a test surface.
/// `policy="random"` walks randomly for the whole run.
#[pyfunction]
#[pyo3(signature = (
    surface="1", steps=100000, warmup=1000, bins=10, alpha="2", epsilon=(0.1, 0.1),
    bounds=None, start=None, seed=0, policy="entropy"
))]
#[allow(clippy::too_many_arguments)]
fn explore(
    py: Python<'_>,
    surface: &str,
    steps: u64,
    warmup: u64,
    bins: usize,
    alpha: &str,
    epsilon: (f64, f64),
    bounds: Option<(f64, f64, f64, f64)>,
    start: Option<(f64, f64)>,
    seed: u64,
    policy: &str,
) -> PyResult<PyExploreResult> {
    let id = surface_id(surface)?;
    let bounds = match bounds {
        Some((x_min, x_max, y_min, y_max)) => Bounds {
            x_min,
            x_max,
            y_min,
            y_max,
        },
        None => id.default_bounds(),
    };
    let warmup_steps = match policy {
        "entropy" => warmup,
        "random" => steps,
        other => return Err(value_err(format!("unknown policy {other:?}"))),
    };
    let cfg = ExploreConfig {
        surface: Surface::new(id, bounds).map_err(value_err)?,
        start: start.unwrap_or_else(|| bounds.center()),
        epsilon,
        bins,
        order: order(alpha)?,
        warmup_steps,
        total_steps: steps,
        seed,
    };
    let out = py
        .detach(|| explorer::run_exploration(&cfg))
        .map_err(value_err)?;
    let records = &out.trace.records;
    let h = &out.final_state.histogram;
    Ok(PyExploreResult {
        x: records.iter().map(|r| r.x).collect(),
        y: records.iter().map(|r| r.y).collect(),
        z: records.iter().map(|r| r.z).collect(),
        entropy: records.iter().map(|r| r.entropy).collect(),
        counts: h.counts().to_vec(),
        edges: h.edges().to_vec(),
        warmup_entropy: out.entropy_at(warmup.min(steps)),
        final_entropy: out.final_entropy(),
    })
}

#[pymodule]
pub fn entropic(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyDataset>()?;
    m.add_class::<PyLearner>()?;
    m.add_class::<PyClusterResult>()?;
    m.add_class::<PyExploreResult>()?;
    m.add_function(wrap_pyfunction!(shannon_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(renyi_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(thermodynamic_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(info_content, m)?)?;
    m.add_function(wrap_pyfunction!(normalized_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(cluster, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_min, m)?)?;
    m.add_function(wrap_pyfunction!(partition_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(error_rate, m)?)?;
    m.add_function(wrap_pyfunction!(surface_eval, m)?)?;
    m.add_function(wrap_pyfunction!(explore, m)?)?;
    Ok(())
}
