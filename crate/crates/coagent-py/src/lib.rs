//! Python bindings for the coagent network library: build networks, inspect
//! their parameter sharing, sample steps, verify gradients, and run the
//! same experiments the `coagent` CLI does.

use coagent::harness::{self, ExperimentConfig};
use coagent::mdp::{self, Action};
use coagent::net::{
    build_network, coagent_policy_probs, network_step, two_layer_config, ActionHead,
    ExecutionRule, NetworkTopology, ParameterStore, DEFAULT_ACTION_BINS,
};
use coagent::oracle::verify::run_verification;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::path::PathBuf;

fn err(e: coagent::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_execution(rule: &str) -> PyResult<ExecutionRule> {
    if rule == "always" {
        return Ok(ExecutionRule::Always);
    }
    if let Some(p) = rule.strip_prefix("bernoulli:") {
        let p: f64 = p
            .trim()
            .parse()
            .map_err(|_| PyValueError::new_err(format!("bad execution probability in '{rule}'")))?;
        return Ok(ExecutionRule::Bernoulli(p));
    }
    Err(PyValueError::new_err(format!(
        "unknown execution rule '{rule}' (expected 'always' or 'bernoulli:<p>')"
    )))
}

/// A feedforward coagent network: a hidden layer of binary-signal coagents
/// feeding action coagents, with its parameter store.
#[pyclass]
struct Network {
    topology: NetworkTopology,
    store: ParameterStore,
}

impl Network {
    fn from_head(
        obs_dim: usize,
        hidden: usize,
        head: ActionHead,
        execution: &str,
        action_sees_obs: bool,
        share_layers: bool,
    ) -> PyResult<Self> {
        let config = two_layer_config(
            obs_dim,
            hidden,
            parse_execution(execution)?,
            head,
            action_sees_obs,
            share_layers,
        )
        .map_err(err)?;
        let (topology, store) = build_network(&config).map_err(err)?;
        Ok(Self { topology, store })
    }
}

#[pymethods]
impl Network {
    /// Network whose action layer picks one of `count` discrete actions.
    #[staticmethod]
    #[pyo3(signature = (obs_dim, hidden, count, execution="always", action_sees_obs=true, share_layers=false))]
    fn discrete(
        obs_dim: usize,
        hidden: usize,
        count: usize,
        execution: &str,
        action_sees_obs: bool,
        share_layers: bool,
    ) -> PyResult<Self> {
        Self::from_head(
            obs_dim,
            hidden,
            ActionHead::Discrete { count },
            execution,
            action_sees_obs,
            share_layers,
        )
    }

    /// Network with one action coagent per dimension, each choosing a value
    /// from `values` (default: the standard 11-bin menu).
    #[staticmethod]
    #[pyo3(signature = (obs_dim, hidden, dims, values=None, execution="always", action_sees_obs=true, share_layers=false))]
    fn binned(
        obs_dim: usize,
        hidden: usize,
        dims: usize,
        values: Option<Vec<f64>>,
        execution: &str,
        action_sees_obs: bool,
        share_layers: bool,
    ) -> PyResult<Self> {
        let values = values.unwrap_or_else(|| DEFAULT_ACTION_BINS.to_vec());
        Self::from_head(
            obs_dim,
            hidden,
            ActionHead::Bins { dims, values },
            execution,
            action_sees_obs,
            share_layers,
        )
    }

    /// Number of coagents.
    fn coagents(&self) -> usize {
        self.topology.m()
    }

    /// Parameter count of coagent `i`.
    fn param_count(&self, i: usize) -> PyResult<usize> {
        if i >= self.topology.m() {
            return Err(PyValueError::new_err(format!("no coagent {i}")));
        }
        Ok(self.topology.coagents[i].param_count())
    }

    /// Total parameter slots, counting shared duplicates.
    fn non_unique_parameters(&self) -> usize {
        self.topology.n_non_unique()
    }

    /// Deduplicated parameter count.
    fn unique_parameters(&self) -> usize {
        self.topology.n_unique()
    }

    /// The deduplicated parameter vector.
    fn unique(&self) -> Vec<f64> {
        self.store.unique().to_vec()
    }

    fn set_unique(&mut self, values: Vec<f64>) -> PyResult<()> {
        self.store.set_unique(&values).map_err(err)
    }

    /// Copy each unique parameter into its duplicate slots and return the
    /// full per-coagent parameter vector.
    fn expand_parameters(&self) -> Vec<f64> {
        self.store.expand_parameters()
    }

    /// Output distribution of coagent `i` for a raw input vector.
    fn policy_probs(&self, i: usize, input: Vec<f64>) -> PyResult<Vec<f64>> {
        if i >= self.topology.m() {
            return Err(PyValueError::new_err(format!("no coagent {i}")));
        }
        let params = &self.store.expanded()[self.topology.param_range(i)];
        coagent_policy_probs(&self.topology.coagents[i], &input, params).map_err(err)
    }

    /// Sample one network pass. `held` carries the previous step's output
    /// indices; pass `None` on the first step of an episode, which forces
    /// every coagent to execute. Returns `(action, executions, outputs)`.
    #[pyo3(signature = (obs, held=None, seed=0))]
    fn step(
        &self,
        py: Python<'_>,
        obs: Vec<f64>,
        held: Option<Vec<usize>>,
        seed: u64,
    ) -> PyResult<(Py<PyAny>, Vec<bool>, Vec<usize>)> {
        let mut policy_rng = ChaCha8Rng::seed_from_u64(seed);
        let mut exec_rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9E37_79B9_7F4A_7C15);
        let (action, rec) = network_step(
            &self.topology,
            &self.store,
            &obs,
            held.as_deref(),
            &mut policy_rng,
            &mut exec_rng,
        )
        .map_err(err)?;
        let action = match action {
            Action::Discrete(a) => a.into_pyobject(py)?.into_any().unbind(),
            Action::Continuous(v) => v.into_pyobject(py)?.into_any().unbind(),
        };
        Ok((action, rec.executions, rec.outputs))
    }
}

/// Discounted return of a reward sequence from its first step.
#[pyfunction]
fn discounted_return(rewards: Vec<f64>, gamma: f64) -> PyResult<f64> {
    mdp::discounted_return(&rewards, gamma, 0).map_err(err)
}

/// Discounted return from every step of a reward sequence.
#[pyfunction]
fn returns_from(rewards: Vec<f64>, gamma: f64) -> Vec<f64> {
    mdp::returns_from(&rewards, gamma)
}

/// The standard 11-value action bin menu.
#[pyfunction]
fn default_action_bins() -> Vec<f64> {
    DEFAULT_ACTION_BINS.to_vec()
}

/// Compare gradient estimators against exact enumeration and finite
/// differences on randomized instances. Returns
/// `(case, max_rel_err, tolerance, passed)` tuples.
#[pyfunction]
#[pyo3(signature = (instances=5))]
fn verify_gradients(instances: usize) -> PyResult<Vec<(String, f64, f64, bool)>> {
    let outcomes = run_verification(instances).map_err(err)?;
    Ok(outcomes
        .into_iter()
        .map(|o| (o.case, o.max_rel_err, o.tolerance, o.passed))
        .collect())
}

fn stats_dict<'py>(
    py: Python<'py>,
    stats: &harness::SummaryStats,
) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("trials", stats.trials)?;
    d.set_item("episodes", stats.episodes)?;
    d.set_item("window", stats.window)?;
    d.set_item("average_return", stats.average_return)?;
    d.set_item("standard_error", stats.standard_error)?;
    d.set_item("standard_deviation", stats.standard_deviation)?;
    Ok(d)
}

/// Run the experiment a config file describes, writing per-trial CSVs, the
/// learning curve, and the summary into `out` (defaults to the config's
/// `out` entry). Returns the summary statistics.
#[pyfunction]
#[pyo3(signature = (config, out=None, trials=None, seed=None))]
fn train(
    py: Python<'_>,
    config: PathBuf,
    out: Option<PathBuf>,
    trials: Option<usize>,
    seed: Option<u64>,
) -> PyResult<Py<PyDict>> {
    let mut cfg = ExperimentConfig::from_file(&config).map_err(err)?;
    if let Some(t) = trials {
        cfg.trials = t;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let out_dir = out
        .or_else(|| cfg.out.clone().map(PathBuf::from))
        .ok_or_else(|| PyValueError::new_err("no output directory: pass out= or set out in the config"))?;
    let output = harness::run_experiment(&cfg, &out_dir).map_err(err)?;
    let d = stats_dict(py, &output.summary.stats)?;
    d.set_item("out", output.dir.to_string_lossy())?;
    Ok(d.unbind())
}

/// Parse a config, build its network, and report the shape without training.
#[pyfunction]
fn dry_run(py: Python<'_>, config: PathBuf) -> PyResult<Py<PyDict>> {
    let cfg = ExperimentConfig::from_file(&config).map_err(err)?;
    let (topology, _) = harness::build_topology(&cfg).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("environment", cfg.environment)?;
    d.set_item("coagents", topology.m())?;
    d.set_item(
        "param_counts",
        (0..topology.m())
            .map(|i| topology.coagents[i].param_count())
            .collect::<Vec<_>>(),
    )?;
    d.set_item("non_unique_parameters", topology.n_non_unique())?;
    d.set_item("unique_parameters", topology.n_unique())?;
    Ok(d.unbind())
}

/// Summarise the trial CSVs in a directory. Returns the summary statistics.
#[pyfunction]
#[pyo3(signature = (path, window=1000))]
fn summarize_dir(py: Python<'_>, path: PathBuf, window: usize) -> PyResult<Py<PyDict>> {
    let results = harness::read_results_dir(&path).map_err(err)?;
    let summary = harness::summarize(&results, window).map_err(err)?;
    Ok(stats_dict(py, &summary.stats)?.unbind())
}

#[pymodule]
fn coagent_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Network>()?;
    m.add_function(wrap_pyfunction!(discounted_return, m)?)?;
    m.add_function(wrap_pyfunction!(returns_from, m)?)?;
    m.add_function(wrap_pyfunction!(default_action_bins, m)?)?;
    m.add_function(wrap_pyfunction!(verify_gradients, m)?)?;
    m.add_function(wrap_pyfunction!(train, m)?)?;
    m.add_function(wrap_pyfunction!(dry_run, m)?)?;
    m.add_function(wrap_pyfunction!(summarize_dir, m)?)?;
    Ok(())
}
