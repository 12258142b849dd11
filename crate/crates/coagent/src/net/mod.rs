//! Coagent network structure: wiring, parameter sharing, and sampling.
//!
//! A network is an ordered list of coagents. Coagent `i` reads slices of the
//! observation and/or the current outputs of coagents `j < i`, and runs a
//! linear-softmax policy over its finite output set. The outputs of the
//! trailing "action coagents" are assembled into the environment action.
//!
//! Parameters come in two views: the *non-unique* vector concatenates every
//! coagent's own parameter block, while the *unique* vector stores one copy
//! per tied group. A [`SharingMap`] sends each non-unique slot to its unique
//! source, and [`ParameterStore`] keeps the two views in sync.

use crate::error::{Error, Result};
use crate::mdp::{Action, AtomicStepRecord};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Tolerance for softmax probabilities summing to one.
pub const PROB_SUM_TOL: f64 = 1e-12;

/// Eleven-point symmetric grid used to discretise `[-1, 1]` action
/// dimensions, denser near zero for fine control.
pub const DEFAULT_ACTION_BINS: [f64; 11] = [
    -1.0, -0.32, -0.1, -0.032, -0.01, 0.0, 0.01, 0.032, 0.1, 0.32, 1.0,
];

/// Output values for a binary signal coagent.
pub fn binary_outputs() -> Vec<f64> {
    vec![-1.0, 1.0]
}

/// One entry of a coagent's input vector.
#[derive(Clone, Debug, PartialEq)]
pub enum InputSource {
    /// A contiguous slice `start..start + len` of the observation.
    Observation { start: usize, len: usize },
    /// The current output *value* of an earlier coagent.
    Coagent(usize),
}

/// When a coagent gets to act.
#[derive(Clone, Debug, PartialEq)]
pub enum ExecutionRule {
    /// Execute on every step.
    Always,
    /// Execute independently with this probability (the first step of an
    /// episode always executes regardless).
    Bernoulli(f64),
    /// Execution probability looked up by the hot index of the coagent's
    /// first observation slice, which must be one-hot.
    StateTable(Vec<f64>),
}

/// A single coagent: its inputs, its finite output set, and its execution rule.
#[derive(Clone, Debug)]
pub struct CoagentSpec {
    pub inputs: Vec<InputSource>,
    /// The real value emitted for each output class.
    pub outputs: Vec<f64>,
    pub execution: ExecutionRule,
}

impl CoagentSpec {
    pub fn input_dim(&self) -> usize {
        self.inputs
            .iter()
            .map(|src| match src {
                InputSource::Observation { len, .. } => *len,
                InputSource::Coagent(_) => 1,
            })
            .sum()
    }

    pub fn n_outputs(&self) -> usize {
        self.outputs.len()
    }

    /// Parameters of the linear-softmax policy: one weight per input plus a
    /// bias, for each output class.
    pub fn param_count(&self) -> usize {
        (self.input_dim() + 1) * self.n_outputs()
    }
}

/// How the trailing action coagents become an environment action.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ActionAssembler {
    /// One action coagent; its chosen class index is the discrete action.
    Discrete,
    /// One coagent per action dimension; the chosen output values form the
    /// continuous action vector.
    ContinuousBins,
}

/// Map from non-unique parameter slots to unique parameters. Total (every
/// slot mapped) and surjective (every unique parameter referenced).
#[derive(Clone, Debug)]
pub struct SharingMap {
    assignment: Vec<usize>,
    n_unique: usize,
    groups: Vec<Vec<usize>>,
}

impl SharingMap {
    /// No sharing: slot `y` maps to unique parameter `y`.
    pub fn identity(n: usize) -> Self {
        Self {
            assignment: (0..n).collect(),
            n_unique: n,
            groups: (0..n).map(|y| vec![y]).collect(),
        }
    }

    pub fn new(assignment: Vec<usize>) -> Result<Self> {
        if assignment.is_empty() {
            return Err(Error::Validation("sharing assignment must be non-empty".into()));
        }
        let n_unique = assignment.iter().max().unwrap() + 1;
        let mut groups = vec![Vec::new(); n_unique];
        for (slot, &u) in assignment.iter().enumerate() {
            groups[u].push(slot);
        }
        if let Some(gap) = groups.iter().position(|g| g.is_empty()) {
            return Err(Error::Validation(format!(
                "sharing assignment never uses unique parameter {gap}"
            )));
        }
        Ok(Self {
            assignment,
            n_unique,
            groups,
        })
    }

    pub fn n_unique(&self) -> usize {
        self.n_unique
    }

    pub fn n_non_unique(&self) -> usize {
        self.assignment.len()
    }

    /// Unique source of non-unique slot `y`.
    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Non-unique slots fed by unique parameter `u`.
    pub fn group(&self, u: usize) -> &[usize] {
        &self.groups[u]
    }

    pub fn is_identity(&self) -> bool {
        self.n_unique == self.assignment.len()
            && self.assignment.iter().enumerate().all(|(y, &u)| y == u)
    }
}

/// Owns the unique parameter vector and keeps the expanded (non-unique) view
/// in sync with it.
#[derive(Clone, Debug)]
pub struct ParameterStore {
    sharing: SharingMap,
    unique: Vec<f64>,
    expanded: Vec<f64>,
}

impl ParameterStore {
    pub fn new_zero(sharing: SharingMap) -> Self {
        let unique = vec![0.0; sharing.n_unique()];
        let expanded = vec![0.0; sharing.n_non_unique()];
        Self {
            sharing,
            unique,
            expanded,
        }
    }

    pub fn from_unique(sharing: SharingMap, unique: Vec<f64>) -> Result<Self> {
        if unique.len() != sharing.n_unique() {
            return Err(Error::InvalidInput(format!(
                "unique vector has length {}, sharing map expects {}",
                unique.len(),
                sharing.n_unique()
            )));
        }
        let mut store = Self {
            expanded: vec![0.0; sharing.n_non_unique()],
            sharing,
            unique,
        };
        store.refresh();
        Ok(store)
    }

    pub fn sharing(&self) -> &SharingMap {
        &self.sharing
    }

    pub fn unique(&self) -> &[f64] {
        &self.unique
    }

    /// The cached non-unique view; always consistent with `unique()`.
    pub fn expanded(&self) -> &[f64] {
        &self.expanded
    }

    /// Recompute the non-unique view from scratch: slot `y` copies unique
    /// parameter `assignment(y)`.
    pub fn expand_parameters(&self) -> Vec<f64> {
        self.sharing
            .assignment()
            .iter()
            .map(|&u| self.unique[u])
            .collect()
    }

    pub fn set_unique(&mut self, values: &[f64]) -> Result<()> {
        if values.len() != self.unique.len() {
            return Err(Error::InvalidInput(format!(
                "expected {} unique parameters, got {}",
                self.unique.len(),
                values.len()
            )));
        }
        self.unique.copy_from_slice(values);
        self.refresh();
        Ok(())
    }

    /// Mutate the unique parameters in place (e.g. one optimiser step), then
    /// refresh the expanded view.
    pub fn update_unique<F: FnOnce(&mut [f64])>(&mut self, f: F) {
        f(&mut self.unique);
        self.refresh();
    }

    fn refresh(&mut self) {
        for (slot, &u) in self.sharing.assignment().iter().enumerate() {
            self.expanded[slot] = self.unique[u];
        }
    }
}

/// A validated network: coagents in execution order plus the sharing map and
/// per-coagent offsets into the non-unique parameter vector.
#[derive(Clone, Debug)]
pub struct NetworkTopology {
    pub obs_dim: usize,
    pub coagents: Vec<CoagentSpec>,
    /// How many trailing coagents produce the action.
    pub action_coagents: usize,
    pub assembler: ActionAssembler,
    pub sharing: SharingMap,
    offsets: Vec<usize>,
    n_non_unique: usize,
}

impl NetworkTopology {
    /// Number of coagents.
    pub fn m(&self) -> usize {
        self.coagents.len()
    }

    pub fn n_non_unique(&self) -> usize {
        self.n_non_unique
    }

    pub fn n_unique(&self) -> usize {
        self.sharing.n_unique()
    }

    /// Range of coagent `i`'s block in the non-unique parameter vector.
    pub fn param_range(&self, i: usize) -> std::ops::Range<usize> {
        self.offsets[i]..self.offsets[i] + self.coagents[i].param_count()
    }

    /// Input vector of coagent `i` given the observation and the current
    /// output indices of all coagents (entries for `j >= i` are ignored).
    pub fn gather_input(&self, i: usize, obs: &[f64], outputs: &[usize]) -> Vec<f64> {
        let mut x = Vec::with_capacity(self.coagents[i].input_dim());
        for src in &self.coagents[i].inputs {
            match src {
                InputSource::Observation { start, len } => {
                    x.extend_from_slice(&obs[*start..*start + *len]);
                }
                InputSource::Coagent(j) => {
                    x.push(self.coagents[*j].outputs[outputs[*j]]);
                }
            }
        }
        x
    }
}

/// Blueprint accepted by [`build_network`].
#[derive(Clone, Debug)]
pub struct NetworkConfig {
    pub obs_dim: usize,
    pub coagents: Vec<CoagentSpec>,
    pub action_coagents: usize,
    pub assembler: ActionAssembler,
    /// `None` means no sharing (identity map).
    pub sharing: Option<Vec<usize>>,
}

/// Validate a blueprint and produce the topology together with a zero-
/// initialised parameter store (so every coagent starts with a uniform
/// policy).
pub fn build_network(config: &NetworkConfig) -> Result<(NetworkTopology, ParameterStore)> {
    let m = config.coagents.len();
    if m == 0 {
        return Err(Error::Validation("a network needs at least one coagent".into()));
    }
    for (i, spec) in config.coagents.iter().enumerate() {
        if spec.outputs.is_empty() {
            return Err(Error::Validation(format!("coagent {i} has no outputs")));
        }
        for src in &spec.inputs {
            match src {
                InputSource::Observation { start, len } => {
                    if start + len > config.obs_dim || *len == 0 {
                        return Err(Error::Validation(format!(
                            "coagent {i}: observation slice {start}..{} outside 0..{}",
                            start + len,
                            config.obs_dim
                        )));
                    }
                }
                InputSource::Coagent(j) => {
                    if *j >= i {
                        return Err(Error::Validation(format!(
                            "coagent {i} reads coagent {j}: wiring must be strictly feedforward"
                        )));
                    }
                }
            }
        }
        match &spec.execution {
            ExecutionRule::Always => {}
            ExecutionRule::Bernoulli(p) => {
                if !(0.0..=1.0).contains(p) {
                    return Err(Error::Validation(format!(
                        "coagent {i}: execution probability {p} outside [0, 1]"
                    )));
                }
            }
            ExecutionRule::StateTable(table) => {
                if table.iter().any(|p| !(0.0..=1.0).contains(p)) {
                    return Err(Error::Validation(format!(
                        "coagent {i}: state-table entries must lie in [0, 1]"
                    )));
                }
                match spec.inputs.first() {
                    Some(InputSource::Observation { len, .. }) if *len == table.len() => {}
                    _ => {
                        return Err(Error::Validation(format!(
                            "coagent {i}: a state table of length {} needs a first input that is \
                             an observation slice of the same length",
                            table.len()
                        )))
                    }
                }
            }
        }
    }
    if config.action_coagents == 0 || config.action_coagents > m {
        return Err(Error::Validation(format!(
            "action_coagents must lie in 1..={m}, got {}",
            config.action_coagents
        )));
    }
    if config.assembler == ActionAssembler::Discrete && config.action_coagents != 1 {
        return Err(Error::Validation(
            "a discrete action is produced by exactly one coagent".into(),
        ));
    }

    let mut offsets = Vec::with_capacity(m);
    let mut n_non_unique = 0;
    for spec in &config.coagents {
        offsets.push(n_non_unique);
        n_non_unique += spec.param_count();
    }

    let sharing = match &config.sharing {
        None => SharingMap::identity(n_non_unique),
        Some(assignment) => {
            if assignment.len() != n_non_unique {
                return Err(Error::Validation(format!(
                    "sharing assignment covers {} slots but the network has {n_non_unique}",
                    assignment.len()
                )));
            }
            SharingMap::new(assignment.clone())?
        }
    };

    let topology = NetworkTopology {
        obs_dim: config.obs_dim,
        coagents: config.coagents.clone(),
        action_coagents: config.action_coagents,
        assembler: config.assembler,
        sharing: sharing.clone(),
        offsets,
        n_non_unique,
    };
    let store = ParameterStore::new_zero(sharing);
    Ok((topology, store))
}

/// Class probabilities of one coagent's linear-softmax policy. `params` is
/// the coagent's own block, laid out class-by-class as `d` weights plus a
/// bias.
pub fn coagent_policy_probs(spec: &CoagentSpec, x: &[f64], params: &[f64]) -> Result<Vec<f64>> {
    let d = spec.input_dim();
    let k = spec.n_outputs();
    if x.len() != d {
        return Err(Error::InvalidInput(format!(
            "input has length {}, coagent expects {d}",
            x.len()
        )));
    }
    if params.len() != spec.param_count() {
        return Err(Error::InvalidInput(format!(
            "parameter block has length {}, coagent expects {}",
            params.len(),
            spec.param_count()
        )));
    }
    let mut logits = Vec::with_capacity(k);
    for j in 0..k {
        let block = &params[j * (d + 1)..(j + 1) * (d + 1)];
        let mut z = block[d]; // bias
        for (w, xi) in block[..d].iter().zip(x) {
            z += w * xi;
        }
        logits.push(z);
    }
    // Shift by the max logit so exp never overflows.
    let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut probs: Vec<f64> = logits.iter().map(|z| (z - max).exp()).collect();
    let total: f64 = probs.iter().sum();
    for p in &mut probs {
        *p /= total;
    }
    Ok(probs)
}

/// Probability that a coagent executes on a non-initial step, given its input.
pub fn execution_probability(spec: &CoagentSpec, x: &[f64]) -> f64 {
    match &spec.execution {
        ExecutionRule::Always => 1.0,
        ExecutionRule::Bernoulli(p) => *p,
        ExecutionRule::StateTable(table) => {
            let hot = x[..table.len()]
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .map(|(i, _)| i)
                .unwrap_or(0);
            table[hot]
        }
    }
}

/// Sample whether a coagent executes. [`ExecutionRule::Always`] consumes no
/// randomness.
pub fn sample_execution(spec: &CoagentSpec, x: &[f64], rng: &mut ChaCha8Rng) -> bool {
    match &spec.execution {
        ExecutionRule::Always => true,
        _ => rng.random::<f64>() < execution_probability(spec, x),
    }
}

pub(crate) fn sample_categorical(probs: &[f64], rng: &mut ChaCha8Rng) -> usize {
    let mut u: f64 = rng.random();
    for (i, &p) in probs.iter().enumerate() {
        if u < p {
            return i;
        }
        u -= p;
    }
    probs.iter().rposition(|&p| p > 0.0).unwrap_or(probs.len() - 1)
}

/// Combine per-dimension bin values and chosen indices into an action vector.
pub fn assemble_action(values_per_dim: &[&[f64]], chosen: &[usize]) -> Result<Vec<f64>> {
    if values_per_dim.len() != chosen.len() {
        return Err(Error::InvalidInput(format!(
            "{} value lists but {} chosen indices",
            values_per_dim.len(),
            chosen.len()
        )));
    }
    values_per_dim
        .iter()
        .zip(chosen)
        .enumerate()
        .map(|(dim, (values, &idx))| {
            values.get(idx).copied().ok_or_else(|| {
                Error::InvalidInput(format!(
                    "dimension {dim}: index {idx} out of range for {} bins",
                    values.len()
                ))
            })
        })
        .collect()
}

/// Run all coagents for one atomic step.
///
/// `held` carries the previous step's output indices; pass `None` on the
/// first step of an episode, which forces every coagent to execute. Coagents
/// that do not execute keep their held output and consume no policy
/// randomness. Output sampling draws from `policy_rng` and execution coins
/// from `exec_rng` so the two streams stay independent.
///
/// The returned record has `reward` set to zero; the caller fills it in after
/// stepping the environment.
pub fn network_step(
    topology: &NetworkTopology,
    store: &ParameterStore,
    obs: &[f64],
    held: Option<&[usize]>,
    policy_rng: &mut ChaCha8Rng,
    exec_rng: &mut ChaCha8Rng,
) -> Result<(Action, AtomicStepRecord)> {
    let m = topology.m();
    if obs.len() != topology.obs_dim {
        return Err(Error::InvalidInput(format!(
            "observation has length {}, network expects {}",
            obs.len(),
            topology.obs_dim
        )));
    }
    if let Some(prev) = held {
        if prev.len() != m {
            return Err(Error::InvalidInput(format!(
                "held outputs have length {}, network has {m} coagents",
                prev.len()
            )));
        }
    }
    let first = held.is_none();
    let mut outputs: Vec<usize> = held.map(|h| h.to_vec()).unwrap_or_else(|| vec![0; m]);
    let mut executions = vec![false; m];
    let mut inputs = Vec::with_capacity(m);
    let params = store.expanded();

    for i in 0..m {
        let spec = &topology.coagents[i];
        let x = topology.gather_input(i, obs, &outputs);
        let execute = first || sample_execution(spec, &x, exec_rng);
        if execute {
            let probs = coagent_policy_probs(spec, &x, &params[topology.param_range(i)])?;
            outputs[i] = sample_categorical(&probs, policy_rng);
        }
        executions[i] = execute;
        inputs.push(x);
    }

    let action = match topology.assembler {
        ActionAssembler::Discrete => Action::Discrete(outputs[m - 1]),
        ActionAssembler::ContinuousBins => {
            let start = m - topology.action_coagents;
            let values: Vec<&[f64]> = (start..m)
                .map(|i| topology.coagents[i].outputs.as_slice())
                .collect();
            Action::Continuous(assemble_action(&values, &outputs[start..])?)
        }
    };

    let record = AtomicStepRecord {
        observation: obs.to_vec(),
        executions,
        inputs,
        outputs,
        action: action.clone(),
        reward: 0.0,
    };
    Ok((action, record))
}

/// Description of the action-producing layer for [`two_layer_config`].
#[derive(Clone, Debug)]
pub enum ActionHead {
    /// A single coagent choosing among `count` discrete actions.
    Discrete { count: usize },
    /// One coagent per action dimension, each choosing among `values`.
    Bins { dims: usize, values: Vec<f64> },
}

/// Standard two-layer blueprint: `hidden` binary-signal coagents that read
/// the full observation, feeding an action layer. With `share_layers`, all
/// hidden coagents share one parameter block and all action coagents share
/// another. `hidden = 0` gives a plain single-layer policy (the action layer
/// then always reads the observation).
pub fn two_layer_config(
    obs_dim: usize,
    hidden: usize,
    hidden_execution: ExecutionRule,
    head: ActionHead,
    action_sees_obs: bool,
    share_layers: bool,
) -> Result<NetworkConfig> {
    let full_obs = InputSource::Observation {
        start: 0,
        len: obs_dim,
    };
    let mut coagents = Vec::new();
    for _ in 0..hidden {
        coagents.push(CoagentSpec {
            inputs: vec![full_obs.clone()],
            outputs: binary_outputs(),
            execution: hidden_execution.clone(),
        });
    }
    let mut action_inputs = Vec::new();
    if action_sees_obs || hidden == 0 {
        action_inputs.push(full_obs);
    }
    for j in 0..hidden {
        action_inputs.push(InputSource::Coagent(j));
    }
    let (action_coagents, assembler, outputs) = match &head {
        ActionHead::Discrete { count } => {
            if *count == 0 {
                return Err(Error::Validation("a discrete head needs at least one action".into()));
            }
            (1, ActionAssembler::Discrete, (0..*count).map(|a| a as f64).collect())
        }
        ActionHead::Bins { dims, values } => {
            if *dims == 0 || values.is_empty() {
                return Err(Error::Validation("a bin head needs dims >= 1 and bin values".into()));
            }
            (*dims, ActionAssembler::ContinuousBins, values.clone())
        }
    };
    for _ in 0..action_coagents {
        coagents.push(CoagentSpec {
            inputs: action_inputs.clone(),
            outputs: outputs.clone(),
            execution: ExecutionRule::Always,
        });
    }

    let sharing = if share_layers {
        let mut assignment = Vec::new();
        let hidden_size = coagents.first().filter(|_| hidden > 0).map_or(0, |c| c.param_count());
        let action_size = coagents[hidden..][0].param_count();
        for i in 0..coagents.len() {
            let (base, size) = if i < hidden {
                (0, hidden_size)
            } else {
                (hidden_size, action_size)
            };
            assignment.extend(base..base + size);
        }
        Some(assignment)
    } else {
        None
    };

    Ok(NetworkConfig {
        obs_dim,
        coagents,
        action_coagents,
        assembler,
        sharing,
    })
}
