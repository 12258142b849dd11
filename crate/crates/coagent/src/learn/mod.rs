//! Learning rules: score-function gradients for individual coagents, whole-
//! episode REINFORCE-style updates, and an online actor-critic with
//! eligibility traces.
//!
//! Every rule respects the two structural features of coagent networks:
//!
//! * **Asynchronous execution** — a coagent accrues gradient only on steps
//!   where it executed; held steps contribute nothing.
//! * **Parameter sharing** — per-coagent gradients are concatenated into the
//!   non-unique vector, then slots tied to the same unique parameter are
//!   summed. Optimiser steps happen in unique space and are broadcast back
//!   through the [`ParameterStore`].

mod adam;
mod critic;
mod normalizer;

pub use adam::AdamState;
pub use critic::{CriticNet, CRITIC_HIDDEN};
pub use normalizer::ObservationNormalizer;

use crate::error::{Error, Result};
use crate::mdp::{returns_from, AtomicStepRecord};
use crate::net::{coagent_policy_probs, CoagentSpec, NetworkTopology, ParameterStore, SharingMap};

/// Hyperparameters shared by the training algorithms. Field names match the
/// experiment-config keys one-to-one.
#[derive(Clone, Debug, PartialEq)]
pub struct Hyperparams {
    pub actor_lr: f64,
    pub actor_beta1: f64,
    pub actor_beta2: f64,
    pub lambda_actor: f64,
    pub critic_lr: f64,
    pub critic_beta1: f64,
    pub critic_beta2: f64,
    pub lambda_critic: f64,
    pub gamma: f64,
    pub adam_eps: f64,
    pub batch_actor: usize,
    pub batch_critic: usize,
}

impl Default for Hyperparams {
    /// Defaults tuned for the two-layer continuous-control setup; they are
    /// deliberately odd-looking numbers produced by hyperparameter search.
    fn default() -> Self {
        Self {
            actor_lr: 0.003844152898051233,
            actor_beta1: 0.9,
            actor_beta2: 0.9914815877866358,
            lambda_actor: 0.8206776332879618,
            critic_lr: 0.00018759145359217475,
            critic_beta1: 0.0,
            critic_beta2: 0.9999975597793732,
            lambda_critic: 0.0,
            gamma: 0.9679813850692468,
            adam_eps: 1e-8,
            batch_actor: 128,
            batch_critic: 32,
        }
    }
}

impl Hyperparams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("actor_lr", self.actor_lr),
            ("critic_lr", self.critic_lr),
            ("adam_eps", self.adam_eps),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        let unit = [
            ("actor_beta1", self.actor_beta1),
            ("actor_beta2", self.actor_beta2),
            ("critic_beta1", self.critic_beta1),
            ("critic_beta2", self.critic_beta2),
        ];
        for (name, v) in unit {
            if !(0.0..1.0).contains(&v) {
                return Err(Error::Config(format!("{name} must lie in [0, 1), got {v}")));
            }
        }
        let closed_unit = [
            ("lambda_actor", self.lambda_actor),
            ("lambda_critic", self.lambda_critic),
            ("gamma", self.gamma),
        ];
        for (name, v) in closed_unit {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Config(format!("{name} must lie in [0, 1], got {v}")));
            }
        }
        if self.batch_actor == 0 || self.batch_critic == 0 {
            return Err(Error::Config("batch sizes must be at least 1".into()));
        }
        Ok(())
    }
}

/// Gradient of `ln pi(u | x)` for one linear-softmax coagent with respect to
/// its own parameter block: class `j` gets `(1{j == u} - pi_j) * [x; 1]`.
pub fn local_log_prob_gradient(
    spec: &CoagentSpec,
    x: &[f64],
    chosen: usize,
    params: &[f64],
) -> Result<Vec<f64>> {
    if chosen >= spec.n_outputs() {
        return Err(Error::InvalidInput(format!(
            "chosen class {chosen} out of range for {} outputs",
            spec.n_outputs()
        )));
    }
    let probs = coagent_policy_probs(spec, x, params)?;
    let d = spec.input_dim();
    let mut grad = Vec::with_capacity(params.len());
    for (j, &p) in probs.iter().enumerate() {
        let coeff = if j == chosen { 1.0 - p } else { -p };
        for &xi in x {
            grad.push(coeff * xi);
        }
        grad.push(coeff); // bias entry
        debug_assert_eq!(grad.len(), (j + 1) * (d + 1));
    }
    Ok(grad)
}

/// A gradient in all three coordinate systems.
#[derive(Clone, Debug)]
pub struct GradientBundle {
    /// One block per coagent, in that coagent's own parameter layout.
    pub per_coagent: Vec<Vec<f64>>,
    /// The blocks concatenated in network order.
    pub non_unique: Vec<f64>,
    /// Non-unique entries summed into their tied unique parameters.
    pub unique: Vec<f64>,
}

/// Sum non-unique gradient entries into unique space: slot `y` adds into
/// `assignment(y)`. This is the sparse form of multiplying by the transpose
/// of the 0/1 expansion matrix.
pub fn aggregate_unique_gradient(non_unique: &[f64], sharing: &SharingMap) -> Result<Vec<f64>> {
    if non_unique.len() != sharing.n_non_unique() {
        return Err(Error::InvalidInput(format!(
            "gradient has {} entries, sharing map covers {}",
            non_unique.len(),
            sharing.n_non_unique()
        )));
    }
    let mut unique = vec![0.0; sharing.n_unique()];
    for (slot, &u) in sharing.assignment().iter().enumerate() {
        unique[u] += non_unique[slot];
    }
    Ok(unique)
}

fn check_records(topology: &NetworkTopology, steps: &[AtomicStepRecord]) -> Result<()> {
    let m = topology.m();
    for (t, rec) in steps.iter().enumerate() {
        if rec.executions.len() != m || rec.outputs.len() != m || rec.inputs.len() != m {
            return Err(Error::InvalidInput(format!(
                "step record {t} describes {} coagents, network has {m}",
                rec.executions.len()
            )));
        }
    }
    Ok(())
}

/// Whole-episode gradient estimate: each coagent sums, over the steps where
/// it executed, `gamma^t * G_t * grad ln pi_i(x_t, u_t)`, where `G_t` is the
/// discounted return from step `t`. Steps where the coagent held contribute
/// nothing.
pub fn reinforce_gradient(
    topology: &NetworkTopology,
    store: &ParameterStore,
    steps: &[AtomicStepRecord],
    gamma: f64,
) -> Result<GradientBundle> {
    check_records(topology, steps)?;
    let rewards: Vec<f64> = steps.iter().map(|s| s.reward).collect();
    let returns = returns_from(&rewards, gamma);
    let params = store.expanded();

    let mut per_coagent: Vec<Vec<f64>> = topology
        .coagents
        .iter()
        .map(|c| vec![0.0; c.param_count()])
        .collect();
    let mut discount = 1.0;
    for (t, rec) in steps.iter().enumerate() {
        let scale = discount * returns[t];
        if scale != 0.0 {
            for (i, spec) in topology.coagents.iter().enumerate() {
                if !rec.executions[i] {
                    continue;
                }
                let local = local_log_prob_gradient(
                    spec,
                    &rec.inputs[i],
                    rec.outputs[i],
                    &params[topology.param_range(i)],
                )?;
                for (acc, g) in per_coagent[i].iter_mut().zip(&local) {
                    *acc += scale * g;
                }
            }
        }
        discount *= gamma;
    }

    let mut non_unique = Vec::with_capacity(topology.n_non_unique());
    for block in &per_coagent {
        non_unique.extend_from_slice(block);
    }
    let unique = aggregate_unique_gradient(&non_unique, &topology.sharing)?;
    Ok(GradientBundle {
        per_coagent,
        non_unique,
        unique,
    })
}

/// One REINFORCE-style episode update: compute the episode gradient and take
/// an Adam ascent step in unique parameter space. Returns the bundle that was
/// applied.
pub fn reinforce_episode_update(
    topology: &NetworkTopology,
    store: &mut ParameterStore,
    steps: &[AtomicStepRecord],
    gamma: f64,
    adam: &mut AdamState,
) -> Result<GradientBundle> {
    let bundle = reinforce_gradient(topology, store, steps, gamma)?;
    let mut result = Ok(());
    store.update_unique(|u| result = adam.step(&bundle.unique, u));
    result?;
    Ok(bundle)
}

/// Eligibility traces for the actor (unique space) and critic.
#[derive(Clone, Debug)]
pub struct TraceState {
    pub actor: Vec<f64>,
    pub critic: Vec<f64>,
}

impl TraceState {
    pub fn new(n_actor: usize, n_critic: usize) -> Self {
        Self {
            actor: vec![0.0; n_actor],
            critic: vec![0.0; n_critic],
        }
    }

    pub fn reset(&mut self) {
        self.actor.iter_mut().for_each(|z| *z = 0.0);
        self.critic.iter_mut().for_each(|z| *z = 0.0);
    }
}

/// One environment transition as seen by [`actor_critic_step`]. The record's
/// `observation` and `next_observation` must already be normalised if
/// normalisation is enabled.
pub struct TransitionView<'a> {
    pub record: &'a AtomicStepRecord,
    pub next_observation: &'a [f64],
    pub done: bool,
}

/// Online actor-critic learner state: traces, optimisers, and gradient
/// accumulators that apply an update every `batch_*` transitions.
#[derive(Clone, Debug)]
pub struct ActorCritic {
    pub traces: TraceState,
    pub adam_actor: AdamState,
    pub adam_critic: AdamState,
    pub hyper: Hyperparams,
    accum_actor: Vec<f64>,
    accum_critic: Vec<f64>,
    pending_actor: usize,
    pending_critic: usize,
}

impl ActorCritic {
    pub fn new(n_unique: usize, n_critic: usize, hyper: Hyperparams) -> Result<Self> {
        hyper.validate()?;
        Ok(Self {
            traces: TraceState::new(n_unique, n_critic),
            adam_actor: AdamState::new(
                n_unique,
                hyper.actor_lr,
                hyper.actor_beta1,
                hyper.actor_beta2,
                hyper.adam_eps,
            ),
            adam_critic: AdamState::new(
                n_critic,
                hyper.critic_lr,
                hyper.critic_beta1,
                hyper.critic_beta2,
                hyper.adam_eps,
            ),
            accum_actor: vec![0.0; n_unique],
            accum_critic: vec![0.0; n_critic],
            pending_actor: 0,
            pending_critic: 0,
            hyper,
        })
    }

    /// Reset eligibility traces at an episode boundary. Batch accumulators
    /// carry across episodes.
    pub fn begin_episode(&mut self) {
        self.traces.reset();
    }
}

/// One online actor-critic update from a single transition.
///
/// * TD error: `delta = r + gamma * V(x') - V(x)` (the bootstrap term is
///   dropped on terminal transitions).
/// * Critic trace: `z_c <- gamma * lambda_critic * z_c + grad V(x)`.
/// * Actor trace: `z_a <- gamma * lambda_actor * z_a + g`, where `g` is the
///   unique-space aggregation of each *executing* coagent's log-prob
///   gradient.
/// * Every `batch_*` transitions the mean accumulated `delta * z` is applied
///   as one Adam ascent step.
///
/// Returns the TD error.
pub fn actor_critic_step(
    topology: &NetworkTopology,
    store: &mut ParameterStore,
    critic: &mut CriticNet,
    view: &TransitionView,
    learner: &mut ActorCritic,
) -> Result<f64> {
    check_records(topology, std::slice::from_ref(view.record))?;
    let rec = view.record;
    let gamma = learner.hyper.gamma;

    let (v, grad_v) = critic.value_and_grad(&rec.observation)?;
    let v_next = if view.done {
        0.0
    } else {
        critic.value(view.next_observation)?
    };
    let delta = rec.reward + gamma * v_next - v;

    // Critic trace and accumulation.
    let lam_c = learner.hyper.lambda_critic;
    for (z, g) in learner.traces.critic.iter_mut().zip(&grad_v) {
        *z = gamma * lam_c * *z + g;
    }
    for (acc, z) in learner.accum_critic.iter_mut().zip(&learner.traces.critic) {
        *acc += delta * z;
    }
    learner.pending_critic += 1;

    // Actor step gradient, gated by execution, aggregated into unique space.
    let params = store.expanded();
    let mut g_nu = vec![0.0; topology.n_non_unique()];
    for (i, spec) in topology.coagents.iter().enumerate() {
        if !rec.executions[i] {
            continue;
        }
        let local =
            local_log_prob_gradient(spec, &rec.inputs[i], rec.outputs[i], &params[topology.param_range(i)])?;
        g_nu[topology.param_range(i)].copy_from_slice(&local);
    }
    let g_u = aggregate_unique_gradient(&g_nu, &topology.sharing)?;
    let lam_a = learner.hyper.lambda_actor;
    for (z, g) in learner.traces.actor.iter_mut().zip(&g_u) {
        *z = gamma * lam_a * *z + g;
    }
    for (acc, z) in learner.accum_actor.iter_mut().zip(&learner.traces.actor) {
        *acc += delta * z;
    }
    learner.pending_actor += 1;

    if learner.pending_critic >= learner.hyper.batch_critic {
        let n = learner.pending_critic as f64;
        learner.accum_critic.iter_mut().for_each(|g| *g /= n);
        let grad = std::mem::replace(&mut learner.accum_critic, vec![0.0; critic.param_count()]);
        learner.adam_critic.step(&grad, critic.params_mut())?;
        learner.pending_critic = 0;
    }
    if learner.pending_actor >= learner.hyper.batch_actor {
        let n = learner.pending_actor as f64;
        learner.accum_actor.iter_mut().for_each(|g| *g /= n);
        let grad = std::mem::replace(&mut learner.accum_actor, vec![0.0; topology.n_unique()]);
        let mut result = Ok(());
        store.update_unique(|u| result = learner.adam_actor.step(&grad, u));
        result?;
        learner.pending_actor = 0;
    }
    Ok(delta)
}
