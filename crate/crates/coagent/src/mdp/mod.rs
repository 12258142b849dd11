//! Environments, trajectories, and discounted returns.

mod pointmass;
mod tabular;

pub use pointmass::PointMassEnv;
pub use tabular::{TabularEnv, TabularMdp};

use crate::error::{Error, Result};
use rand_chacha::ChaCha8Rng;

/// Tolerance for probability rows summing to one.
pub const PROB_SUM_TOL: f64 = 1e-12;

/// State or action space description.
#[derive(Clone, Debug, PartialEq)]
pub enum SpaceSpec {
    /// A finite set identified by indices `0..n`.
    Finite(usize),
    /// A real-valued box of the given dimension.
    Real(usize),
}

/// Static description of an MDP.
#[derive(Clone, Debug)]
pub struct MdpSpec {
    pub state_space: SpaceSpec,
    pub action_space: SpaceSpec,
    /// Discount factor in `[0, 1]`.
    pub gamma: f64,
    /// Maximum episode length; `None` means unbounded.
    pub horizon: Option<usize>,
    /// Whether the environment is small enough for exhaustive enumeration.
    pub enumerable: bool,
}

impl MdpSpec {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.gamma) {
            return Err(Error::Validation(format!(
                "gamma must lie in [0, 1], got {}",
                self.gamma
            )));
        }
        if self.enumerable {
            let finite = matches!(self.state_space, SpaceSpec::Finite(_))
                && matches!(self.action_space, SpaceSpec::Finite(_));
            if !finite || self.horizon.is_none() {
                return Err(Error::Validation(
                    "enumerable MDPs need finite spaces and a finite horizon".into(),
                ));
            }
        }
        Ok(())
    }
}

/// An action handed to an environment: a discrete index or a real vector.
#[derive(Clone, Debug, PartialEq)]
pub enum Action {
    Discrete(usize),
    Continuous(Vec<f64>),
}

/// Result of one environment step.
#[derive(Clone, Debug)]
pub struct StepOutcome {
    pub observation: Vec<f64>,
    pub reward: f64,
    pub done: bool,
}

/// A simulatable environment. Sampling draws only from the supplied RNG so
/// episodes are reproducible from the seed alone.
pub trait Environment {
    fn spec(&self) -> &MdpSpec;

    /// Length of the observation vectors produced by `reset` and `step`.
    fn observation_dim(&self) -> usize;

    /// Start a new episode and return the initial observation.
    fn reset(&mut self, rng: &mut ChaCha8Rng) -> Vec<f64>;

    /// Advance one step. Errors if the action is malformed or the episode
    /// already finished.
    fn step(&mut self, action: &Action, rng: &mut ChaCha8Rng) -> Result<StepOutcome>;
}

/// Build a built-in environment by name: `"chain2"`, `"gridworld5"`, or
/// `"pointmass"`. The discount factor is stored in the environment's
/// [`MdpSpec`] and used when computing episode returns.
pub fn make_env(name: &str, gamma: f64) -> Result<Box<dyn Environment>> {
    match name {
        "chain2" => Ok(Box::new(TabularEnv::new(TabularMdp::chain2(gamma, 4)?))),
        "gridworld5" => Ok(Box::new(TabularEnv::new(TabularMdp::gridworld5(gamma)?))),
        "pointmass" => Ok(Box::new(PointMassEnv::new(gamma))),
        other => Err(Error::InvalidInput(format!(
            "unknown environment '{other}' (expected chain2, gridworld5, or pointmass)"
        ))),
    }
}

/// Everything observed at one atomic time step of a coagent-network rollout.
#[derive(Clone, Debug)]
pub struct AtomicStepRecord {
    /// Observation the network saw (post-normalisation if enabled).
    pub observation: Vec<f64>,
    /// Which coagents executed this step (length = number of coagents).
    pub executions: Vec<bool>,
    /// Input vector each coagent saw (its observation slices plus upstream
    /// coagent outputs). Recorded for executing and held coagents alike.
    pub inputs: Vec<Vec<f64>>,
    /// Output class index each coagent holds after this step.
    pub outputs: Vec<usize>,
    /// The action assembled from the designated action coagents.
    pub action: Action,
    /// Reward received from the environment for this step.
    pub reward: f64,
}

/// A completed episode.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub steps: Vec<AtomicStepRecord>,
    /// Discounted return from the first step.
    pub episode_return: f64,
}

impl Trajectory {
    pub fn from_steps(steps: Vec<AtomicStepRecord>, gamma: f64) -> Result<Self> {
        let rewards: Vec<f64> = steps.iter().map(|s| s.reward).collect();
        let episode_return = if rewards.is_empty() {
            0.0
        } else {
            discounted_return(&rewards, gamma, 0)?
        };
        Ok(Self {
            steps,
            episode_return,
        })
    }

    /// Check the hold semantics: on the first step every coagent executes,
    /// and on later steps a non-executing coagent's output equals its output
    /// on the previous step.
    pub fn validate_hold_semantics(&self) -> Result<()> {
        for (t, step) in self.steps.iter().enumerate() {
            if t == 0 {
                if step.executions.iter().any(|&e| !e) {
                    return Err(Error::Validation(
                        "all coagents must execute on the first step".into(),
                    ));
                }
                continue;
            }
            let prev = &self.steps[t - 1];
            for (i, &exec) in step.executions.iter().enumerate() {
                if !exec && step.outputs[i] != prev.outputs[i] {
                    return Err(Error::Validation(format!(
                        "coagent {i} did not execute at step {t} but its output changed"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Discounted return from step `t`: `sum_k gamma^k * rewards[t + k]`.
pub fn discounted_return(rewards: &[f64], gamma: f64, t: usize) -> Result<f64> {
    if t >= rewards.len() {
        return Err(Error::InvalidInput(format!(
            "return requested from step {t} but the episode has {} rewards",
            rewards.len()
        )));
    }
    let mut total = 0.0;
    let mut discount = 1.0;
    for &r in &rewards[t..] {
        total += discount * r;
        discount *= gamma;
    }
    Ok(total)
}

/// All per-step returns `G_t`, computed by the backward recursion
/// `G_t = r_t + gamma * G_{t+1}`.
pub fn returns_from(rewards: &[f64], gamma: f64) -> Vec<f64> {
    let mut returns = vec![0.0; rewards.len()];
    let mut acc = 0.0;
    for t in (0..rewards.len()).rev() {
        acc = rewards[t] + gamma * acc;
        returns[t] = acc;
    }
    returns
}
