//! Finite MDPs stored as explicit probability tables.

use super::{Action, Environment, MdpSpec, SpaceSpec, StepOutcome, PROB_SUM_TOL};
use crate::error::{Error, Result};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// A finite MDP given by its initial distribution, transition tensor, reward
/// distributions, and terminal flags. Observations are one-hot state vectors.
#[derive(Clone, Debug)]
pub struct TabularMdp {
    pub spec: MdpSpec,
    pub n_states: usize,
    pub n_actions: usize,
    /// `initial[s]` = probability the episode starts in `s`.
    pub initial: Vec<f64>,
    /// `transition[s][a][s2]` = probability of moving to `s2`.
    pub transition: Vec<Vec<Vec<f64>>>,
    /// `reward[s][a][s2]` = finite support of the reward as `(value, prob)` pairs.
    pub reward: Vec<Vec<Vec<Vec<(f64, f64)>>>>,
    /// Entering a terminal state ends the episode (after its reward is paid).
    pub terminal: Vec<bool>,
}

impl TabularMdp {
    pub fn new(
        gamma: f64,
        horizon: usize,
        initial: Vec<f64>,
        transition: Vec<Vec<Vec<f64>>>,
        reward: Vec<Vec<Vec<Vec<(f64, f64)>>>>,
        terminal: Vec<bool>,
    ) -> Result<Self> {
        let n_states = initial.len();
        let n_actions = transition.first().map_or(0, |row| row.len());
        let mdp = Self {
            spec: MdpSpec {
                state_space: SpaceSpec::Finite(n_states),
                action_space: SpaceSpec::Finite(n_actions),
                gamma,
                horizon: Some(horizon),
                enumerable: true,
            },
            n_states,
            n_actions,
            initial,
            transition,
            reward,
            terminal,
        };
        mdp.validate()?;
        Ok(mdp)
    }

    pub fn gamma(&self) -> f64 {
        self.spec.gamma
    }

    pub fn horizon(&self) -> usize {
        self.spec.horizon.expect("tabular MDPs always have a horizon")
    }

    pub fn validate(&self) -> Result<()> {
        self.spec.validate()?;
        if self.n_states == 0 || self.n_actions == 0 {
            return Err(Error::Validation("state and action sets must be non-empty".into()));
        }
        check_distribution("initial distribution", &self.initial)?;
        if self.transition.len() != self.n_states
            || self.reward.len() != self.n_states
            || self.terminal.len() != self.n_states
        {
            return Err(Error::Validation("table sizes disagree with the state count".into()));
        }
        for s in 0..self.n_states {
            if self.transition[s].len() != self.n_actions || self.reward[s].len() != self.n_actions {
                return Err(Error::Validation(format!(
                    "state {s}: tables disagree with the action count"
                )));
            }
            for a in 0..self.n_actions {
                let row = &self.transition[s][a];
                if row.len() != self.n_states {
                    return Err(Error::Validation(format!(
                        "transition row ({s}, {a}) has wrong length"
                    )));
                }
                check_distribution(&format!("transition row ({s}, {a})"), row)?;
                if self.reward[s][a].len() != self.n_states {
                    return Err(Error::Validation(format!(
                        "reward table ({s}, {a}) has wrong length"
                    )));
                }
                for s2 in 0..self.n_states {
                    if row[s2] > 0.0 {
                        let support = &self.reward[s][a][s2];
                        if support.is_empty() {
                            return Err(Error::Validation(format!(
                                "reachable transition ({s}, {a}, {s2}) has no reward support"
                            )));
                        }
                        let probs: Vec<f64> = support.iter().map(|&(_, p)| p).collect();
                        check_distribution(&format!("reward support ({s}, {a}, {s2})"), &probs)?;
                    }
                }
            }
        }
        Ok(())
    }

    /// Two-state chain. Action 1 moves toward state 1, action 0 back to
    /// state 0; every transition that lands in state 1 pays reward 1, all
    /// others pay 0. Episodes start in state 0.
    pub fn chain2(gamma: f64, horizon: usize) -> Result<Self> {
        let n = 2;
        let mut transition = vec![vec![vec![0.0; n]; 2]; n];
        let mut reward = vec![vec![vec![Vec::new(); n]; 2]; n];
        for s in 0..n {
            for a in 0..2 {
                let s2 = if a == 1 { 1 } else { 0 };
                transition[s][a][s2] = 1.0;
                for t in 0..n {
                    let r = if t == 1 { 1.0 } else { 0.0 };
                    reward[s][a][t] = vec![(r, 1.0)];
                }
            }
        }
        Self::new(gamma, horizon, vec![1.0, 0.0], transition, reward, vec![false, false])
    }

    /// 5x5 gridworld. Actions 0..4 move up/down/left/right; bumping a wall
    /// leaves the state unchanged. Every step costs -1 except entering the
    /// goal cell (bottom-right), which pays 0 and ends the episode. Episodes
    /// start in the top-left corner with horizon 100.
    pub fn gridworld5(gamma: f64) -> Result<Self> {
        const SIDE: usize = 5;
        let n = SIDE * SIDE;
        let goal = n - 1;
        let mut transition = vec![vec![vec![0.0; n]; 4]; n];
        let mut reward = vec![vec![vec![Vec::new(); n]; 4]; n];
        for s in 0..n {
            let (row, col) = (s / SIDE, s % SIDE);
            for a in 0..4 {
                let (r2, c2) = match a {
                    0 => (row.saturating_sub(1), col),
                    1 => ((row + 1).min(SIDE - 1), col),
                    2 => (row, col.saturating_sub(1)),
                    _ => (row, (col + 1).min(SIDE - 1)),
                };
                let s2 = r2 * SIDE + c2;
                transition[s][a][s2] = 1.0;
                for t in 0..n {
                    let r = if t == goal { 0.0 } else { -1.0 };
                    reward[s][a][t] = vec![(r, 1.0)];
                }
            }
        }
        let mut initial = vec![0.0; n];
        initial[0] = 1.0;
        let mut terminal = vec![false; n];
        terminal[goal] = true;
        Self::new(gamma, 100, initial, transition, reward, terminal)
    }

    pub fn one_hot(&self, state: usize) -> Vec<f64> {
        let mut obs = vec![0.0; self.n_states];
        obs[state] = 1.0;
        obs
    }

    pub fn sample_initial(&self, rng: &mut ChaCha8Rng) -> usize {
        sample_index(&self.initial, rng)
    }

    /// Sample the next state and reward for `(state, action)`.
    pub fn sample_transition(
        &self,
        state: usize,
        action: usize,
        rng: &mut ChaCha8Rng,
    ) -> (usize, f64) {
        let next = sample_index(&self.transition[state][action], rng);
        let support = &self.reward[state][action][next];
        let reward = if support.len() == 1 {
            support[0].0
        } else {
            let mut u: f64 = rng.random();
            let mut value = support[support.len() - 1].0;
            for &(v, p) in support {
                if u < p {
                    value = v;
                    break;
                }
                u -= p;
            }
            value
        };
        (next, reward)
    }
}

fn check_distribution(what: &str, probs: &[f64]) -> Result<()> {
    for &p in probs {
        if !(0.0..=1.0).contains(&p) || !p.is_finite() {
            return Err(Error::Validation(format!("{what}: probability {p} out of range")));
        }
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > PROB_SUM_TOL {
        return Err(Error::Validation(format!("{what}: probabilities sum to {total}, not 1")));
    }
    Ok(())
}

fn sample_index(probs: &[f64], rng: &mut ChaCha8Rng) -> usize {
    let mut u: f64 = rng.random();
    for (i, &p) in probs.iter().enumerate() {
        if u < p {
            return i;
        }
        u -= p;
    }
    // Guard against accumulated rounding: fall back to the last positive entry.
    probs.iter().rposition(|&p| p > 0.0).unwrap_or(probs.len() - 1)
}

/// Episode simulator over a [`TabularMdp`]. Observations are one-hot states.
pub struct TabularEnv {
    mdp: TabularMdp,
    state: usize,
    steps: usize,
    done: bool,
}

impl TabularEnv {
    pub fn new(mdp: TabularMdp) -> Self {
        Self {
            mdp,
            state: 0,
            steps: 0,
            done: true,
        }
    }

    pub fn mdp(&self) -> &TabularMdp {
        &self.mdp
    }

    pub fn state(&self) -> usize {
        self.state
    }
}

impl Environment for TabularEnv {
    fn spec(&self) -> &MdpSpec {
        &self.mdp.spec
    }

    fn observation_dim(&self) -> usize {
        self.mdp.n_states
    }

    fn reset(&mut self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        self.state = self.mdp.sample_initial(rng);
        self.steps = 0;
        self.done = false;
        self.mdp.one_hot(self.state)
    }

    fn step(&mut self, action: &Action, rng: &mut ChaCha8Rng) -> Result<StepOutcome> {
        if self.done {
            return Err(Error::InvalidInput("step called on a finished episode".into()));
        }
        let a = match action {
            Action::Discrete(a) => *a,
            Action::Continuous(_) => {
                return Err(Error::InvalidInput(
                    "tabular environments take discrete actions".into(),
                ))
            }
        };
        if a >= self.mdp.n_actions {
            return Err(Error::InvalidInput(format!(
                "action {a} out of range (n_actions = {})",
                self.mdp.n_actions
            )));
        }
        let (next, reward) = self.mdp.sample_transition(self.state, a, rng);
        self.state = next;
        self.steps += 1;
        self.done = self.mdp.terminal[next] || self.steps >= self.mdp.horizon();
        Ok(StepOutcome {
            observation: self.mdp.one_hot(next),
            reward,
            done: self.done,
        })
    }
}
