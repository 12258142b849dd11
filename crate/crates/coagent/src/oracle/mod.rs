//! Exact reference computations for small instances.
//!
//! Everything here trades speed for certainty: trajectories are enumerated
//! exhaustively (initial states, execution patterns, coagent outputs,
//! transitions, reward draws), objectives are exact sums, and gradients are
//! checked against central finite differences. The learning rules in
//! [`crate::learn`] are validated against these routines rather than against
//! themselves.

pub mod verify;

use crate::error::{Error, Result};
use crate::mdp::{discounted_return, Action, AtomicStepRecord, TabularMdp};
use crate::net::{
    coagent_policy_probs, execution_probability, ActionAssembler, NetworkTopology, ParameterStore,
};

/// Hard cap on enumeration work for one exact computation.
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

/// Central-difference step used by gradient checks.
pub const FD_STEP: f64 = 1e-5;

/// Leaf probabilities of an enumeration must sum to one within this.
pub const LEAF_PROB_TOL: f64 = 1e-10;

/// `|a - b| / max(|a|, |b|, 1e-8)`.
pub fn relative_error(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-8)
}

/// Worst per-coordinate [`relative_error`] between two vectors.
pub fn max_relative_error(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::InvalidInput(format!(
            "vectors have lengths {} and {}",
            a.len(),
            b.len()
        )));
    }
    Ok(a.iter()
        .zip(b)
        .map(|(&x, &y)| relative_error(x, y))
        .fold(0.0, f64::max))
}

struct Enumerator<'a, F> {
    mdp: &'a TabularMdp,
    topology: &'a NetworkTopology,
    store: &'a ParameterStore,
    budget: u64,
    nodes: u64,
    visitor: F,
}

impl<'a, F: FnMut(&[AtomicStepRecord], f64)> Enumerator<'a, F> {
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded {
                nodes: self.nodes,
                budget: self.budget,
            });
        }
        Ok(())
    }

    fn run(&mut self) -> Result<()> {
        for s0 in 0..self.mdp.n_states {
            let p0 = self.mdp.initial[s0];
            if p0 == 0.0 {
                continue;
            }
            let mut steps = Vec::with_capacity(self.mdp.horizon());
            self.step(s0, 0, None, p0, &mut steps)?;
        }
        Ok(())
    }

    fn step(
        &mut self,
        state: usize,
        t: usize,
        held: Option<&[usize]>,
        prob: f64,
        steps: &mut Vec<AtomicStepRecord>,
    ) -> Result<()> {
        self.tick()?;
        if t >= self.mdp.horizon() {
            (self.visitor)(steps, prob);
            return Ok(());
        }
        let m = self.topology.m();
        let obs = self.mdp.one_hot(state);
        let mut outputs: Vec<usize> = held.map(|h| h.to_vec()).unwrap_or_else(|| vec![0; m]);
        let mut executions = vec![false; m];
        let mut inputs = vec![Vec::new(); m];
        self.coagent(
            0, state, t, held, &obs, prob, &mut outputs, &mut executions, &mut inputs, steps,
        )
    }

    #[allow(clippy::too_many_arguments)]
    fn coagent(
        &mut self,
        i: usize,
        state: usize,
        t: usize,
        held: Option<&[usize]>,
        obs: &[f64],
        prob: f64,
        outputs: &mut Vec<usize>,
        executions: &mut Vec<bool>,
        inputs: &mut Vec<Vec<f64>>,
        steps: &mut Vec<AtomicStepRecord>,
    ) -> Result<()> {
        if i == self.topology.m() {
            return self.transition(state, t, obs, prob, outputs, executions, inputs, steps);
        }
        self.tick()?;
        let spec = &self.topology.coagents[i];
        let x = self.topology.gather_input(i, obs, outputs);
        // The first step of an episode always executes.
        let p_exec = if held.is_none() {
            1.0
        } else {
            execution_probability(spec, &x)
        };
        inputs[i] = x.clone();

        if p_exec > 0.0 {
            let params = self.store.expanded();
            let probs = coagent_policy_probs(spec, &x, &params[self.topology.param_range(i)])?;
            executions[i] = true;
            let saved = outputs[i];
            for (u, &pu) in probs.iter().enumerate() {
                if pu == 0.0 {
                    continue;
                }
                outputs[i] = u;
                self.coagent(
                    i + 1,
                    state,
                    t,
                    held,
                    obs,
                    prob * p_exec * pu,
                    outputs,
                    executions,
                    inputs,
                    steps,
                )?;
            }
            outputs[i] = saved;
        }
        if held.is_some() && p_exec < 1.0 {
            executions[i] = false;
            self.coagent(
                i + 1,
                state,
                t,
                held,
                obs,
                prob * (1.0 - p_exec),
                outputs,
                executions,
                inputs,
                steps,
            )?;
        }
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn transition(
        &mut self,
        state: usize,
        t: usize,
        obs: &[f64],
        prob: f64,
        outputs: &mut Vec<usize>,
        executions: &mut Vec<bool>,
        inputs: &mut Vec<Vec<f64>>,
        steps: &mut Vec<AtomicStepRecord>,
    ) -> Result<()> {
        let action = outputs[self.topology.m() - 1];
        for s2 in 0..self.mdp.n_states {
            let p_next = self.mdp.transition[state][action][s2];
            if p_next == 0.0 {
                continue;
            }
            for &(reward, p_reward) in &self.mdp.reward[state][action][s2] {
                if p_reward == 0.0 {
                    continue;
                }
                self.tick()?;
                let leaf_prob = prob * p_next * p_reward;
                steps.push(AtomicStepRecord {
                    observation: obs.to_vec(),
                    executions: executions.clone(),
                    inputs: inputs.clone(),
                    outputs: outputs.clone(),
                    action: Action::Discrete(action),
                    reward,
                });
                if self.mdp.terminal[s2] {
                    (self.visitor)(steps, leaf_prob);
                } else {
                    let held: Vec<usize> = outputs.clone();
                    self.step(s2, t + 1, Some(&held), leaf_prob, steps)?;
                }
                steps.pop();
            }
        }
        Ok(())
    }
}

fn check_enumerable(mdp: &TabularMdp, topology: &NetworkTopology) -> Result<()> {
    if !mdp.spec.enumerable {
        return Err(Error::InvalidInput(
            "exact enumeration needs an enumerable MDP".into(),
        ));
    }
    if topology.assembler != ActionAssembler::Discrete {
        return Err(Error::InvalidInput(
            "exact enumeration supports discrete-action networks only".into(),
        ));
    }
    let action_outputs = topology.coagents[topology.m() - 1].n_outputs();
    if action_outputs != mdp.n_actions {
        return Err(Error::InvalidInput(format!(
            "action coagent has {action_outputs} outputs, the MDP has {} actions",
            mdp.n_actions
        )));
    }
    Ok(())
}

/// Visit every trajectory the (network, MDP) pair can produce, together with
/// its exact probability. Returns the number of enumeration nodes visited.
pub fn for_each_trajectory<F: FnMut(&[AtomicStepRecord], f64)>(
    mdp: &TabularMdp,
    topology: &NetworkTopology,
    store: &ParameterStore,
    budget: u64,
    visitor: F,
) -> Result<u64> {
    check_enumerable(mdp, topology)?;
    let mut e = Enumerator {
        mdp,
        topology,
        store,
        budget,
        nodes: 0,
        visitor,
    };
    e.run()?;
    Ok(e.nodes)
}

/// Exact objective `J = E[G_0]`: the probability-weighted sum of discounted
/// episode returns over all trajectories.
pub fn exact_objective(
    mdp: &TabularMdp,
    topology: &NetworkTopology,
    store: &ParameterStore,
) -> Result<f64> {
    let gamma = mdp.gamma();
    let mut j = 0.0;
    let mut mass = 0.0;
    for_each_trajectory(mdp, topology, store, DEFAULT_NODE_BUDGET, |steps, p| {
        let g0 = if steps.is_empty() {
            0.0
        } else {
            let rewards: Vec<f64> = steps.iter().map(|s| s.reward).collect();
            discounted_return(&rewards, gamma, 0).expect("non-empty rewards")
        };
        j += p * g0;
        mass += p;
    })?;
    if (mass - 1.0).abs() > LEAF_PROB_TOL {
        return Err(Error::Validation(format!(
            "trajectory probabilities sum to {mass}, not 1"
        )));
    }
    Ok(j)
}

/// Exact expectation of the whole-episode gradient estimate in unique space:
/// the probability-weighted sum of [`crate::learn::reinforce_gradient`] over
/// all trajectories.
pub fn exact_estimator_expectation(
    mdp: &TabularMdp,
    topology: &NetworkTopology,
    store: &ParameterStore,
) -> Result<Vec<f64>> {
    let gamma = mdp.gamma();
    let mut expect = vec![0.0; topology.n_unique()];
    let mut mass = 0.0;
    let mut inner: Result<()> = Ok(());
    for_each_trajectory(mdp, topology, store, DEFAULT_NODE_BUDGET, |steps, p| {
        if inner.is_err() {
            return;
        }
        match crate::learn::reinforce_gradient(topology, store, steps, gamma) {
            Ok(bundle) => {
                for (e, g) in expect.iter_mut().zip(&bundle.unique) {
                    *e += p * g;
                }
                mass += p;
            }
            Err(err) => inner = Err(err),
        }
    })?;
    inner?;
    if (mass - 1.0).abs() > LEAF_PROB_TOL {
        return Err(Error::Validation(format!(
            "trajectory probabilities sum to {mass}, not 1"
        )));
    }
    Ok(expect)
}

/// Central finite differences of a scalar function of the parameter vector:
/// coordinate `k` gets `(f(theta + h e_k) - f(theta - h e_k)) / (2h)`.
pub fn finite_difference_gradient<F>(mut objective: F, theta: &[f64], h: f64) -> Result<Vec<f64>>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    if !(h > 0.0) {
        return Err(Error::InvalidInput(format!("step size must be positive, got {h}")));
    }
    let mut work = theta.to_vec();
    let mut grad = Vec::with_capacity(theta.len());
    for k in 0..theta.len() {
        work[k] = theta[k] + h;
        let up = objective(&work)?;
        work[k] = theta[k] - h;
        let down = objective(&work)?;
        work[k] = theta[k];
        grad.push((up - down) / (2.0 * h));
    }
    Ok(grad)
}

/// Finite difference of the exact objective with respect to the unique
/// parameters — the ground truth that gradient estimators are tested against.
pub fn objective_fd_gradient(
    mdp: &TabularMdp,
    topology: &NetworkTopology,
    store: &ParameterStore,
    h: f64,
) -> Result<Vec<f64>> {
    let mut scratch = store.clone();
    finite_difference_gradient(
        |theta| {
            scratch.set_unique(theta)?;
            exact_objective(mdp, topology, &scratch)
        },
        store.unique(),
        h,
    )
}

fn mean_reward(mdp: &TabularMdp, s: usize, a: usize, s2: usize) -> f64 {
    mdp.reward[s][a][s2].iter().map(|&(r, p)| r * p).sum()
}

fn backward_induction(mdp: &TabularMdp, optimal: bool) -> f64 {
    let n = mdp.n_states;
    let gamma = mdp.gamma();
    // v[s] = value of s with k steps remaining; terminal states stay 0.
    let mut v = vec![0.0; n];
    for _ in 0..mdp.horizon() {
        let mut next = vec![0.0; n];
        for s in 0..n {
            if mdp.terminal[s] {
                continue;
            }
            let action_value = |a: usize| -> f64 {
                (0..n)
                    .map(|s2| {
                        mdp.transition[s][a][s2] * (mean_reward(mdp, s, a, s2) + gamma * v[s2])
                    })
                    .sum()
            };
            next[s] = if optimal {
                (0..mdp.n_actions)
                    .map(action_value)
                    .fold(f64::NEG_INFINITY, f64::max)
            } else {
                (0..mdp.n_actions).map(action_value).sum::<f64>() / mdp.n_actions as f64
            };
        }
        v = next;
    }
    (0..n).map(|s| mdp.initial[s] * v[s]).sum()
}

/// Best achievable expected discounted return, by finite-horizon value
/// iteration (backward induction).
pub fn optimal_return(mdp: &TabularMdp) -> f64 {
    backward_induction(mdp, true)
}

/// Expected discounted return of the uniform-random policy, by finite-horizon
/// policy evaluation.
pub fn uniform_random_return(mdp: &TabularMdp) -> f64 {
    backward_induction(mdp, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learn::reinforce_gradient;
    use crate::net::{
        build_network, ActionAssembler, CoagentSpec, ExecutionRule, InputSource, NetworkConfig,
    };
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bias_only_net(n_actions: usize, sharing: Option<Vec<usize>>) -> NetworkConfig {
        NetworkConfig {
            obs_dim: 1,
            coagents: vec![CoagentSpec {
                inputs: vec![],
                outputs: (0..n_actions).map(|v| v as f64).collect(),
                execution: ExecutionRule::Always,
            }],
            action_coagents: 1,
            assembler: ActionAssembler::Discrete,
            sharing,
        }
    }

    fn constant_reward_mdp(reward_by_action: &[f64], horizon: usize, gamma: f64) -> TabularMdp {
        let n_actions = reward_by_action.len();
        let transition = vec![vec![vec![1.0]; n_actions]; 1];
        let reward: Vec<Vec<Vec<Vec<(f64, f64)>>>> = vec![reward_by_action
            .iter()
            .map(|&r| vec![vec![(r, 1.0)]])
            .collect()];
        TabularMdp::new(gamma, horizon, vec![1.0], transition, reward, vec![false]).unwrap()
    }

    #[test]
    fn constant_reward_objective_is_parameter_independent() {
        let mdp = constant_reward_mdp(&[1.0, 1.0], 1, 0.9);
        let (topology, mut store) = build_network(&bias_only_net(2, None)).unwrap();
        for theta in [vec![0.0; 2], vec![1.0, -2.0]] {
            store.set_unique(&theta).unwrap();
            let j = exact_objective(&mdp, &topology, &store).unwrap();
            assert!((j - 1.0).abs() <= 1e-12, "J = {j}");
        }
    }

    #[test]
    fn uniform_policy_averages_the_action_rewards() {
        let mdp = constant_reward_mdp(&[0.0, 1.0], 1, 0.9);
        let (topology, store) = build_network(&bias_only_net(2, None)).unwrap();
        let j = exact_objective(&mdp, &topology, &store).unwrap();
        assert!((j - 0.5).abs() <= 1e-12, "J = {j}");
    }

    #[test]
    fn objective_matches_monte_carlo() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let mdp = verify::random_two_state_mdp(&mut rng, 3, 2);
        let config = verify::verify_network(verify::VerifyMode::SyncIndependent).unwrap();
        let (topology, mut store) = build_network(&config).unwrap();
        let theta: Vec<f64> = (0..topology.n_unique())
            .map(|_| rng.random_range(-1.0..=1.0))
            .collect();
        store.set_unique(&theta).unwrap();
        let j = exact_objective(&mdp, &topology, &store).unwrap();

        let episodes = 200_000;
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        let mut env_rng = ChaCha8Rng::seed_from_u64(78);
        let mut policy_rng = ChaCha8Rng::seed_from_u64(79);
        let mut exec_rng = ChaCha8Rng::seed_from_u64(80);
        let mut env = crate::mdp::TabularEnv::new(mdp.clone());
        for _ in 0..episodes {
            let mut obs = crate::mdp::Environment::reset(&mut env, &mut env_rng);
            let mut held: Option<Vec<usize>> = None;
            let mut rewards = Vec::new();
            loop {
                let (action, rec) = crate::net::network_step(
                    &topology,
                    &store,
                    &obs,
                    held.as_deref(),
                    &mut policy_rng,
                    &mut exec_rng,
                )
                .unwrap();
                let out = crate::mdp::Environment::step(&mut env, &action, &mut env_rng).unwrap();
                rewards.push(out.reward);
                held = Some(rec.outputs);
                obs = out.observation;
                if out.done {
                    break;
                }
            }
            let g0 = discounted_return(&rewards, mdp.gamma(), 0).unwrap();
            sum += g0;
            sum_sq += g0 * g0;
        }
        let mean = sum / episodes as f64;
        let var = (sum_sq / episodes as f64 - mean * mean).max(0.0);
        let se = (var / episodes as f64).sqrt();
        assert!(
            (mean - j).abs() <= 4.0 * se.max(1e-4),
            "monte carlo {mean} vs exact {j} (se {se})"
        );
    }

    #[test]
    fn estimator_expectation_is_zero_when_rewards_are_zero() {
        let mdp = constant_reward_mdp(&[0.0, 0.0], 3, 0.9);
        let (topology, mut store) = build_network(&bias_only_net(2, None)).unwrap();
        store.set_unique(&[0.3, -0.2]).unwrap();
        let expect = exact_estimator_expectation(&mdp, &topology, &store).unwrap();
        assert!(expect.iter().all(|&g| g == 0.0));
    }

    #[test]
    fn per_coagent_assembly_matches_the_unique_expectation() {
        // With identity sharing, summing per-coagent expectations and
        // concatenating must reproduce exact_estimator_expectation bitwise.
        let mut rng = ChaCha8Rng::seed_from_u64(90);
        let mdp = verify::random_two_state_mdp(&mut rng, 2, 2);
        let config = verify::verify_network(verify::VerifyMode::SyncIndependent).unwrap();
        let (topology, mut store) = build_network(&config).unwrap();
        let theta: Vec<f64> = (0..topology.n_unique())
            .map(|_| rng.random_range(-1.0..=1.0))
            .collect();
        store.set_unique(&theta).unwrap();

        let route_a = exact_estimator_expectation(&mdp, &topology, &store).unwrap();

        let mut blocks: Vec<Vec<f64>> = topology
            .coagents
            .iter()
            .map(|c| vec![0.0; c.param_count()])
            .collect();
        for_each_trajectory(&mdp, &topology, &store, DEFAULT_NODE_BUDGET, |steps, p| {
            let bundle = reinforce_gradient(&topology, &store, steps, mdp.gamma()).unwrap();
            for (block, g) in blocks.iter_mut().zip(&bundle.per_coagent) {
                for (acc, gi) in block.iter_mut().zip(g) {
                    *acc += p * gi;
                }
            }
        })
        .unwrap();
        let route_b: Vec<f64> = blocks.into_iter().flatten().collect();
        assert_eq!(route_a, route_b);
    }

    #[test]
    fn leaf_probabilities_sum_to_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(91);
        for mode in [
            verify::VerifyMode::SyncIndependent,
            verify::VerifyMode::AsyncHidden,
        ] {
            let mdp = verify::random_two_state_mdp(&mut rng, 3, 2);
            let (topology, mut store) =
                build_network(&verify::verify_network(mode).unwrap()).unwrap();
            let theta: Vec<f64> = (0..topology.n_unique())
                .map(|_| rng.random_range(-1.0..=1.0))
                .collect();
            store.set_unique(&theta).unwrap();
            let mut mass = 0.0;
            for_each_trajectory(&mdp, &topology, &store, DEFAULT_NODE_BUDGET, |_, p| mass += p)
                .unwrap();
            assert!((mass - 1.0).abs() <= LEAF_PROB_TOL, "mass {mass}");
        }
    }

    #[test]
    fn objective_is_stable_under_leaf_reordering() {
        let mut rng = ChaCha8Rng::seed_from_u64(92);
        let mdp = verify::random_two_state_mdp(&mut rng, 3, 2);
        let (topology, mut store) =
            build_network(&verify::verify_network(verify::VerifyMode::AsyncHidden).unwrap())
                .unwrap();
        let theta: Vec<f64> = (0..topology.n_unique())
            .map(|_| rng.random_range(-1.0..=1.0))
            .collect();
        store.set_unique(&theta).unwrap();
        let mut leaves = Vec::new();
        for_each_trajectory(&mdp, &topology, &store, DEFAULT_NODE_BUDGET, |steps, p| {
            let rewards: Vec<f64> = steps.iter().map(|s| s.reward).collect();
            leaves.push((p, discounted_return(&rewards, mdp.gamma(), 0).unwrap()));
        })
        .unwrap();
        let forward: f64 = leaves.iter().map(|&(p, g)| p * g).sum();
        let backward: f64 = leaves.iter().rev().map(|&(p, g)| p * g).sum();
        assert!((forward - backward).abs() <= 1e-12);
    }

    #[test]
    fn terminal_states_cut_enumeration_short() {
        // Two states; action 1 jumps to the terminal state 1 with reward 5.
        let transition = vec![
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
        ];
        let mut reward = vec![vec![vec![vec![(0.0, 1.0)]; 2]; 2]; 2];
        reward[0][1][1] = vec![(5.0, 1.0)];
        let mdp = TabularMdp::new(
            0.5,
            4,
            vec![1.0, 0.0],
            transition,
            reward,
            vec![false, true],
        )
        .unwrap();
        let config = NetworkConfig {
            obs_dim: 2,
            coagents: vec![CoagentSpec {
                inputs: vec![InputSource::Observation { start: 0, len: 2 }],
                outputs: vec![0.0, 1.0],
                execution: ExecutionRule::Always,
            }],
            action_coagents: 1,
            assembler: ActionAssembler::Discrete,
            sharing: None,
        };
        let (topology, store) = build_network(&config).unwrap();
        let mut shortest = usize::MAX;
        let mut mass = 0.0;
        for_each_trajectory(&mdp, &topology, &store, DEFAULT_NODE_BUDGET, |steps, p| {
            shortest = shortest.min(steps.len());
            mass += p;
        })
        .unwrap();
        assert_eq!(shortest, 1, "jumping straight to the terminal state ends the episode");
        assert!((mass - 1.0).abs() <= LEAF_PROB_TOL);
        // Uniform policy: J = E[G_0] where hitting at step k pays 5 * 0.5^k.
        // P(first 1 at step k) = 0.5^(k+1) for k < 4 plus the all-0 tail.
        let j = exact_objective(&mdp, &topology, &store).unwrap();
        let expect: f64 = (0..4).map(|k| 0.5f64.powi(k + 1) * 5.0 * 0.5f64.powi(k)).sum();
        assert!((j - expect).abs() <= 1e-12, "J = {j} vs {expect}");
    }

    #[test]
    fn node_budget_is_enforced() {
        let mut rng = ChaCha8Rng::seed_from_u64(93);
        let mdp = verify::random_two_state_mdp(&mut rng, 3, 2);
        let (topology, store) =
            build_network(&verify::verify_network(verify::VerifyMode::SyncIndependent).unwrap())
                .unwrap();
        let result = for_each_trajectory(&mdp, &topology, &store, 10, |_, _| {});
        assert!(matches!(result, Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn finite_differences_on_simple_functions() {
        let zero = finite_difference_gradient(|_| Ok(0.0), &[1.0, 2.0], 1e-5).unwrap();
        assert_eq!(zero, vec![0.0, 0.0]);
        // d/dx x^2 at 3 is 6, and central differences are exact on quadratics.
        let quad = finite_difference_gradient(|t| Ok(t[0] * t[0]), &[3.0], 1e-5).unwrap();
        assert!((quad[0] - 6.0).abs() <= 1e-9, "fd = {}", quad[0]);
        assert!(finite_difference_gradient(|_| Ok(0.0), &[1.0], 0.0).is_err());
    }

    #[test]
    fn chain_optimal_return_matches_hand_value() {
        // Always-right on the two-state chain pays 1 every step:
        // J* = 1 + 0.5 + 0.25 + 0.125 with gamma = 0.5, horizon 4.
        let mdp = TabularMdp::chain2(0.5, 4).unwrap();
        assert!((optimal_return(&mdp) - 1.875).abs() <= 1e-12);
        let uniform = uniform_random_return(&mdp);
        assert!(uniform < 1.875);
        assert!(uniform > 0.0);
    }

    #[test]
    fn gridworld_optimal_return_is_minus_seven_undiscounted() {
        let mdp = TabularMdp::gridworld5(1.0).unwrap();
        assert!((optimal_return(&mdp) - (-7.0)).abs() <= 1e-9);
        assert!(uniform_random_return(&mdp) < optimal_return(&mdp));
    }

    #[test]
    fn continuous_mdps_are_rejected() {
        let mdp = TabularMdp::chain2(0.9, 4).unwrap();
        let config = NetworkConfig {
            obs_dim: 2,
            coagents: vec![CoagentSpec {
                inputs: vec![InputSource::Observation { start: 0, len: 2 }],
                outputs: vec![-1.0, 1.0],
                execution: ExecutionRule::Always,
            }],
            action_coagents: 1,
            assembler: ActionAssembler::ContinuousBins,
            sharing: None,
        };
        let (topology, store) = build_network(&config).unwrap();
        assert!(exact_objective(&mdp, &topology, &store).is_err());
    }
}
