//! Standard gradient-verification cases: randomized small MDPs paired with
//! small networks, comparing the exact expectation of the episode gradient
//! estimate against finite differences of the exact objective. Used by both
//! the test suite and the `verify-gradients` CLI command.

use super::{exact_estimator_expectation, max_relative_error, objective_fd_gradient, FD_STEP};
use crate::error::Result;
use crate::mdp::TabularMdp;
use crate::net::{
    binary_outputs, build_network, ActionAssembler, CoagentSpec, ExecutionRule, InputSource,
    NetworkConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Estimator-vs-finite-difference agreement threshold.
pub const GRADIENT_TOL: f64 = 1e-4;

/// The network/sharing/execution combinations that get verified.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyMode {
    /// Hidden binary coagent plus action coagent, everything executes every
    /// step, no sharing.
    SyncIndependent,
    /// Two hidden binary coagents with fully tied parameter blocks.
    SyncTiedPair,
    /// One three-output coagent whose second and third parameters share a
    /// single unique slot.
    SharedThreeSlot,
    /// Like `SyncIndependent` but the hidden coagent executes with
    /// probability 1/2 after the forced first step.
    AsyncHidden,
}

impl VerifyMode {
    pub fn all() -> [VerifyMode; 4] {
        [
            VerifyMode::SyncIndependent,
            VerifyMode::SyncTiedPair,
            VerifyMode::SharedThreeSlot,
            VerifyMode::AsyncHidden,
        ]
    }

    pub fn name(self) -> &'static str {
        match self {
            VerifyMode::SyncIndependent => "sync-independent",
            VerifyMode::SyncTiedPair => "sync-tied-pair",
            VerifyMode::SharedThreeSlot => "shared-three-slot",
            VerifyMode::AsyncHidden => "async-bernoulli",
        }
    }

    fn n_actions(self) -> usize {
        match self {
            VerifyMode::SharedThreeSlot => 3,
            _ => 2,
        }
    }
}

/// One verification case's result.
#[derive(Clone, Debug)]
pub struct VerifyOutcome {
    pub case: String,
    pub max_rel_err: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// A genuinely stochastic two-state MDP: random transition rows, two-point
/// reward supports, random start distribution and discount, no terminals.
pub fn random_two_state_mdp(
    rng: &mut ChaCha8Rng,
    horizon: usize,
    n_actions: usize,
) -> TabularMdp {
    let mut transition = vec![vec![vec![0.0; 2]; n_actions]; 2];
    let mut reward = vec![vec![vec![Vec::new(); 2]; n_actions]; 2];
    for s in 0..2 {
        for a in 0..n_actions {
            let p: f64 = rng.random_range(0.05..=0.95);
            transition[s][a][0] = p;
            transition[s][a][1] = 1.0 - p;
            for s2 in 0..2 {
                let r1: f64 = rng.random_range(-1.0..=1.0);
                let r2: f64 = rng.random_range(-1.0..=1.0);
                let q: f64 = rng.random_range(0.1..=0.9);
                reward[s][a][s2] = vec![(r1, q), (r2, 1.0 - q)];
            }
        }
    }
    let p0: f64 = rng.random_range(0.1..=0.9);
    let gamma: f64 = rng.random_range(0.5..=1.0);
    TabularMdp::new(
        gamma,
        horizon,
        vec![p0, 1.0 - p0],
        transition,
        reward,
        vec![false, false],
    )
    .expect("randomized MDP construction is valid")
}

/// Network blueprint for a verification mode, sized for the two-state MDPs.
pub fn verify_network(mode: VerifyMode) -> Result<NetworkConfig> {
    let obs = InputSource::Observation { start: 0, len: 2 };
    let config = match mode {
        VerifyMode::SyncIndependent | VerifyMode::AsyncHidden => {
            let execution = if mode == VerifyMode::AsyncHidden {
                ExecutionRule::Bernoulli(0.5)
            } else {
                ExecutionRule::Always
            };
            NetworkConfig {
                obs_dim: 2,
                coagents: vec![
                    CoagentSpec {
                        inputs: vec![obs.clone()],
                        outputs: binary_outputs(),
                        execution,
                    },
                    CoagentSpec {
                        inputs: vec![obs, InputSource::Coagent(0)],
                        outputs: vec![0.0, 1.0],
                        execution: ExecutionRule::Always,
                    },
                ],
                action_coagents: 1,
                assembler: ActionAssembler::Discrete,
                sharing: None,
            }
        }
        VerifyMode::SyncTiedPair => {
            let hidden = CoagentSpec {
                inputs: vec![obs.clone()],
                outputs: binary_outputs(),
                execution: ExecutionRule::Always,
            };
            let hidden_size = hidden.param_count(); // 6
            let action = CoagentSpec {
                inputs: vec![obs, InputSource::Coagent(0), InputSource::Coagent(1)],
                outputs: vec![0.0, 1.0],
                execution: ExecutionRule::Always,
            };
            let action_size = action.param_count(); // 10
            let mut assignment: Vec<usize> = Vec::new();
            assignment.extend(0..hidden_size); // first hidden block
            assignment.extend(0..hidden_size); // second block tied to the first
            assignment.extend(hidden_size..hidden_size + action_size);
            NetworkConfig {
                obs_dim: 2,
                coagents: vec![hidden.clone(), hidden, action],
                action_coagents: 1,
                assembler: ActionAssembler::Discrete,
                sharing: Some(assignment),
            }
        }
        VerifyMode::SharedThreeSlot => NetworkConfig {
            obs_dim: 2,
            coagents: vec![CoagentSpec {
                inputs: vec![],
                outputs: vec![0.0, 1.0, 2.0],
                execution: ExecutionRule::Always,
            }],
            action_coagents: 1,
            assembler: ActionAssembler::Discrete,
            sharing: Some(vec![0, 1, 1]),
        },
    };
    Ok(config)
}

/// Run `instances` randomized checks for one mode. Each check draws an MDP
/// and a parameter vector, computes the exact expectation of the episode
/// gradient estimate, and compares it coordinate-wise against central finite
/// differences of the exact objective.
pub fn run_mode_verification(mode: VerifyMode, instances: usize) -> Result<Vec<VerifyOutcome>> {
    let mode_idx = VerifyMode::all()
        .iter()
        .position(|&m| m == mode)
        .expect("mode is listed in all()") as u64;
    let mut outcomes = Vec::new();
    for k in 0..instances {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 * (mode_idx + 1) + k as u64);
        let horizon = 2 + k % 2;
        let mdp = random_two_state_mdp(&mut rng, horizon, mode.n_actions());
        let (topology, mut store) = build_network(&verify_network(mode)?)?;
        let theta: Vec<f64> = (0..topology.n_unique())
            .map(|_| rng.random_range(-1.0..=1.0))
            .collect();
        store.set_unique(&theta)?;
        let estimate = exact_estimator_expectation(&mdp, &topology, &store)?;
        let fd = objective_fd_gradient(&mdp, &topology, &store, FD_STEP)?;
        let max_rel_err = max_relative_error(&estimate, &fd)?;
        outcomes.push(VerifyOutcome {
            case: format!("{} #{k:02}", mode.name()),
            max_rel_err,
            tolerance: GRADIENT_TOL,
            passed: max_rel_err <= GRADIENT_TOL,
        });
    }
    Ok(outcomes)
}

/// Run `instances` randomized checks for every mode.
pub fn run_verification(instances: usize) -> Result<Vec<VerifyOutcome>> {
    let mut outcomes = Vec::new();
    for mode in VerifyMode::all() {
        outcomes.extend(run_mode_verification(mode, instances)?);
    }
    Ok(outcomes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn randomized_mdps_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let mdp = random_two_state_mdp(&mut rng, 3, 2);
            mdp.validate().unwrap();
            assert_eq!(mdp.horizon(), 3);
        }
    }

    #[test]
    fn verify_networks_have_the_documented_shapes() {
        let (t, _) = build_network(&verify_network(VerifyMode::SyncIndependent).unwrap()).unwrap();
        assert_eq!(t.m(), 2);
        assert_eq!(t.n_non_unique(), 6 + 8);
        assert_eq!(t.n_unique(), 14);

        let (t, _) = build_network(&verify_network(VerifyMode::SyncTiedPair).unwrap()).unwrap();
        assert_eq!(t.m(), 3);
        assert_eq!(t.n_non_unique(), 6 + 6 + 10);
        assert_eq!(t.n_unique(), 16);

        let (t, _) = build_network(&verify_network(VerifyMode::SharedThreeSlot).unwrap()).unwrap();
        assert_eq!(t.m(), 1);
        assert_eq!(t.n_non_unique(), 3);
        assert_eq!(t.n_unique(), 2);

        let (t, _) = build_network(&verify_network(VerifyMode::AsyncHidden).unwrap()).unwrap();
        assert_eq!(t.m(), 2);
        assert_eq!(t.n_unique(), 14);
    }

    #[test]
    fn a_small_verification_run_passes() {
        for outcome in run_verification(2).unwrap() {
            assert!(
                outcome.passed,
                "{}: max rel err {} over tolerance {}",
                outcome.case, outcome.max_rel_err, outcome.tolerance
            );
        }
    }
}
