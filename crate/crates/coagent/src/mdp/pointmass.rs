//! A small continuous-control environment: steer a damped point mass in the
//! plane toward the origin.

use super::{Action, Environment, MdpSpec, SpaceSpec, StepOutcome};
use crate::error::{Error, Result};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const HORIZON: usize = 200;
const DT: f64 = 0.1;
const DRAG: f64 = 0.98;
const POS_LIMIT: f64 = 2.0;
const VEL_LIMIT: f64 = 1.0;

/// Observation is `[x, y, vx, vy]`; the action is a 2-d acceleration with
/// each component in `[-1, 1]`; reward is minus the distance to the origin.
pub struct PointMassEnv {
    spec: MdpSpec,
    pos: [f64; 2],
    vel: [f64; 2],
    steps: usize,
    done: bool,
}

impl PointMassEnv {
    pub fn new(gamma: f64) -> Self {
        Self {
            spec: MdpSpec {
                state_space: SpaceSpec::Real(4),
                action_space: SpaceSpec::Real(2),
                gamma,
                horizon: Some(HORIZON),
                enumerable: false,
            },
            pos: [0.0; 2],
            vel: [0.0; 2],
            steps: 0,
            done: true,
        }
    }

    fn observation(&self) -> Vec<f64> {
        vec![self.pos[0], self.pos[1], self.vel[0], self.vel[1]]
    }
}

impl Environment for PointMassEnv {
    fn spec(&self) -> &MdpSpec {
        &self.spec
    }

    fn observation_dim(&self) -> usize {
        4
    }

    fn reset(&mut self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        for i in 0..2 {
            self.pos[i] = rng.random_range(-1.0..=1.0);
        }
        for i in 0..2 {
            self.vel[i] = rng.random_range(-0.1..=0.1);
        }
        self.steps = 0;
        self.done = false;
        self.observation()
    }

    fn step(&mut self, action: &Action, _rng: &mut ChaCha8Rng) -> Result<StepOutcome> {
        if self.done {
            return Err(Error::InvalidInput("step called on a finished episode".into()));
        }
        let accel = match action {
            Action::Continuous(a) if a.len() == 2 => a,
            Action::Continuous(a) => {
                return Err(Error::InvalidInput(format!(
                    "point-mass actions have 2 components, got {}",
                    a.len()
                )))
            }
            Action::Discrete(_) => {
                return Err(Error::InvalidInput(
                    "point-mass actions are continuous vectors".into(),
                ))
            }
        };
        for &a in accel {
            if !(-1.0..=1.0).contains(&a) {
                return Err(Error::InvalidInput(format!(
                    "acceleration component {a} outside [-1, 1]"
                )));
            }
        }
        for i in 0..2 {
            self.vel[i] = (DRAG * self.vel[i] + DT * accel[i]).clamp(-VEL_LIMIT, VEL_LIMIT);
            self.pos[i] = (self.pos[i] + DT * self.vel[i]).clamp(-POS_LIMIT, POS_LIMIT);
        }
        self.steps += 1;
        self.done = self.steps >= HORIZON;
        let reward = -(self.pos[0].powi(2) + self.pos[1].powi(2)).sqrt();
        Ok(StepOutcome {
            observation: self.observation(),
            reward,
            done: self.done,
        })
    }
}
