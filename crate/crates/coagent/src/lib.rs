//! Feedforward coagent networks.
//!
//! A coagent network is a stochastic policy assembled from many small
//! linear-softmax policies ("coagents"). Each coagent reads the environment
//! observation and/or the sampled outputs of earlier coagents, and the outputs
//! of a designated group of coagents form the action sent to the environment.
//! Coagents may fire asynchronously: on steps where a coagent does not
//! execute, it holds its previous output and accrues no learning signal.
//!
//! The crate is organised as:
//!
//! * [`mdp`] — environment interfaces, tabular MDPs, trajectories, returns.
//! * [`net`] — network topology, parameter sharing, sampling.
//! * [`learn`] — score-function gradients, REINFORCE-style episode updates,
//!   actor-critic with eligibility traces, Adam, critic network, observation
//!   normalisation.
//! * [`oracle`] — exact enumeration of small instances, finite differences,
//!   and dynamic-programming baselines used to verify the learning rules.
//! * [`harness`] — experiment configs, trial runner, CSV output, summaries.

pub mod error;
pub mod harness;
pub mod learn;
pub mod mdp;
pub mod net;
pub mod oracle;

pub use error::{Error, Result};
