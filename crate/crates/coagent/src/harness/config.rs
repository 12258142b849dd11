//! Flat key-value experiment configuration files.

use crate::error::{Error, Result};
use crate::learn::Hyperparams;

/// Which training algorithm a config requests.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    /// Whole-episode updates from complete trajectories.
    Reinforce,
    /// Online TD updates with eligibility traces and a learned critic.
    ActorCritic,
}

/// Parsed experiment configuration. See [`ExperimentConfig::parse`] for the
/// file format.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    /// Built-in environment name, or `None` for a topology-only config (used
    /// by `dry-run` to inspect shapes without an environment).
    pub environment: Option<String>,
    pub algorithm: Algorithm,
    pub trials: usize,
    pub episodes: usize,
    pub seed: u64,
    pub out: Option<String>,
    pub window: usize,
    pub normalize_obs: bool,
    pub hidden_coagents: usize,
    pub hidden_execution: HiddenExecution,
    pub action_sees_obs: bool,
    pub action_bins: Vec<f64>,
    pub share_layers: bool,
    /// Topology-only overrides for configs without an environment.
    pub obs_dim: Option<usize>,
    pub action_dims: Option<usize>,
    pub action_count: Option<usize>,
    pub hyper: Hyperparams,
}

/// Execution rule for the hidden layer, as written in config files.
#[derive(Clone, Debug, PartialEq)]
pub enum HiddenExecution {
    Always,
    Bernoulli(f64),
    Table(Vec<f64>),
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            environment: None,
            algorithm: Algorithm::ActorCritic,
            trials: 1,
            episodes: 100,
            seed: 0,
            out: None,
            window: 1000,
            normalize_obs: false,
            hidden_coagents: 0,
            hidden_execution: HiddenExecution::Always,
            action_sees_obs: true,
            action_bins: crate::net::DEFAULT_ACTION_BINS.to_vec(),
            share_layers: false,
            obs_dim: None,
            action_dims: None,
            action_count: None,
            hyper: Hyperparams::default(),
        }
    }
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("{key}: cannot parse '{value}'")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(Error::Config(format!("{key}: expected true or false, got '{value}'"))),
    }
}

fn parse_float_list(key: &str, value: &str) -> Result<Vec<f64>> {
    value
        .split(',')
        .map(|s| parse_value::<f64>(key, s.trim()))
        .collect()
}

impl ExperimentConfig {
    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::Config(format!("cannot read {}: {e}", path.display()))
        })?;
        Self::parse(&text)
    }

    /// Parse a flat `key = value` file. `#` starts a comment; blank lines are
    /// skipped; keys may not repeat; unknown keys are hard errors.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        let mut seen = std::collections::HashSet::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected 'key = value', got '{line}'", lineno + 1))
            })?;
            let key = key.trim();
            let value = value.trim();
            if !seen.insert(key.to_string()) {
                return Err(Error::Config(format!("duplicate key '{key}'")));
            }
            cfg.apply(key, value)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "environment" => self.environment = Some(value.to_string()),
            "algorithm" => {
                self.algorithm = match value {
                    "reinforce" => Algorithm::Reinforce,
                    "actor_critic" => Algorithm::ActorCritic,
                    _ => {
                        return Err(Error::Config(format!(
                            "algorithm: expected reinforce or actor_critic, got '{value}'"
                        )))
                    }
                }
            }
            "trials" => self.trials = parse_value(key, value)?,
            "episodes" => self.episodes = parse_value(key, value)?,
            "seed" => self.seed = parse_value(key, value)?,
            "out" => self.out = Some(value.to_string()),
            "window" => self.window = parse_value(key, value)?,
            "normalize_obs" => self.normalize_obs = parse_bool(key, value)?,
            "hidden_coagents" => self.hidden_coagents = parse_value(key, value)?,
            "hidden_execution" => {
                self.hidden_execution = if value == "always" {
                    HiddenExecution::Always
                } else if let Some(p) = value.strip_prefix("bernoulli:") {
                    HiddenExecution::Bernoulli(parse_value(key, p.trim())?)
                } else if let Some(t) = value.strip_prefix("table:") {
                    HiddenExecution::Table(parse_float_list(key, t)?)
                } else {
                    return Err(Error::Config(format!(
                        "hidden_execution: expected always, bernoulli:<p>, or table:<p0,p1,...>, \
                         got '{value}'"
                    )));
                }
            }
            "action_sees_obs" => self.action_sees_obs = parse_bool(key, value)?,
            "action_bins" => self.action_bins = parse_float_list(key, value)?,
            "share_layers" => self.share_layers = parse_bool(key, value)?,
            "obs_dim" => self.obs_dim = Some(parse_value(key, value)?),
            "action_dims" => self.action_dims = Some(parse_value(key, value)?),
            "action_count" => self.action_count = Some(parse_value(key, value)?),
            "actor_lr" => self.hyper.actor_lr = parse_value(key, value)?,
            "actor_beta1" => self.hyper.actor_beta1 = parse_value(key, value)?,
            "actor_beta2" => self.hyper.actor_beta2 = parse_value(key, value)?,
            "lambda_actor" => self.hyper.lambda_actor = parse_value(key, value)?,
            "critic_lr" => self.hyper.critic_lr = parse_value(key, value)?,
            "critic_beta1" => self.hyper.critic_beta1 = parse_value(key, value)?,
            "critic_beta2" => self.hyper.critic_beta2 = parse_value(key, value)?,
            "lambda_critic" => self.hyper.lambda_critic = parse_value(key, value)?,
            "gamma" => self.hyper.gamma = parse_value(key, value)?,
            "adam_eps" => self.hyper.adam_eps = parse_value(key, value)?,
            "batch_actor" => self.hyper.batch_actor = parse_value(key, value)?,
            "batch_critic" => self.hyper.batch_critic = parse_value(key, value)?,
            _ => return Err(Error::Config(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.episodes == 0 {
            return Err(Error::Config("episodes must be at least 1".into()));
        }
        if self.window == 0 {
            return Err(Error::Config("window must be at least 1".into()));
        }
        if let Some(env) = &self.environment {
            if !matches!(env.as_str(), "chain2" | "gridworld5" | "pointmass") {
                return Err(Error::Config(format!(
                    "environment: unknown name '{env}' (expected chain2, gridworld5, or pointmass)"
                )));
            }
            if self.obs_dim.is_some() || self.action_dims.is_some() || self.action_count.is_some()
            {
                return Err(Error::Config(
                    "obs_dim/action_dims/action_count are for topology-only configs and clash \
                     with environment"
                        .into(),
                ));
            }
        } else {
            if self.obs_dim.is_none() {
                return Err(Error::Config(
                    "a config needs either environment or obs_dim".into(),
                ));
            }
            if self.action_dims.is_none() && self.action_count.is_none() {
                return Err(Error::Config(
                    "a topology-only config needs action_dims or action_count".into(),
                ));
            }
        }
        if self.action_dims.is_some() && self.action_count.is_some() {
            return Err(Error::Config(
                "action_dims and action_count are mutually exclusive".into(),
            ));
        }
        if let HiddenExecution::Bernoulli(p) = self.hidden_execution {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Config(format!(
                    "hidden_execution: probability {p} outside [0, 1]"
                )));
            }
        }
        if self.action_bins.is_empty() {
            return Err(Error::Config("action_bins must be non-empty".into()));
        }
        self.hyper.validate()
    }
}
