//! State-value network: two tanh hidden layers and a linear output, with a
//! hand-derived backward pass over a flat parameter vector.

use crate::error::{Error, Result};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Default hidden width.
pub const CRITIC_HIDDEN: usize = 64;

/// `V(x) = w3 . tanh(W2 tanh(W1 x + b1) + b2) + b3`.
///
/// Parameters live in one flat vector laid out as
/// `[W1 (h x d, row-major), b1, W2 (h x h), b2, w3, b3]` so the optimiser and
/// eligibility traces can treat the critic as a single parameter block.
#[derive(Clone, Debug)]
pub struct CriticNet {
    obs_dim: usize,
    hidden: usize,
    params: Vec<f64>,
}

impl CriticNet {
    /// Hidden layers get uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights and
    /// biases; the output layer starts at zero so initial values are exactly 0.
    pub fn new(obs_dim: usize, rng: &mut ChaCha8Rng) -> Self {
        Self::with_width(obs_dim, CRITIC_HIDDEN, rng)
    }

    pub fn with_width(obs_dim: usize, hidden: usize, rng: &mut ChaCha8Rng) -> Self {
        assert!(obs_dim > 0 && hidden > 0);
        let count = Self::count(obs_dim, hidden);
        let mut params = vec![0.0; count];
        let bound1 = 1.0 / (obs_dim as f64).sqrt();
        let bound2 = 1.0 / (hidden as f64).sqrt();
        let w1_end = hidden * obs_dim + hidden;
        let w2_end = w1_end + hidden * hidden + hidden;
        for p in &mut params[..w1_end] {
            *p = rng.random_range(-bound1..=bound1);
        }
        for p in &mut params[w1_end..w2_end] {
            *p = rng.random_range(-bound2..=bound2);
        }
        // params[w2_end..] (w3 and b3) stay zero.
        Self {
            obs_dim,
            hidden,
            params,
        }
    }

    fn count(obs_dim: usize, hidden: usize) -> usize {
        hidden * obs_dim + hidden + hidden * hidden + hidden + hidden + 1
    }

    pub fn obs_dim(&self) -> usize {
        self.obs_dim
    }

    pub fn param_count(&self) -> usize {
        self.params.len()
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    fn check_input(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.obs_dim {
            return Err(Error::InvalidInput(format!(
                "critic input has length {}, expected {}",
                x.len(),
                self.obs_dim
            )));
        }
        Ok(())
    }

    fn forward(&self, x: &[f64]) -> (Vec<f64>, Vec<f64>, f64) {
        let (d, h) = (self.obs_dim, self.hidden);
        let p = &self.params;
        let b1 = h * d;
        let w2 = b1 + h;
        let b2 = w2 + h * h;
        let w3 = b2 + h;
        let b3 = w3 + h;

        let mut h1 = vec![0.0; h];
        for i in 0..h {
            let mut z = p[b1 + i];
            let row = &p[i * d..(i + 1) * d];
            for j in 0..d {
                z += row[j] * x[j];
            }
            h1[i] = z.tanh();
        }
        let mut h2 = vec![0.0; h];
        for i in 0..h {
            let mut z = p[b2 + i];
            let row = &p[w2 + i * h..w2 + (i + 1) * h];
            for j in 0..h {
                z += row[j] * h1[j];
            }
            h2[i] = z.tanh();
        }
        let mut v = p[b3];
        for i in 0..h {
            v += p[w3 + i] * h2[i];
        }
        (h1, h2, v)
    }

    pub fn value(&self, x: &[f64]) -> Result<f64> {
        self.check_input(x)?;
        Ok(self.forward(x).2)
    }

    /// Value and its gradient with respect to every parameter.
    pub fn value_and_grad(&self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        self.check_input(x)?;
        let (d, h) = (self.obs_dim, self.hidden);
        let p = &self.params;
        let b1 = h * d;
        let w2 = b1 + h;
        let b2 = w2 + h * h;
        let w3 = b2 + h;
        let b3 = w3 + h;

        let (h1, h2, v) = self.forward(x);
        let mut grad = vec![0.0; p.len()];
        grad[b3] = 1.0;
        for i in 0..h {
            grad[w3 + i] = h2[i];
        }
        // Back through the second tanh layer.
        let mut g2 = vec![0.0; h];
        for i in 0..h {
            g2[i] = p[w3 + i] * (1.0 - h2[i] * h2[i]);
            grad[b2 + i] = g2[i];
            for j in 0..h {
                grad[w2 + i * h + j] = g2[i] * h1[j];
            }
        }
        // Back through the first tanh layer.
        for j in 0..h {
            let mut acc = 0.0;
            for i in 0..h {
                acc += p[w2 + i * h + j] * g2[i];
            }
            let g1 = acc * (1.0 - h1[j] * h1[j]);
            grad[b1 + j] = g1;
            for k in 0..d {
                grad[j * d + k] = g1 * x[k];
            }
        }
        Ok((v, grad))
    }
}
