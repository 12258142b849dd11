//! Adam optimiser, written for gradient *ascent*.

use crate::error::{Error, Result};

/// Per-parameter first and second moment estimates with bias correction.
#[derive(Clone, Debug)]
pub struct AdamState {
    pub alpha: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    /// Number of steps taken so far.
    pub step_count: u64,
    m: Vec<f64>,
    v: Vec<f64>,
}

impl AdamState {
    pub fn new(n: usize, alpha: f64, beta1: f64, beta2: f64, epsilon: f64) -> Self {
        Self {
            alpha,
            beta1,
            beta2,
            epsilon,
            step_count: 0,
            m: vec![0.0; n],
            v: vec![0.0; n],
        }
    }

    /// One ascent step: `params += alpha * m_hat / (sqrt(v_hat) + epsilon)`.
    pub fn step(&mut self, grad: &[f64], params: &mut [f64]) -> Result<()> {
        if grad.len() != self.m.len() || params.len() != self.m.len() {
            return Err(Error::InvalidInput(format!(
                "adam state holds {} parameters, got grad of {} and params of {}",
                self.m.len(),
                grad.len(),
                params.len()
            )));
        }
        self.step_count += 1;
        let t = self.step_count as i32;
        let bias1 = 1.0 - self.beta1.powi(t);
        let bias2 = 1.0 - self.beta2.powi(t);
        for i in 0..params.len() {
            self.m[i] = self.beta1 * self.m[i] + (1.0 - self.beta1) * grad[i];
            self.v[i] = self.beta2 * self.v[i] + (1.0 - self.beta2) * grad[i] * grad[i];
            let m_hat = self.m[i] / bias1;
            let v_hat = self.v[i] / bias2;
            params[i] += self.alpha * m_hat / (v_hat.sqrt() + self.epsilon);
        }
        Ok(())
    }
}
