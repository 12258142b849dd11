//! Running per-dimension observation normalisation (Welford's algorithm).

use crate::error::{Error, Result};

const VAR_EPS: f64 = 1e-8;

/// Tracks a running mean and variance per observation dimension and rescales
/// observations to roughly zero mean and unit variance.
#[derive(Clone, Debug)]
pub struct ObservationNormalizer {
    count: u64,
    mean: Vec<f64>,
    m2: Vec<f64>,
}

impl ObservationNormalizer {
    pub fn new(dim: usize) -> Self {
        Self {
            count: 0,
            mean: vec![0.0; dim],
            m2: vec![0.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    /// Sample variance of dimension `d` (zero until two samples are seen).
    pub fn variance(&self, d: usize) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2[d] / (self.count - 1) as f64
        }
    }

    /// Normalise an observation. With `update`, the running statistics absorb
    /// the observation first. Until two observations have been seen the input
    /// is returned unchanged.
    pub fn normalize(&mut self, obs: &[f64], update: bool) -> Result<Vec<f64>> {
        if obs.len() != self.mean.len() {
            return Err(Error::InvalidInput(format!(
                "observation has length {}, normaliser expects {}",
                obs.len(),
                self.mean.len()
            )));
        }
        if update {
            self.count += 1;
            let n = self.count as f64;
            for d in 0..obs.len() {
                let delta = obs[d] - self.mean[d];
                self.mean[d] += delta / n;
                self.m2[d] += delta * (obs[d] - self.mean[d]);
            }
        }
        if self.count <= 1 {
            return Ok(obs.to_vec());
        }
        Ok(obs
            .iter()
            .enumerate()
            .map(|(d, &x)| (x - self.mean[d]) / (self.variance(d) + VAR_EPS).sqrt())
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn first_observation_passes_through_unchanged() {
        let mut norm = ObservationNormalizer::new(3);
        let obs = vec![5.0, -2.0, 0.25];
        assert_eq!(norm.normalize(&obs, true).unwrap(), obs);
    }

    #[test]
    fn constant_stream_converges_to_zero() {
        let mut norm = ObservationNormalizer::new(2);
        let obs = vec![4.0, -7.5];
        let mut last = Vec::new();
        for _ in 0..50 {
            last = norm.normalize(&obs, true).unwrap();
        }
        for &v in &last {
            assert!(v.abs() <= 1e-9, "constant input should normalise to ~0, got {v}");
        }
    }

    #[test]
    fn gaussian_stream_is_whitened() {
        let mut norm = ObservationNormalizer::new(1);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        // Box-Muller samples with mean 3, standard deviation 2.
        let mut outs = Vec::new();
        for _ in 0..20_000 {
            let u1: f64 = rng.random::<f64>().max(1e-12);
            let u2: f64 = rng.random();
            let z = (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos();
            outs.extend(norm.normalize(&[3.0 + 2.0 * z], true).unwrap());
        }
        let tail = &outs[1000..];
        let mean = tail.iter().sum::<f64>() / tail.len() as f64;
        let var = tail.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / tail.len() as f64;
        assert!(mean.abs() < 0.05, "normalised mean {mean}");
        assert!((var - 1.0).abs() < 0.1, "normalised variance {var}");
    }

    #[test]
    fn update_false_freezes_the_statistics() {
        let mut norm = ObservationNormalizer::new(1);
        for x in [1.0, 2.0, 3.0] {
            norm.normalize(&[x], true).unwrap();
        }
        let frozen_count = norm.count();
        let a = norm.normalize(&[10.0], false).unwrap();
        let b = norm.normalize(&[10.0], false).unwrap();
        assert_eq!(a, b);
        assert_eq!(norm.count(), frozen_count);
    }

    #[test]
    fn welford_matches_direct_two_pass_statistics() {
        let xs = [0.5, -1.25, 3.0, 0.0, 2.25, -0.75];
        let mut norm = ObservationNormalizer::new(1);
        for &x in &xs {
            norm.normalize(&[x], true).unwrap();
        }
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (xs.len() - 1) as f64;
        assert!((norm.variance(0) - var).abs() <= 1e-12);
        let out = norm.normalize(&[1.0], false).unwrap();
        let expect = (1.0 - mean) / (var + 1e-8).sqrt();
        assert!((out[0] - expect).abs() <= 1e-12);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let mut norm = ObservationNormalizer::new(2);
        assert!(norm.normalize(&[1.0], true).is_err());
    }
}
