//! Seeded Monte Carlo comparison of weighted means against the standard mean.
//!
//! Each trial draws `x ~ Normal(mu, sigma)` and independent weights
//! `w ~ Uniform(0, 1)`, then measures how far the randomly weighted mean
//! `Σwx/Σw` and the self-weighting mean `Σx²/Σx` land from `x̄`. The
//! generator is ChaCha8 seeded from a `u64`, so a seed fixes every draw.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::means::{randomly_weighted_mean, self_weighting_mean, standard_mean};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub seed: u64,
    pub n: usize,
    pub mu: f64,
    pub sigma: f64,
    pub trials: usize,
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Precondition(format!("n must be at least 2, got {}", self.n)));
        }
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(Error::Precondition(format!(
                "sigma must be positive and finite, got {}",
                self.sigma
            )));
        }
        if !self.mu.is_finite() {
            return Err(Error::Precondition(format!("mu must be finite, got {}", self.mu)));
        }
        if self.trials == 0 {
            return Err(Error::Precondition("trials must be at least 1".into()));
        }
        Ok(())
    }
}

/// Absolute deviations from the standard mean, summarised over trials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub max_weighted_deviation: f64,
    pub mean_weighted_deviation: f64,
    pub max_self_weighting_deviation: f64,
    pub mean_self_weighting_deviation: f64,
}

pub fn run(config: &SimulationConfig) -> Result<SimulationReport> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let normal = Normal::new(config.mu, config.sigma)
        .map_err(|e| Error::Precondition(e.to_string()))?;

    let mut weighted = Vec::with_capacity(config.trials);
    let mut self_weighted = Vec::with_capacity(config.trials);
    for _ in 0..config.trials {
        let x: Vec<f64> = (0..config.n).map(|_| normal.sample(&mut rng)).collect();
        let w: Vec<f64> = (0..config.n).map(|_| rng.random::<f64>()).collect();
        let data = Dataset::new([("x", x), ("w", w)])?;
        let mean = standard_mean(&data, "x")?;
        weighted.push((randomly_weighted_mean(&data, "x", "w")? - mean).abs());
        self_weighted.push((self_weighting_mean(&data, "x")? - mean).abs());
    }

    let max = |v: &[f64]| v.iter().copied().fold(0.0, f64::max);
    let avg = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    Ok(SimulationReport {
        max_weighted_deviation: max(&weighted),
        mean_weighted_deviation: avg(&weighted),
        max_self_weighting_deviation: max(&self_weighted),
        mean_self_weighting_deviation: avg(&self_weighted),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(seed: u64, n: usize, sigma: f64, trials: usize) -> SimulationConfig {
        SimulationConfig {
            seed,
            n,
            mu: 100.0,
            sigma,
            trials,
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let a = run(&config(7, 50, 1.0, 5)).unwrap();
        let b = run(&config(7, 50, 1.0, 5)).unwrap();
        assert_eq!(a, b);
        let c = run(&config(8, 50, 1.0, 5)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn degenerate_sigma_collapses_deviations() {
        let r = run(&config(1, 1000, 1e-12, 10)).unwrap();
        assert!(r.max_weighted_deviation <= 1e-9);
        assert!(r.max_self_weighting_deviation <= 1e-9);
    }

    #[test]
    fn smoke_single_trial() {
        let r = run(&config(3, 2, 1.0, 1)).unwrap();
        assert!(r.max_weighted_deviation.is_finite());
        assert_eq!(r.max_weighted_deviation, r.mean_weighted_deviation);
    }

    #[test]
    fn invalid_parameters() {
        assert!(run(&config(1, 1, 1.0, 1)).is_err());
        assert!(run(&config(1, 10, 0.0, 1)).is_err());
        assert!(run(&config(1, 10, -1.0, 1)).is_err());
        assert!(run(&config(1, 10, 1.0, 0)).is_err());
    }
}
