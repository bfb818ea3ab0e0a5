//! Seeded realizations of a bare coordinate inside its fluctuation envelope.
//!
//! Each grid point gets an independent zero-mean Gaussian draw whose standard
//! deviation is the closed-form normalized amplitude at that time. Draws are
//! counter-based: the value at grid index `k` depends only on `(seed, k)`, so
//! realizations reproduce bit-for-bit and can be generated in any order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::analytic::normalized_x_fluctuation;
use crate::error::{Error, Result};
use crate::model::{BellState, OscillatorIndex, SystemParams};

pub const MAX_GRID_STEPS: f64 = 1e7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealizationConfig {
    pub seed: u64,
    pub dt: f64,
    pub t_max: f64,
}

impl RealizationConfig {
    pub fn new(seed: u64, dt: f64, t_max: f64) -> Result<Self> {
        let cfg = Self { seed, dt, t_max };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::InvalidConfig(format!("dt must be > 0, got {}", self.dt)));
        }
        if !(self.t_max.is_finite() && self.t_max > 0.0) {
            return Err(Error::InvalidConfig(format!("t_max must be > 0, got {}", self.t_max)));
        }
        if self.t_max / self.dt > MAX_GRID_STEPS {
            return Err(Error::InvalidConfig(format!(
                "t_max / dt = {:e} exceeds {MAX_GRID_STEPS:e}",
                self.t_max / self.dt
            )));
        }
        Ok(())
    }

    /// Grid `0, dt, 2dt, …` up to and including `t_max` (within rounding).
    pub fn times(&self) -> Vec<f64> {
        let steps = (self.t_max / self.dt * (1.0 + 1e-12)).floor() as usize;
        (0..=steps).map(|k| k as f64 * self.dt).collect()
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self { seed, ..*self }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Realization {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    /// Standard deviation at each time; the plotted band is `±envelope`.
    pub envelope: Vec<f64>,
}

fn standard_normal_at(seed: u64, index: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    StandardNormal.sample(&mut rng)
}

pub fn sample_realization(
    params: &SystemParams,
    state: BellState,
    osc: OscillatorIndex,
    config: &RealizationConfig,
) -> Result<Realization> {
    config.validate()?;
    let times = config.times();
    let envelope: Vec<f64> = times.iter().map(|&t| normalized_x_fluctuation(params, state, osc, t)).collect();
    let values = envelope.iter().enumerate().map(|(k, &sd)| sd * standard_normal_at(config.seed, k as u64)).collect();
    Ok(Realization { times, values, envelope })
}

/// `count` realizations with seeds `seed, seed + 1, …`.
pub fn sample_ensemble(
    params: &SystemParams,
    state: BellState,
    osc: OscillatorIndex,
    config: &RealizationConfig,
    count: usize,
) -> Result<Vec<Realization>> {
    (0..count as u64)
        .map(|r| sample_realization(params, state, osc, &config.with_seed(config.seed.wrapping_add(r))))
        .collect()
}

/// Per-time empirical mean and (population) standard deviation over realizations
/// sharing a grid.
pub fn ensemble_moments(realizations: &[Realization]) -> (Vec<f64>, Vec<f64>) {
    let Some(first) = realizations.first() else {
        return (Vec::new(), Vec::new());
    };
    let n = realizations.len() as f64;
    let len = first.values.len();
    let mut mean = vec![0.0; len];
    let mut sq = vec![0.0; len];
    for r in realizations {
        for (k, &v) in r.values.iter().enumerate() {
            mean[k] += v;
            sq[k] += v * v;
        }
    }
    let std = mean
        .iter_mut()
        .zip(&sq)
        .map(|(m, &s)| {
            *m /= n;
            (s / n - *m * *m).max(0.0).sqrt()
        })
        .collect();
    (mean, std)
}
