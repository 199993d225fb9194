//! Monte Carlo study of frontier size when both gains follow a truncated
//! power law.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frontier::scan_points;
use crate::model::{DeltaSystem, GainRecord};

/// How the two drawn marginals are paired into entities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Coupling {
    /// Pair the i-th absolute gain with the i-th relative gain as drawn.
    #[default]
    Independent,
    /// Shuffle the relative gains before pairing.
    Permutation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyConfig {
    pub n: usize,
    pub trials: usize,
    /// Tail exponent: density ∝ x^-(alpha + 1).
    pub alpha: f64,
    pub x_min: f64,
    pub x_max: f64,
    pub seed: u64,
    pub percentiles: Vec<f64>,
    pub coupling: Coupling,
}

impl StudyConfig {
    /// Defaults: alpha 1, support `[1, n]`, 95th and 99th percentiles.
    pub fn new(n: usize, trials: usize, seed: u64) -> Self {
        Self {
            n,
            trials,
            alpha: 1.0,
            x_min: 1.0,
            x_max: n as f64,
            seed,
            percentiles: vec![95.0, 99.0],
            coupling: Coupling::Independent,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidConfig(format!("n must be at least 2, got {}", self.n)));
        }
        if self.trials < 1 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        check_law(self.alpha, self.x_min, self.x_max)?;
        if let Some(p) = self
            .percentiles
            .iter()
            .find(|p| !(**p > 0.0 && **p < 100.0))
        {
            return Err(Error::InvalidConfig(format!("percentile {p} outside (0, 100)")));
        }
        Ok(())
    }

    /// Seed of one trial. Trials are independent of execution order.
    pub fn trial_seed(&self, trial_index: usize) -> u64 {
        self.seed ^ trial_index as u64
    }
}

fn check_law(alpha: f64, x_min: f64, x_max: f64) -> Result<()> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::InvalidConfig(format!("alpha must be positive, got {alpha}")));
    }
    if !(x_min.is_finite() && x_max.is_finite() && x_min > 0.0 && x_min < x_max) {
        return Err(Error::InvalidConfig(format!(
            "cutoffs must satisfy 0 < x_min < x_max, got [{x_min}, {x_max}]"
        )));
    }
    Ok(())
}

/// Inverse-CDF sampler for the Pareto law truncated to `[x_min, x_max]`.
#[derive(Debug, Clone, Copy)]
struct TruncatedPareto {
    x_min: f64,
    inv_alpha: f64,
    /// `1 - (x_min / x_max)^alpha`, the untruncated mass below `x_max`.
    mass: f64,
    x_max: f64,
}

impl TruncatedPareto {
    fn new(alpha: f64, x_min: f64, x_max: f64) -> Result<Self> {
        check_law(alpha, x_min, x_max)?;
        Ok(Self {
            x_min,
            inv_alpha: 1.0 / alpha,
            mass: 1.0 - (x_min / x_max).powf(alpha),
            x_max,
        })
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        let base = 1.0 - u * self.mass;
        let x = if self.inv_alpha == 1.0 {
            self.x_min / base
        } else {
            self.x_min / base.powf(self.inv_alpha)
        };
        x.clamp(self.x_min, self.x_max)
    }
}

/// `count` draws from the truncated power law with density ∝ x^-(alpha+1).
pub fn sample_power_law(
    count: usize,
    alpha: f64,
    x_min: f64,
    x_max: f64,
    seed: u64,
) -> Result<Vec<f64>> {
    let law = TruncatedPareto::new(alpha, x_min, x_max)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count).map(|_| law.sample(&mut rng)).collect())
}

/// Absolute and relative gains of one simulated system.
pub fn trial_gains(config: &StudyConfig, trial_index: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    config.validate()?;
    let law = TruncatedPareto::new(config.alpha, config.x_min, config.x_max)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.trial_seed(trial_index));
    let gains: Vec<f64> = (0..config.n).map(|_| law.sample(&mut rng)).collect();
    let mut relative: Vec<f64> = (0..config.n).map(|_| law.sample(&mut rng)).collect();
    if config.coupling == Coupling::Permutation {
        relative.shuffle(&mut rng);
    }
    Ok((gains, relative))
}

/// The simulated system of one trial, ranked in draw order.
pub fn trial_system(config: &StudyConfig, trial_index: usize) -> Result<DeltaSystem> {
    let (gains, relative) = trial_gains(config, trial_index)?;
    let records = gains
        .into_iter()
        .zip(relative)
        .enumerate()
        .map(|(i, (g, r))| GainRecord::new(format!("e{}", i + 1), None, g, r))
        .collect();
    DeltaSystem::build(records, format!("trial {trial_index}"))
}

/// Frontier size of one simulated system.
pub fn run_trial(config: &StudyConfig, trial_index: usize) -> Result<usize> {
    let (gains, relative) = trial_gains(config, trial_index)?;
    Ok(frontier_size(&gains, &relative))
}

pub(crate) fn frontier_size(gains: &[f64], relative: &[f64]) -> usize {
    scan_points(
        gains
            .iter()
            .zip(relative)
            .enumerate()
            .map(|(i, (&g, &r))| (g, r, i))
            .collect(),
    )
    .len()
}

/// `c · (log10 n + 1)²`
pub fn bound_estimate(n: usize, c: f64) -> f64 {
    let scale = (n as f64).log10() + 1.0;
    c * scale * scale
}

/// Coefficients of the frontier-size bound reported with every study.
pub const BOUND_COEFFICIENTS: [f64; 2] = [1.0 / 3.0, 1.0 / 2.0];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PercentileSummary {
    pub percentile: f64,
    pub value: f64,
    /// `value / (log10 n + 1)²`
    pub fitted_c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundValue {
    pub c: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyResult {
    pub config: StudyConfig,
    pub sizes: Vec<usize>,
    pub percentiles: Vec<PercentileSummary>,
    pub bounds: Vec<BoundValue>,
}

impl StudyResult {
    pub fn percentile(&self, p: f64) -> Option<&PercentileSummary> {
        self.percentiles.iter().find(|s| s.percentile == p)
    }
}

/// Nearest-rank percentile of already sorted values.
pub fn nearest_rank(sorted: &[usize], percentile: f64) -> Option<usize> {
    if sorted.is_empty() {
        return None;
    }
    let rank = ((percentile / 100.0) * sorted.len() as f64).ceil() as usize;
    Some(sorted[rank.clamp(1, sorted.len()) - 1])
}

pub fn run_study(config: &StudyConfig) -> Result<StudyResult> {
    config.validate()?;
    let sizes = (0..config.trials)
        .into_par_iter()
        .map(|t| run_trial(config, t))
        .collect::<Result<Vec<usize>>>()?;

    let mut sorted = sizes.clone();
    sorted.sort_unstable();
    let mut requested = config.percentiles.clone();
    requested.sort_by(f64::total_cmp);
    requested.dedup();
    let scale = bound_estimate(config.n, 1.0);
    let percentiles = requested
        .into_iter()
        .map(|p| {
            let value = nearest_rank(&sorted, p).unwrap_or(0) as f64;
            PercentileSummary {
                percentile: p,
                value,
                fitted_c: value / scale,
            }
        })
        .collect();
    let bounds = BOUND_COEFFICIENTS
        .iter()
        .map(|&c| BoundValue {
            c,
            value: bound_estimate(config.n, c),
        })
        .collect();

    Ok(StudyResult {
        config: config.clone(),
        sizes,
        percentiles,
        bounds,
    })
}
