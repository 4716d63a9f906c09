//! Monte Carlo efficient frontier.
//!
//! Random long-only portfolios are drawn by normalizing independent
//! uniform variates; the minimum-variance and maximum-Sharpe samples are
//! then picked from the cloud.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::portfolio::{portfolio_return, portfolio_variance, sharpe_ratio, ReturnStats, RiskFree, Weights};

pub const DEFAULT_SAMPLE_COUNT: usize = 10_000;
pub const DEFAULT_FRONTIER_BINS: usize = 50;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PortfolioSample {
    pub weights: Weights,
    #[serde(rename = "return")]
    pub ann_return: f64,
    #[serde(rename = "volatility")]
    pub ann_volatility: f64,
    pub sharpe: f64,
}

impl PortfolioSample {
    /// Evaluates `weights` against `stats`.
    pub fn evaluate(weights: Weights, stats: &ReturnStats, rf: RiskFree) -> Result<Self> {
        let ann_return = portfolio_return(&weights, stats)?;
        let ann_volatility = portfolio_variance(&weights, stats)?.volatility;
        let sharpe = sharpe_ratio(ann_return, ann_volatility, rf)?;
        Ok(Self {
            weights,
            ann_return,
            ann_volatility,
            sharpe,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontierResult {
    pub seed: u64,
    pub samples: Vec<PortfolioSample>,
    #[serde(rename = "min_variance_index")]
    pub min_variance: usize,
    #[serde(rename = "max_sharpe_index")]
    pub max_sharpe: usize,
}

impl FrontierResult {
    pub fn min_variance_sample(&self) -> &PortfolioSample {
        &self.samples[self.min_variance]
    }

    pub fn max_sharpe_sample(&self) -> &PortfolioSample {
        &self.samples[self.max_sharpe]
    }
}

/// Random long-only weights for sample `index`.
///
/// Each sample owns ChaCha stream `index` under `seed`, so the draw does not
/// depend on how samples are scheduled across threads.
pub fn random_weights(n: usize, seed: u64, index: u64) -> Weights {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    loop {
        let raw: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
        let total: f64 = raw.iter().sum();
        if total > 0.0 {
            return Weights::new(raw.into_iter().map(|v| v / total).collect())
                .expect("finite weights");
        }
    }
}

pub fn sample_portfolios(
    stats: &ReturnStats,
    count: usize,
    seed: u64,
    rf: RiskFree,
) -> Result<Vec<PortfolioSample>> {
    if count == 0 {
        return Err(Error::Argument("sample count must be at least 1".into()));
    }
    let n = stats.n_assets();
    (0..count)
        .into_par_iter()
        .map(|i| PortfolioSample::evaluate(random_weights(n, seed, i as u64), stats, rf))
        .collect()
}

/// Index of the smallest volatility, first on ties.
pub fn select_min_variance(samples: &[PortfolioSample]) -> Result<usize> {
    argbest(samples, |s| s.ann_volatility, |a, b| a < b)
}

/// Index of the largest Sharpe ratio, first on ties.
pub fn select_max_sharpe(samples: &[PortfolioSample]) -> Result<usize> {
    argbest(samples, |s| s.sharpe, |a, b| a > b)
}

fn argbest(
    samples: &[PortfolioSample],
    key: impl Fn(&PortfolioSample) -> f64,
    better: impl Fn(f64, f64) -> bool,
) -> Result<usize> {
    let first = samples
        .first()
        .ok_or_else(|| Error::Argument("no samples to select from".into()))?;
    let mut best = 0;
    let mut best_key = key(first);
    for (i, s) in samples.iter().enumerate().skip(1) {
        let k = key(s);
        if better(k, best_key) {
            best = i;
            best_key = k;
        }
    }
    Ok(best)
}

/// Samples the cloud and selects both reference portfolios.
pub fn build_frontier(stats: &ReturnStats, count: usize, seed: u64, rf: RiskFree) -> Result<FrontierResult> {
    let samples = sample_portfolios(stats, count, seed, rf)?;
    let min_variance = select_min_variance(&samples)?;
    let max_sharpe = select_max_sharpe(&samples)?;
    Ok(FrontierResult {
        seed,
        samples,
        min_variance,
        max_sharpe,
    })
}

/// Upper contour of the sample cloud as `(volatility, return)` pairs.
///
/// The volatility range is split into `bins` equal intervals and the
/// highest-return sample of every occupied bin is emitted, sorted by
/// volatility.
pub fn efficient_frontier_points(samples: &[PortfolioSample], bins: usize) -> Result<Vec<(f64, f64)>> {
    if samples.is_empty() {
        return Err(Error::Argument("no samples for frontier".into()));
    }
    if bins == 0 {
        return Err(Error::Argument("bins must be at least 1".into()));
    }
    let (lo, hi) = samples.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| {
        (lo.min(s.ann_volatility), hi.max(s.ann_volatility))
    });
    let mut best: Vec<Option<usize>> = vec![None; bins];
    for (i, s) in samples.iter().enumerate() {
        let b = bin_of(s.ann_volatility, lo, hi, bins);
        match best[b] {
            Some(j) if samples[j].ann_return >= s.ann_return => {}
            _ => best[b] = Some(i),
        }
    }
    let mut points: Vec<(f64, f64)> = best
        .into_iter()
        .flatten()
        .map(|i| (samples[i].ann_volatility, samples[i].ann_return))
        .collect();
    points.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(points)
}

/// Bin of `v` among `bins` equal-width intervals over `[lo, hi]`.
pub fn bin_of(v: f64, lo: f64, hi: f64, bins: usize) -> usize {
    if hi <= lo {
        return 0;
    }
    let b = ((v - lo) / (hi - lo) * bins as f64).floor() as usize;
    b.min(bins - 1)
}
