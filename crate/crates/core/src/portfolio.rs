//! Portfolio return, variance and Sharpe ratio over annualized statistics.

use ndarray::{Array1, Array2, Axis};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::market_data::ReturnMatrix;

/// Tolerance on the weight budget `sum(w) = 1`.
pub const BUDGET_TOLERANCE: f64 = 1e-9;

/// Portfolio weights, one per stock in universe order.
///
/// The type only guarantees finiteness; the budget and sign constraints are
/// checked by [`Weights::long_only`] and [`Weights::budgeted`] because
/// published allocations routinely sum to 0.9999.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weights(Vec<f64>);

impl Weights {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Argument("weights must not be empty".into()));
        }
        if values.iter().any(|w| !w.is_finite()) {
            return Err(Error::Domain("weights must be finite".into()));
        }
        Ok(Self(values))
    }

    /// Nonnegative weights summing to one.
    pub fn long_only(values: Vec<f64>) -> Result<Self> {
        let w = Self::budgeted(values)?;
        if let Some(v) = w.0.iter().find(|v| **v < 0.0) {
            return Err(Error::Domain(format!("long-only weights must be >= 0, got {v}")));
        }
        Ok(w)
    }

    /// Weights summing to one; individual entries may be negative.
    pub fn budgeted(values: Vec<f64>) -> Result<Self> {
        let w = Self::new(values)?;
        if (w.sum() - 1.0).abs() > BUDGET_TOLERANCE {
            return Err(Error::Domain(format!("weights sum to {}, expected 1", w.sum())));
        }
        Ok(w)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn is_long_only(&self) -> bool {
        self.0.iter().all(|w| *w >= 0.0)
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

/// Annualized mean returns and covariance of a stock universe.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnStats {
    mean_annual: Array1<f64>,
    cov_annual: Array2<f64>,
}

impl ReturnStats {
    pub fn new(mean_annual: Array1<f64>, cov_annual: Array2<f64>) -> Result<Self> {
        let n = mean_annual.len();
        if cov_annual.dim() != (n, n) {
            return Err(Error::Dimension {
                expected: n,
                actual: cov_annual.nrows(),
            });
        }
        for i in 0..n {
            if cov_annual[[i, i]] < 0.0 {
                return Err(Error::Domain(format!("negative variance on diagonal {i}")));
            }
            for j in 0..i {
                if (cov_annual[[i, j]] - cov_annual[[j, i]]).abs() > 1e-10 {
                    return Err(Error::Domain("covariance matrix is not symmetric".into()));
                }
            }
        }
        Ok(Self {
            mean_annual,
            cov_annual,
        })
    }

    /// Mean daily return times `trading_days` and sample covariance times
    /// `trading_days`.
    pub fn estimate(returns: &ReturnMatrix, trading_days: f64) -> Result<Self> {
        let rows = returns.n_rows();
        if rows < 2 {
            return Err(Error::InsufficientData {
                context: "return statistics",
                required: 2,
                actual: rows,
            });
        }
        let r = returns.values();
        let mean = r.mean_axis(Axis(0)).expect("non-empty");
        let centered = r - &mean;
        let mut cov = centered.t().dot(&centered) / (rows as f64 - 1.0) * trading_days;
        // Symmetrize against accumulation-order asymmetry.
        let n = cov.nrows();
        for i in 0..n {
            for j in 0..i {
                let v = 0.5 * (cov[[i, j]] + cov[[j, i]]);
                cov[[i, j]] = v;
                cov[[j, i]] = v;
            }
        }
        Self::new(mean * trading_days, cov)
    }

    pub fn n_assets(&self) -> usize {
        self.mean_annual.len()
    }

    pub fn mean_annual(&self) -> &Array1<f64> {
        &self.mean_annual
    }

    pub fn cov_annual(&self) -> &Array2<f64> {
        &self.cov_annual
    }

    /// Per-stock annual volatility `sqrt(cov[i][i])`.
    pub fn volatilities(&self) -> Array1<f64> {
        self.cov_annual.diag().mapv(f64::sqrt)
    }

    fn check(&self, w: &Weights) -> Result<()> {
        if w.len() != self.n_assets() {
            return Err(Error::Dimension {
                expected: self.n_assets(),
                actual: w.len(),
            });
        }
        Ok(())
    }
}

/// Annual return of the risk-free benchmark.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RiskFree(f64);

impl RiskFree {
    pub const DEFAULT_RATE: f64 = 0.01;

    pub fn new(rate: f64) -> Result<Self> {
        if !rate.is_finite() {
            return Err(Error::Domain(format!("risk-free rate must be finite, got {rate}")));
        }
        Ok(Self(rate))
    }

    pub fn rate(self) -> f64 {
        self.0
    }
}

impl Default for RiskFree {
    fn default() -> Self {
        Self(Self::DEFAULT_RATE)
    }
}

/// Annual portfolio variance and its square root.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Risk {
    pub variance: f64,
    pub volatility: f64,
}

/// `sum_i w_i * mean_annual[i]`.
pub fn portfolio_return(w: &Weights, stats: &ReturnStats) -> Result<f64> {
    stats.check(w)?;
    Ok(w.as_slice()
        .iter()
        .zip(stats.mean_annual.iter())
        .map(|(w, m)| w * m)
        .sum())
}

/// Quadratic form `w' S w`; volatility is the root of the variance clamped at zero.
pub fn portfolio_variance(w: &Weights, stats: &ReturnStats) -> Result<Risk> {
    stats.check(w)?;
    let wv = ndarray::ArrayView1::from(w.as_slice());
    let variance = wv.dot(&stats.cov_annual.dot(&wv));
    Ok(Risk {
        variance,
        volatility: variance.max(0.0).sqrt(),
    })
}

/// The same variance written as diagonal terms plus twice the upper triangle.
pub fn portfolio_variance_expanded(w: &Weights, stats: &ReturnStats) -> Result<f64> {
    stats.check(w)?;
    let w = w.as_slice();
    let cov = &stats.cov_annual;
    let n = w.len();
    let mut diag = 0.0;
    let mut cross = 0.0;
    for i in 0..n {
        diag += w[i] * w[i] * cov[[i, i]];
        for j in i + 1..n {
            cross += w[i] * w[j] * cov[[i, j]];
        }
    }
    Ok(diag + 2.0 * cross)
}

pub fn sharpe_ratio(port_return: f64, port_volatility: f64, rf: RiskFree) -> Result<f64> {
    if !(port_volatility > 0.0) {
        return Err(Error::Domain(format!(
            "Sharpe ratio needs positive volatility, got {port_volatility}"
        )));
    }
    Ok((port_return - rf.rate()) / port_volatility)
}
