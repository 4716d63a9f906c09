use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `lookback` consecutive values and the value `horizon` steps after them.
#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    pub input: Vec<f64>,
    pub target: f64,
}

/// Sliding windows: window `i` is `series[i..i + lookback]` with target
/// `series[i + lookback + horizon - 1]`.
pub fn make_windows(series: &[f64], lookback: usize, horizon: usize) -> Result<Vec<Window>> {
    if lookback == 0 || horizon == 0 {
        return Err(Error::Argument("lookback and horizon must be >= 1".into()));
    }
    let needed = lookback + horizon;
    if series.len() < needed {
        return Err(Error::InsufficientData {
            context: "windowing",
            required: needed,
            actual: series.len(),
        });
    }
    Ok((0..=series.len() - needed)
        .map(|i| Window {
            input: series[i..i + lookback].to_vec(),
            target: series[i + lookback + horizon - 1],
        })
        .collect())
}

/// Min-max scaling fit on training prices. Values outside the fit range
/// map outside `[0, 1]`; nothing is clamped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinMaxScaler {
    pub min: f64,
    pub max: f64,
}

impl MinMaxScaler {
    pub fn fit(prices: &[f64]) -> Result<Self> {
        if prices.len() < 2 {
            return Err(Error::InsufficientData {
                context: "scaler fit",
                required: 2,
                actual: prices.len(),
            });
        }
        let min = prices.iter().copied().fold(f64::INFINITY, f64::min);
        let max = prices.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Self::new(min, max)
    }

    pub fn new(min: f64, max: f64) -> Result<Self> {
        if !(max > min) || !min.is_finite() || !max.is_finite() {
            return Err(Error::DegenerateRange { value: min });
        }
        Ok(Self { min, max })
    }

    pub fn apply(&self, x: f64) -> f64 {
        (x - self.min) / (self.max - self.min)
    }

    pub fn invert(&self, scaled: f64) -> f64 {
        scaled * (self.max - self.min) + self.min
    }

    pub fn apply_all(&self, xs: &[f64]) -> Vec<f64> {
        xs.iter().map(|x| self.apply(*x)).collect()
    }
}
