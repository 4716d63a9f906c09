use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hyperparameters of the forecaster. Defaults reproduce the published
/// architecture: 50-day lookback, two 256-unit recurrent layers with 30%
/// dropout, a 256-unit dense layer, batch 64 and 100 epochs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LstmConfig {
    pub lookback: usize,
    pub hidden_units: usize,
    pub recurrent_layers: usize,
    pub dropout_rate: f64,
    pub dense_units: usize,
    pub horizon: usize,
    pub batch_size: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    pub seed: u64,
    pub huber_delta: f64,
    /// Chronological tail of the training windows held out for validation.
    pub validation_fraction: f64,
}

impl Default for LstmConfig {
    fn default() -> Self {
        Self {
            lookback: 50,
            hidden_units: 256,
            recurrent_layers: 2,
            dropout_rate: 0.30,
            dense_units: 256,
            horizon: 1,
            batch_size: 64,
            epochs: 100,
            learning_rate: 1e-3,
            seed: 42,
            huber_delta: 1.0,
            validation_fraction: 0.1,
        }
    }
}

impl LstmConfig {
    pub fn validate(&self) -> Result<()> {
        let check = |ok: bool, msg: &str| if ok { Ok(()) } else { Err(Error::Argument(msg.to_string())) };
        check(self.lookback >= 1, "lookback must be >= 1")?;
        check(self.horizon >= 1, "horizon must be >= 1")?;
        check(self.hidden_units >= 1, "hidden_units must be >= 1")?;
        check(self.recurrent_layers >= 1, "recurrent_layers must be >= 1")?;
        check(self.dense_units >= 1, "dense_units must be >= 1")?;
        check(self.batch_size >= 1, "batch_size must be >= 1")?;
        check((0.0..1.0).contains(&self.dropout_rate), "dropout_rate must be in [0, 1)")?;
        check(self.learning_rate > 0.0 && self.learning_rate.is_finite(), "learning_rate must be positive")?;
        check(self.huber_delta > 0.0 && self.huber_delta.is_finite(), "huber_delta must be positive")?;
        check((0.0..1.0).contains(&self.validation_fraction), "validation_fraction must be in [0, 1)")?;
        Ok(())
    }

    /// Closed-form trainable parameter count.
    pub fn parameter_count(&self) -> usize {
        let h = self.hidden_units;
        let d = self.dense_units;
        let recurrent: usize = (0..self.recurrent_layers)
            .map(|l| {
                let input = if l == 0 { 1 } else { h };
                4 * (input * h + h * h + h)
            })
            .sum();
        recurrent + (h * d + d) + (d + 1)
    }
}
