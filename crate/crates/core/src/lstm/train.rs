use chrono::NaiveDate;
use ndarray::Array2;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::LstmConfig;
use super::data::{make_windows, MinMaxScaler, Window};
use super::network::{batch_loss, forward, loss_and_gradients, Params};
use super::optim::Adam;
use crate::error::{Error, Result};

/// A trained forecaster: configuration, price scaler and parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct LstmModel {
    pub config: LstmConfig,
    pub scaler: MinMaxScaler,
    pub params: Params,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochStats {
    pub epoch: usize,
    pub loss: f64,
    pub mae: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub val_loss: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub val_mae: Option<f64>,
}

/// Per-epoch Huber loss and mean absolute error, in scaled price units.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TrainingReport {
    pub epochs: Vec<EpochStats>,
}

impl TrainingReport {
    pub fn final_loss(&self) -> Option<f64> {
        self.epochs.last().map(|e| e.loss)
    }

    pub fn final_val_loss(&self) -> Option<f64> {
        self.epochs.last().and_then(|e| e.val_loss)
    }
}

fn stack(windows: &[&Window]) -> (Array2<f64>, Vec<f64>) {
    let lookback = windows[0].input.len();
    let mut x = Array2::zeros((windows.len(), lookback));
    for (r, w) in windows.iter().enumerate() {
        for (c, v) in w.input.iter().enumerate() {
            x[[r, c]] = *v;
        }
    }
    (x, windows.iter().map(|w| w.target).collect())
}

impl LstmModel {
    /// Scaled prediction for a scaled window. Dropout is active only when
    /// `training` is set; inference never touches `rng`.
    pub fn forward(&self, window: &[f64], training: bool, rng: &mut ChaCha8Rng) -> Result<f64> {
        if window.len() != self.config.lookback {
            return Err(Error::Shape(format!(
                "window has {} values, lookback is {}",
                window.len(),
                self.config.lookback
            )));
        }
        let x = Array2::from_shape_vec((1, window.len()), window.to_vec()).expect("1 x lookback");
        let dropout = if training { Some(rng) } else { None };
        Ok(forward(&self.params, x.view(), self.config.dropout_rate, dropout).output[0])
    }

    /// Next close price from the last `lookback` closes.
    pub fn predict_next(&self, recent: &[f64]) -> Result<f64> {
        let scaled = self.scaler.apply_all(recent);
        let mut unused = ChaCha8Rng::seed_from_u64(0);
        let y = self.forward(&scaled, false, &mut unused)?;
        Ok(self.scaler.invert(y))
    }

    fn evaluate(&self, windows: &[&Window]) -> (f64, f64) {
        let (x, y) = stack(windows);
        let out = forward::<ChaCha8Rng>(&self.params, x.view(), 0.0, None).output;
        batch_loss(&out, &y, self.config.huber_delta)
    }
}

/// Trains a forecaster on a chronologically ordered close-price series.
///
/// The scaler is fit on the whole series; the last `validation_fraction`
/// of windows (by time) are held out and never used for gradient steps.
pub fn train(series: &[f64], config: &LstmConfig) -> Result<(LstmModel, TrainingReport)> {
    config.validate()?;
    let needed = config.lookback + config.horizon + 1;
    if series.len() < needed {
        return Err(Error::InsufficientData {
            context: "LSTM training",
            required: needed,
            actual: series.len(),
        });
    }
    let scaler = MinMaxScaler::fit(series)?;
    let scaled = scaler.apply_all(series);
    let windows = make_windows(&scaled, config.lookback, config.horizon)?;
    let n_val = ((windows.len() as f64) * config.validation_fraction).floor() as usize;
    let n_val = n_val.min(windows.len() - 1);
    let (train_set, val_set) = windows.split_at(windows.len() - n_val);

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let params = Params::init(config, &mut rng);
    let mut model = LstmModel {
        config: config.clone(),
        scaler,
        params,
    };
    let mut optimizer = Adam::new(&model.params, config.learning_rate);
    let mut report = TrainingReport::default();
    let mut order: Vec<usize> = (0..train_set.len()).collect();
    let val_refs: Vec<&Window> = val_set.iter().collect();

    for epoch in 0..config.epochs {
        order.shuffle(&mut rng);
        let (mut loss_sum, mut mae_sum) = (0.0, 0.0);
        for (b, chunk) in order.chunks(config.batch_size).enumerate() {
            let batch: Vec<&Window> = chunk.iter().map(|&i| &train_set[i]).collect();
            let (x, y) = stack(&batch);
            let (loss, mae, grad) = loss_and_gradients(&model.params, x.view(), &y, config, Some(&mut rng))?;
            if !loss.is_finite() {
                return Err(Error::Divergence {
                    epoch: epoch + 1,
                    batch: b + 1,
                });
            }
            optimizer.step(&mut model.params, &grad);
            loss_sum += loss * batch.len() as f64;
            mae_sum += mae * batch.len() as f64;
        }
        let n = train_set.len() as f64;
        let (val_loss, val_mae) = if val_refs.is_empty() {
            (None, None)
        } else {
            let (l, m) = model.evaluate(&val_refs);
            (Some(l), Some(m))
        };
        let stats = EpochStats {
            epoch: epoch + 1,
            loss: loss_sum / n,
            mae: mae_sum / n,
            val_loss,
            val_mae,
        };
        log::debug!("epoch {} loss {:.6} mae {:.6}", stats.epoch, stats.loss, stats.mae);
        report.epochs.push(stats);
    }
    Ok((model, report))
}

/// One-step-ahead predictions for every date in `dates[from..]`, each made
/// from the `lookback` closes preceding it.
pub fn predict_path(
    model: &LstmModel,
    dates: &[NaiveDate],
    closes: &[f64],
    from: usize,
) -> Result<Vec<(NaiveDate, f64, f64)>> {
    let lookback = model.config.lookback;
    let horizon = model.config.horizon;
    let start = from.max(lookback + horizon - 1);
    (start..closes.len())
        .map(|t| {
            let end = t + 1 - horizon;
            let p = model.predict_next(&closes[end - lookback..end])?;
            Ok((dates[t], closes[t], p))
        })
        .collect()
}
