use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::LstmConfig;
use super::train::train;
use crate::error::Result;

/// Candidate values per hyperparameter; an empty list keeps the base value.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ConfigGrid {
    pub lookback: Vec<usize>,
    pub hidden_units: Vec<usize>,
    pub dense_units: Vec<usize>,
    pub dropout_rate: Vec<f64>,
    pub batch_size: Vec<usize>,
    pub learning_rate: Vec<f64>,
    pub epochs: Vec<usize>,
}

impl ConfigGrid {
    /// Cartesian product of the grid applied to `base`, in a fixed order.
    pub fn expand(&self, base: &LstmConfig) -> Vec<LstmConfig> {
        fn axis<T: Clone>(values: &[T], base: T) -> Vec<T> {
            if values.is_empty() {
                vec![base]
            } else {
                values.to_vec()
            }
        }
        let mut out = Vec::new();
        for lookback in axis(&self.lookback, base.lookback) {
            for hidden_units in axis(&self.hidden_units, base.hidden_units) {
                for dense_units in axis(&self.dense_units, base.dense_units) {
                    for dropout_rate in axis(&self.dropout_rate, base.dropout_rate) {
                        for batch_size in axis(&self.batch_size, base.batch_size) {
                            for learning_rate in axis(&self.learning_rate, base.learning_rate) {
                                for epochs in axis(&self.epochs, base.epochs) {
                                    out.push(LstmConfig {
                                        lookback,
                                        hidden_units,
                                        dense_units,
                                        dropout_rate,
                                        batch_size,
                                        learning_rate,
                                        epochs,
                                        ..base.clone()
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepOutcome {
    pub config: LstmConfig,
    /// Final validation loss, or final training loss without a validation split.
    pub score: f64,
}

/// Trains every grid configuration and ranks them by score, best first.
pub fn sweep(series: &[f64], base: &LstmConfig, grid: &ConfigGrid) -> Result<Vec<SweepOutcome>> {
    let configs = grid.expand(base);
    let mut outcomes = configs
        .into_par_iter()
        .map(|config| {
            let (_, report) = train(series, &config)?;
            let score = report
                .final_val_loss()
                .or(report.final_loss())
                .unwrap_or(f64::INFINITY);
            Ok(SweepOutcome { config, score })
        })
        .collect::<Result<Vec<_>>>()?;
    outcomes.sort_by(|a, b| a.score.total_cmp(&b.score));
    Ok(outcomes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expansion_is_cartesian() {
        let grid = ConfigGrid {
            hidden_units: vec![2, 4],
            learning_rate: vec![0.01, 0.001, 0.1],
            ..Default::default()
        };
        let base = LstmConfig::default();
        let configs = grid.expand(&base);
        assert_eq!(configs.len(), 6);
        assert!(configs.iter().all(|c| c.lookback == base.lookback));
        assert_eq!(ConfigGrid::default().expand(&base), vec![base]);
    }

    #[test]
    fn sweep_ranks_by_score() {
        let base = LstmConfig {
            lookback: 4,
            hidden_units: 3,
            recurrent_layers: 1,
            dense_units: 3,
            dropout_rate: 0.0,
            batch_size: 8,
            epochs: 3,
            ..LstmConfig::default()
        };
        let grid = ConfigGrid {
            learning_rate: vec![1e-3, 1e-2],
            ..Default::default()
        };
        let series: Vec<f64> = (0..60).map(|i| 10.0 + (i as f64 * 0.3).sin()).collect();
        let out = sweep(&series, &base, &grid).unwrap();
        assert_eq!(out.len(), 2);
        assert!(out[0].score <= out[1].score);
    }
}
