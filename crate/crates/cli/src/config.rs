//! Run configuration loaded from a TOML file.

use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use serde::{Deserialize, Deserializer, Serialize};

use sectorfolio::backtest::DEFAULT_CAPITAL;
use sectorfolio::eigen::DEFAULT_VARIANCE_TARGET;
use sectorfolio::frontier::{DEFAULT_FRONTIER_BINS, DEFAULT_SAMPLE_COUNT};
use sectorfolio::lstm::LstmConfig;
use sectorfolio::{RiskFree, TRADING_DAYS_PER_YEAR};

use crate::error::{CliError, CliResult};

fn ymd(y: i32, m: u32, d: u32) -> NaiveDate {
    NaiveDate::from_ymd_opt(y, m, d).expect("valid date")
}

/// Accepts both quoted dates and bare TOML dates.
fn date<'de, D: Deserializer<'de>>(d: D) -> Result<NaiveDate, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Text(String),
        Toml(toml::value::Datetime),
    }
    let text = match Raw::deserialize(d)? {
        Raw::Text(s) => s,
        Raw::Toml(dt) => dt.to_string(),
    };
    text.parse().map_err(serde::de::Error::custom)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainWindow {
    #[serde(deserialize_with = "date")]
    pub start: NaiveDate,
    #[serde(deserialize_with = "date")]
    pub end: NaiveDate,
}

impl Default for TrainWindow {
    fn default() -> Self {
        Self {
            start: ymd(2016, 1, 1),
            end: ymd(2020, 12, 31),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Long-format close-price CSV (`date,ticker,close`).
    pub data_path: Option<PathBuf>,
    /// Universe; empty means every ticker in the file.
    pub tickers: Vec<String>,
    pub sector: String,
    pub train_window: TrainWindow,
    #[serde(deserialize_with = "date")]
    pub entry_date: NaiveDate,
    #[serde(deserialize_with = "date")]
    pub exit_date: NaiveDate,
    pub capital: f64,
    pub sample_count: usize,
    pub variance_target: f64,
    pub risk_free: f64,
    pub trading_days: f64,
    pub frontier_bins: usize,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub lstm: LstmConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            data_path: None,
            tickers: Vec::new(),
            sector: "Portfolio".into(),
            train_window: TrainWindow::default(),
            entry_date: ymd(2021, 1, 1),
            exit_date: ymd(2021, 7, 1),
            capital: DEFAULT_CAPITAL,
            sample_count: DEFAULT_SAMPLE_COUNT,
            variance_target: DEFAULT_VARIANCE_TARGET,
            risk_free: RiskFree::DEFAULT_RATE,
            trading_days: TRADING_DAYS_PER_YEAR,
            frontier_bins: DEFAULT_FRONTIER_BINS,
            seed: 42,
            output_dir: PathBuf::from("output"),
            lstm: LstmConfig::default(),
        }
    }
}

impl RunConfig {
    /// Parses a config file. Relative paths inside it resolve against the
    /// file's directory.
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        let mut cfg = Self::from_toml(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        if let Some(data) = &cfg.data_path {
            if data.is_relative() {
                cfg.data_path = Some(base.join(data));
            }
        }
        if cfg.output_dir.is_relative() {
            cfg.output_dir = base.join(&cfg.output_dir);
        }
        Ok(cfg)
    }

    pub fn from_toml(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Applies `--seed` to both the sampling and the training seed.
    pub fn override_seed(&mut self, seed: u64) {
        self.seed = seed;
        self.lstm.seed = seed;
    }

    pub fn validate(&self) -> CliResult<()> {
        let fail = |msg: String| Err(CliError::Config(msg));
        let w = &self.train_window;
        if !(w.start < w.end && w.end < self.entry_date && self.entry_date <= self.exit_date) {
            return fail(format!(
                "dates must satisfy train start < train end < entry <= exit, got {} / {} / {} / {}",
                w.start, w.end, self.entry_date, self.exit_date
            ));
        }
        if self.sample_count < 1 {
            return fail("sample_count must be at least 1".into());
        }
        if !(self.capital > 0.0 && self.capital.is_finite()) {
            return fail(format!("capital must be positive, got {}", self.capital));
        }
        if !(self.variance_target > 0.0 && self.variance_target <= 1.0) {
            return fail(format!("variance_target must be in (0, 1], got {}", self.variance_target));
        }
        if !self.risk_free.is_finite() {
            return fail("risk_free must be finite".into());
        }
        if !(self.trading_days > 0.0 && self.trading_days.is_finite()) {
            return fail(format!("trading_days must be positive, got {}", self.trading_days));
        }
        if self.frontier_bins < 1 {
            return fail("frontier_bins must be at least 1".into());
        }
        let mut seen = std::collections::BTreeSet::new();
        for t in &self.tickers {
            if !seen.insert(t) {
                return fail(format!("ticker {t} listed twice"));
            }
        }
        self.lstm.validate().map_err(|e| CliError::Config(format!("lstm: {e}")))
    }

    pub fn risk_free(&self) -> RiskFree {
        RiskFree::new(self.risk_free).expect("validated")
    }

    pub fn data_path(&self) -> CliResult<&Path> {
        self.data_path
            .as_deref()
            .ok_or_else(|| CliError::Config("data_path is not set in the config".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        let cfg = RunConfig::from_toml("").unwrap();
        assert_eq!(cfg, RunConfig::default());
        assert_eq!(cfg.train_window.start, ymd(2016, 1, 1));
        assert_eq!(cfg.sample_count, 10_000);
        assert_eq!(cfg.lstm.lookback, 50);
        cfg.validate().unwrap();
    }

    #[test]
    fn bare_and_quoted_dates() {
        let cfg = RunConfig::from_toml(
            "entry_date = 2021-02-01\nexit_date = \"2021-03-01\"\n[train_window]\nstart = 2017-01-01\nend = \"2019-12-31\"\n",
        )
        .unwrap();
        assert_eq!(cfg.entry_date, ymd(2021, 2, 1));
        assert_eq!(cfg.exit_date, ymd(2021, 3, 1));
        assert_eq!(cfg.train_window.start, ymd(2017, 1, 1));
    }

    #[test]
    fn nested_lstm_overrides() {
        let cfg = RunConfig::from_toml("[lstm]\nepochs = 3\nhidden_units = 8\n").unwrap();
        assert_eq!(cfg.lstm.epochs, 3);
        assert_eq!(cfg.lstm.hidden_units, 8);
        assert_eq!(cfg.lstm.dense_units, 256);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(RunConfig::from_toml("sample_cnt = 5").is_err());
    }

    #[test]
    fn date_order_enforced() {
        let early = RunConfig {
            entry_date: ymd(2020, 6, 1),
            ..RunConfig::default()
        };
        assert!(early.validate().is_err());
        let same_day = RunConfig {
            exit_date: ymd(2021, 1, 1),
            ..RunConfig::default()
        };
        same_day.validate().unwrap();
    }

    #[test]
    fn zero_samples_rejected() {
        let cfg = RunConfig {
            sample_count: 0,
            ..RunConfig::default()
        };
        assert!(matches!(cfg.validate(), Err(CliError::Config(_))));
    }

    #[test]
    fn seed_override_reaches_training() {
        let mut cfg = RunConfig::default();
        cfg.override_seed(9);
        assert_eq!((cfg.seed, cfg.lstm.seed), (9, 9));
    }
}
