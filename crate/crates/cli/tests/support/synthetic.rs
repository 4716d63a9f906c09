//! Synthetic market data and run configurations for end-to-end tests.

use std::fmt::Write as _;
use std::path::Path;

use chrono::{Datelike, NaiveDate, Weekday};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sectorfolio::lstm::LstmConfig;
use sectorfolio_cli::RunConfig;

pub fn weekdays(from: NaiveDate, to: NaiveDate) -> Vec<NaiveDate> {
    from.iter_days()
        .take_while(|d| *d <= to)
        .filter(|d| !matches!(d.weekday(), Weekday::Sat | Weekday::Sun))
        .collect()
}

/// `ticker,date,close` text for `n` random-walk tickers on weekdays from
/// mid 2019 to the end of July 2021.
pub fn price_csv(n: usize, seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dates = weekdays(ymd(2019, 7, 1), ymd(2021, 7, 30));
    let mut out = String::from("ticker,date,close\n");
    for i in 0..n {
        let drift = rng.gen_range(-0.0002..0.001);
        let vol = rng.gen_range(0.005..0.025);
        let mut p = rng.gen_range(50.0..2000.0);
        for d in &dates {
            let _ = writeln!(out, "S{i:02},{d},{p:.4}");
            p *= 1.0 + drift + vol * rng.gen_range(-1.0..1.0);
        }
    }
    out
}

pub fn ymd(y: i32, m: u32, d: u32) -> NaiveDate {
    NaiveDate::from_ymd_opt(y, m, d).unwrap()
}

pub fn tiny_lstm() -> LstmConfig {
    LstmConfig {
        lookback: 10,
        hidden_units: 4,
        recurrent_layers: 2,
        dropout_rate: 0.2,
        dense_units: 4,
        batch_size: 32,
        epochs: 2,
        learning_rate: 0.01,
        ..LstmConfig::default()
    }
}

/// Config over `data` with a 2019–2020 training window and a small model.
pub fn run_config(data: &Path, output: &Path, sample_count: usize) -> RunConfig {
    let mut cfg = RunConfig {
        data_path: Some(data.to_path_buf()),
        sector: "Synthetic".into(),
        sample_count,
        output_dir: output.to_path_buf(),
        lstm: tiny_lstm(),
        ..RunConfig::default()
    };
    cfg.train_window.start = ymd(2019, 7, 1);
    cfg
}

pub fn config_toml(cfg: &RunConfig) -> String {
    toml::to_string(cfg).unwrap()
}
