//! Command-line pipeline: ingest, frontier, eigen, train, predict, backtest,
//! report and plot, driven by a TOML run configuration.

pub mod commands;
pub mod config;
pub mod error;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use commands::BacktestInputs;
pub use config::RunConfig;
pub use error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "sectorfolio", version, about = "Sector portfolio construction, forecasting and backtesting")]
pub struct Cli {
    /// TOML run configuration; defaults apply when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Overrides the configured seed for sampling and training.
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,

    /// Overrides the configured output directory.
    #[arg(long, global = true, value_name = "DIR")]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Align the universe and write the panel and training statistics.
    Ingest,
    /// Sample random portfolios and pick the minimum-variance and optimum-risk ones.
    Frontier,
    /// Build the eigen portfolio from principal components.
    Eigen,
    /// Train one forecaster per ticker.
    Train,
    /// Predict closes over the holding period from the trained checkpoints.
    Predict,
    /// Backtest the optimum and eigen portfolios.
    Backtest {
        /// Take the optimum portfolio from a fixture instead of the artifacts.
        #[arg(long, value_name = "PATH")]
        optimum_fixture: Option<PathBuf>,
        /// Eigen portfolio fixture (with --optimum-fixture).
        #[arg(long, value_name = "PATH")]
        eigen_fixture: Option<PathBuf>,
        /// JSON object of predicted exit prices by ticker.
        #[arg(long, value_name = "PATH")]
        predicted_prices: Option<PathBuf>,
    },
    /// Summarize sector backtest bundles into one table.
    Report {
        /// A backtest.json bundle; repeat for each sector.
        #[arg(long = "bundle", value_name = "PATH", required = true)]
        bundles: Vec<PathBuf>,
    },
    /// Plot actual against predicted closes for one ticker.
    Plot {
        #[arg(long)]
        ticker: String,
    },
}

/// Resolves the configuration with command-line overrides and validates it.
pub fn resolve_config(cli: &Cli) -> CliResult<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.override_seed(seed);
    }
    if let Some(dir) = &cli.output {
        cfg.output_dir = dir.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn run(cli: &Cli) -> CliResult<()> {
    let cfg = resolve_config(cli)?;
    match &cli.command {
        Command::Ingest => {
            let r = commands::cmd_ingest(&cfg)?;
            println!(
                "{} tickers, {} aligned dates ({} to {}), {} training returns",
                r.tickers.len(),
                r.trading_days,
                r.first_date,
                r.last_date,
                r.train_returns
            );
        }
        Command::Frontier => {
            let f = commands::cmd_frontier(&cfg)?;
            for (label, s) in [("minimum variance", &f.min_variance), ("optimum risk", &f.max_sharpe)] {
                println!(
                    "{label}: return {:.4}, volatility {:.4}, sharpe {:.4}",
                    s.ann_return, s.ann_volatility, s.sharpe
                );
            }
        }
        Command::Eigen => {
            let e = commands::cmd_eigen(&cfg)?;
            println!("{} components retained, selected component {}", e.k, e.selected_component);
        }
        Command::Train => {
            for t in commands::cmd_train(&cfg)? {
                println!("{}: final loss {:.6}", t.ticker, t.report.final_loss().unwrap_or(f64::NAN));
            }
        }
        Command::Predict => {
            for p in commands::cmd_predict(&cfg)?.tickers {
                println!("{} {}: actual {:.2}, predicted {:.2}", p.ticker, p.exit_date, p.actual_exit, p.predicted_exit);
            }
        }
        Command::Backtest {
            optimum_fixture,
            eigen_fixture,
            predicted_prices,
        } => {
            let inputs = BacktestInputs {
                optimum_fixture: optimum_fixture.clone(),
                eigen_fixture: eigen_fixture.clone(),
                predicted_prices: predicted_prices.clone(),
            };
            let b = commands::cmd_backtest(&cfg, &inputs)?;
            print!("{}", sectorfolio::backtest::summary(&[(b.sector.clone(), b.summary.returns)].into()).to_csv());
        }
        Command::Report { bundles } => {
            print!("{}", commands::cmd_report(&cfg, bundles)?.to_csv());
        }
        Command::Plot { ticker } => {
            let path = commands::cmd_plot_prediction(&cfg, ticker)?;
            println!("{}", path.display());
        }
    }
    Ok(())
}
