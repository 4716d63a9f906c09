//! Pipeline stages. Each stage reads its inputs from the data file or from
//! artifacts of earlier stages and writes its own artifacts to the output
//! directory.

use std::collections::BTreeMap;
use std::fs::File;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use sectorfolio::backtest::{
    allocate, predicted_report, realize, report_csv, summary, Allocation, BacktestReport, PortfolioKind,
    SectorFixture, SectorReturns, SummaryRow, SummaryTable,
};
use sectorfolio::eigen::{build_eigen_portfolio, EigenCandidate, EigenReport};
use sectorfolio::frontier::{build_frontier, efficient_frontier_points, FrontierResult, PortfolioSample};
use sectorfolio::lstm::{predict_path, train, Checkpoint, LstmConfig, TrainingReport};
use sectorfolio::market_data::{align, annualized_volatility, daily_returns, load_prices};
use sectorfolio::plot::{frontier_svg, prediction_svg};
use sectorfolio::{Error, PricePanel, ReturnMatrix, ReturnStats};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

pub const PANEL_CSV: &str = "panel.csv";
pub const STATS_JSON: &str = "stats.json";
pub const FRONTIER_JSON: &str = "frontier.json";
pub const FRONTIER_SVG: &str = "frontier.svg";
pub const EIGEN_JSON: &str = "eigen.json";
pub const CHECKPOINT_DIR: &str = "checkpoints";
pub const TRAINING_DIR: &str = "training";
pub const PREDICTIONS_JSON: &str = "predictions.json";
pub const BACKTEST_JSON: &str = "backtest.json";
pub const SUMMARY_CSV: &str = "summary.csv";
pub const SUMMARY_JSON: &str = "summary.json";
pub const PLOT_DIR: &str = "plots";

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(io_err(parent))?;
    }
    std::fs::write(path, text).map_err(io_err(path))?;
    log::info!("wrote {}", path.display());
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|source| CliError::Artifact {
        path: path.to_path_buf(),
        source,
    })?;
    text.push('\n');
    write_text(path, &text)
}

/// Reads an artifact, naming the command that produces it when absent.
fn read_artifact<T: DeserializeOwned>(path: &Path, producer: &'static str) -> CliResult<T> {
    if !path.exists() {
        return Err(CliError::MissingArtifact {
            path: path.to_path_buf(),
            command: producer,
        });
    }
    read_json(path)
}

fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let file = File::open(path).map_err(io_err(path))?;
    serde_json::from_reader(std::io::BufReader::new(file)).map_err(|source| CliError::Artifact {
        path: path.to_path_buf(),
        source,
    })
}

/// File name for a ticker: anything outside `[A-Za-z0-9._&-]` becomes `_`.
pub fn file_stem(ticker: &str) -> String {
    ticker
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || "._&-".contains(c) { c } else { '_' })
        .collect()
}

pub fn checkpoint_path(cfg: &RunConfig, ticker: &str) -> PathBuf {
    cfg.output_dir.join(CHECKPOINT_DIR).join(format!("{}.json", file_stem(ticker)))
}

/// Aligned close prices of the configured universe over every date in the file.
pub fn load_panel(cfg: &RunConfig) -> CliResult<PricePanel> {
    let path = cfg.data_path()?;
    let file = File::open(path).map_err(io_err(path))?;
    let series = load_prices(std::io::BufReader::new(file))?;
    let chosen = if cfg.tickers.is_empty() {
        series
    } else {
        cfg.tickers
            .iter()
            .map(|t| {
                series
                    .iter()
                    .find(|s| s.ticker() == t)
                    .cloned()
                    .ok_or_else(|| CliError::Core(Error::MissingData { ticker: t.clone() }))
            })
            .collect::<CliResult<Vec<_>>>()?
    };
    if chosen.len() == 1 {
        log::warn!("single-ticker universe {}: portfolio results are degenerate", chosen[0].ticker());
    }
    Ok(align(&chosen)?)
}

fn training_panel(cfg: &RunConfig, panel: &PricePanel) -> CliResult<PricePanel> {
    Ok(panel.between(cfg.train_window.start, cfg.train_window.end)?)
}

fn training_statistics(cfg: &RunConfig) -> CliResult<(ReturnMatrix, ReturnStats)> {
    let panel = load_panel(cfg)?;
    let returns = daily_returns(&training_panel(cfg, &panel)?)?;
    let stats = ReturnStats::estimate(&returns, cfg.trading_days)?;
    Ok((returns, stats))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IngestReport {
    pub tickers: Vec<String>,
    pub first_date: NaiveDate,
    pub last_date: NaiveDate,
    pub trading_days: usize,
    pub train_start: NaiveDate,
    pub train_end: NaiveDate,
    pub train_returns: usize,
    pub mean_annual: Vec<f64>,
    pub volatility_annual: Vec<f64>,
    pub cov_annual: Vec<Vec<f64>>,
}

/// Aligns the universe and summarizes the training window.
pub fn cmd_ingest(cfg: &RunConfig) -> CliResult<IngestReport> {
    let panel = load_panel(cfg)?;
    let train = training_panel(cfg, &panel)?;
    let returns = daily_returns(&train)?;
    let stats = ReturnStats::estimate(&returns, cfg.trading_days)?;
    let report = IngestReport {
        tickers: panel.tickers().to_vec(),
        first_date: panel.dates()[0],
        last_date: *panel.dates().last().expect("non-empty panel"),
        trading_days: panel.n_dates(),
        train_start: train.dates()[0],
        train_end: *train.dates().last().expect("non-empty panel"),
        train_returns: returns.n_rows(),
        mean_annual: stats.mean_annual().to_vec(),
        volatility_annual: annualized_volatility(&returns, cfg.trading_days)?.to_vec(),
        cov_annual: stats.cov_annual().outer_iter().map(|r| r.to_vec()).collect(),
    };
    let mut csv = Vec::new();
    panel.write_csv(&mut csv)?;
    write_text(&cfg.output_dir.join(PANEL_CSV), &String::from_utf8_lossy(&csv))?;
    write_json(&cfg.output_dir.join(STATS_JSON), &report)?;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontierArtifact {
    pub tickers: Vec<String>,
    pub risk_free: f64,
    pub sample_count: usize,
    pub min_variance: PortfolioSample,
    pub max_sharpe: PortfolioSample,
    /// Upper contour as `(volatility, return)` pairs.
    pub frontier: Vec<(f64, f64)>,
    pub result: FrontierResult,
}

impl FrontierArtifact {
    /// The optimum-risk portfolio: the maximum-Sharpe sample.
    pub fn optimum(&self) -> &PortfolioSample {
        self.result.max_sharpe_sample()
    }
}

pub fn cmd_frontier(cfg: &RunConfig) -> CliResult<FrontierArtifact> {
    let (returns, stats) = training_statistics(cfg)?;
    if stats.n_assets() == 1 {
        log::warn!("one asset: the frontier is a single point");
    }
    let result = build_frontier(&stats, cfg.sample_count, cfg.seed, cfg.risk_free())?;
    let frontier = efficient_frontier_points(&result.samples, cfg.frontier_bins)?;
    let artifact = FrontierArtifact {
        tickers: returns.tickers().to_vec(),
        risk_free: cfg.risk_free,
        sample_count: cfg.sample_count,
        min_variance: result.min_variance_sample().clone(),
        max_sharpe: result.max_sharpe_sample().clone(),
        frontier,
        result,
    };
    write_json(&cfg.output_dir.join(FRONTIER_JSON), &artifact)?;
    let title = format!("{}: {} random portfolios", cfg.sector, cfg.sample_count);
    write_text(
        &cfg.output_dir.join(FRONTIER_SVG),
        &frontier_svg(&artifact.result, &artifact.frontier, &title),
    )?;
    Ok(artifact)
}

pub fn cmd_eigen(cfg: &RunConfig) -> CliResult<EigenReport> {
    let (returns, stats) = training_statistics(cfg)?;
    let report = build_eigen_portfolio(&returns, &stats, cfg.variance_target, cfg.risk_free())?;
    if let Some(sel) = report.selected() {
        if !sel.weights.is_long_only() {
            log::warn!("selected eigen portfolio (component {}) holds short positions", sel.component_index);
        }
    }
    write_json(&cfg.output_dir.join(EIGEN_JSON), &report)?;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedTicker {
    pub ticker: String,
    pub seed: u64,
    pub training_points: usize,
    pub report: TrainingReport,
}

/// Model configuration for the ticker at `index`: each ticker trains under
/// its own seed derived from the run seed.
pub fn ticker_config(cfg: &RunConfig, index: usize) -> LstmConfig {
    LstmConfig {
        seed: cfg.lstm.seed.wrapping_add(index as u64),
        ..cfg.lstm.clone()
    }
}

/// Trains one forecaster per ticker on its training-window closes.
pub fn cmd_train(cfg: &RunConfig) -> CliResult<Vec<TrainedTicker>> {
    let panel = training_panel(cfg, &load_panel(cfg)?)?;
    let trained = panel
        .tickers()
        .par_iter()
        .enumerate()
        .map(|(i, ticker)| {
            let lstm = ticker_config(cfg, i);
            let series = panel.column(ticker)?;
            let (model, report) = train(&series, &lstm)?;
            log::info!("{ticker}: final loss {:?}", report.final_loss());
            Ok((Checkpoint::from_model(&model, Some(ticker)), TrainedTicker {
                ticker: ticker.clone(),
                seed: lstm.seed,
                training_points: series.len(),
                report,
            }))
        })
        .collect::<sectorfolio::Result<Vec<_>>>()?;

    let mut out = Vec::with_capacity(trained.len());
    for (checkpoint, t) in trained {
        let mut buf = Vec::new();
        checkpoint.write(&mut buf)?;
        write_text(&checkpoint_path(cfg, &t.ticker), &String::from_utf8_lossy(&buf))?;
        write_json(
            &cfg.output_dir.join(TRAINING_DIR).join(format!("{}.json", file_stem(&t.ticker))),
            &t,
        )?;
        out.push(t);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathPoint {
    pub date: NaiveDate,
    pub actual: f64,
    pub predicted: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TickerPrediction {
    pub ticker: String,
    /// Trading date the exit prediction refers to.
    pub exit_date: NaiveDate,
    pub actual_exit: f64,
    pub predicted_exit: f64,
    /// Range of the training closes; predictions never leave it.
    pub train_min: f64,
    pub train_max: f64,
    pub path: Vec<PathPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Predictions {
    pub entry_date: NaiveDate,
    pub exit_date: NaiveDate,
    pub tickers: Vec<TickerPrediction>,
}

impl Predictions {
    pub fn exit_prices(&self) -> BTreeMap<String, f64> {
        self.tickers.iter().map(|t| (t.ticker.clone(), t.predicted_exit)).collect()
    }
}

/// One-day-ahead predictions over the holding period, each from the actual
/// closes preceding the predicted day.
pub fn cmd_predict(cfg: &RunConfig) -> CliResult<Predictions> {
    let panel = load_panel(cfg)?;
    let exit_row = panel
        .row_as_of(cfg.exit_date)
        .ok_or_else(|| Error::Alignment(format!("no trading date on or before {}", cfg.exit_date)))?;
    let from = panel.dates().partition_point(|d| *d < cfg.entry_date);
    if from > exit_row {
        return Err(Error::Alignment(format!(
            "no trading dates between {} and {}",
            cfg.entry_date, cfg.exit_date
        ))
        .into());
    }
    let models = panel
        .tickers()
        .iter()
        .map(|t| {
            let checkpoint: Checkpoint = read_artifact(&checkpoint_path(cfg, t), "train")?;
            Ok(checkpoint.into_model()?)
        })
        .collect::<CliResult<Vec<_>>>()?;

    let dates = &panel.dates()[..=exit_row];
    let tickers = panel
        .tickers()
        .par_iter()
        .zip(models.par_iter())
        .map(|(ticker, model)| {
            let closes = panel.column(ticker)?;
            let path = predict_path(model, dates, &closes[..=exit_row], from)?;
            let (exit_date, actual_exit, predicted_exit) = *path
                .last()
                .ok_or(Error::InsufficientData {
                    context: "prediction path",
                    required: model.config.lookback + model.config.horizon,
                    actual: exit_row + 1,
                })?;
            Ok(TickerPrediction {
                ticker: ticker.clone(),
                exit_date,
                actual_exit,
                predicted_exit,
                train_min: model.scaler.min,
                train_max: model.scaler.max,
                path: path
                    .into_iter()
                    .map(|(date, actual, predicted)| PathPoint { date, actual, predicted })
                    .collect(),
            })
        })
        .collect::<sectorfolio::Result<Vec<_>>>()?;

    let predictions = Predictions {
        entry_date: cfg.entry_date,
        exit_date: cfg.exit_date,
        tickers,
    };
    write_json(&cfg.output_dir.join(PREDICTIONS_JSON), &predictions)?;
    Ok(predictions)
}

/// Where `cmd_backtest` takes weights and prices from.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BacktestInputs {
    pub optimum_fixture: Option<PathBuf>,
    pub eigen_fixture: Option<PathBuf>,
    /// JSON object mapping ticker to predicted exit price.
    pub predicted_prices: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PortfolioBacktest {
    pub allocation: Allocation,
    pub actual: BacktestReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictedBacktest {
    pub portfolio: PortfolioKind,
    pub prices: BTreeMap<String, f64>,
    pub report: BacktestReport,
}

/// Everything one sector contributes to the summary table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorReportBundle {
    pub sector: String,
    pub entry_date: NaiveDate,
    pub exit_date: NaiveDate,
    pub capital: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optimum_sample: Option<PortfolioSample>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigen_candidate: Option<EigenCandidate>,
    pub optimum: PortfolioBacktest,
    pub eigen: Option<PortfolioBacktest>,
    /// Why the eigen portfolio was not backtested, if it was not.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigen_skipped: Option<String>,
    pub predicted: Option<PredictedBacktest>,
    pub summary: SummaryRow,
}

fn run_portfolio(
    capital: f64,
    tickers: &[String],
    weights: &[f64],
    entry: &BTreeMap<String, f64>,
    exit: &BTreeMap<String, f64>,
) -> sectorfolio::Result<PortfolioBacktest> {
    let allocation = allocate(capital, tickers, weights, entry)?;
    let actual = realize(&allocation, exit)?;
    Ok(PortfolioBacktest { allocation, actual })
}

fn eigen_or_skip(result: sectorfolio::Result<PortfolioBacktest>) -> CliResult<(Option<PortfolioBacktest>, Option<String>)> {
    match result {
        Ok(b) => Ok((Some(b), None)),
        Err(e @ Error::UnsupportedShort { .. }) => {
            log::warn!("eigen portfolio not backtested: {e}");
            Ok((None, Some(e.to_string())))
        }
        Err(e) => Err(e.into()),
    }
}

fn predicted_from(
    kind: PortfolioKind,
    allocation: &Allocation,
    prices: BTreeMap<String, f64>,
) -> CliResult<PredictedBacktest> {
    let report = predicted_report(allocation, &prices)?;
    Ok(PredictedBacktest {
        portfolio: kind,
        prices,
        report,
    })
}

/// Buy-and-hold backtest of the optimum and eigen portfolios, valued at
/// actual and at predicted exit prices.
///
/// With `optimum_fixture` set, weights and prices come from fixture files;
/// otherwise from the frontier, eigen and predict artifacts and the data file.
pub fn cmd_backtest(cfg: &RunConfig, inputs: &BacktestInputs) -> CliResult<SectorReportBundle> {
    let override_prices: Option<BTreeMap<String, f64>> = match &inputs.predicted_prices {
        Some(p) => Some(read_json(p)?),
        None => None,
    };
    let bundle = match &inputs.optimum_fixture {
        Some(path) => backtest_fixtures(path, inputs.eigen_fixture.as_deref(), override_prices)?,
        None if inputs.eigen_fixture.is_some() => {
            return Err(CliError::Config("--eigen-fixture requires --optimum-fixture".into()))
        }
        None => backtest_artifacts(cfg, override_prices)?,
    };

    let dir = &cfg.output_dir;
    write_json(&dir.join(BACKTEST_JSON), &bundle)?;
    write_text(
        &dir.join("backtest_optimum.csv"),
        &report_csv(&bundle.optimum.allocation, &bundle.optimum.actual),
    )?;
    if let Some(e) = &bundle.eigen {
        write_text(&dir.join("backtest_eigen.csv"), &report_csv(&e.allocation, &e.actual))?;
    }
    if let Some(p) = &bundle.predicted {
        let alloc = match p.portfolio {
            PortfolioKind::Optimum => &bundle.optimum.allocation,
            PortfolioKind::Eigen => &bundle.eigen.as_ref().expect("eigen backtested").allocation,
        };
        write_text(&dir.join("backtest_predicted.csv"), &report_csv(alloc, &p.report))?;
    }
    Ok(bundle)
}

fn load_fixture(path: &Path) -> CliResult<SectorFixture> {
    if !path.exists() {
        return Err(CliError::Io {
            path: path.to_path_buf(),
            source: std::io::Error::new(std::io::ErrorKind::NotFound, "fixture not found"),
        });
    }
    let file = File::open(path).map_err(io_err(path))?;
    SectorFixture::from_reader(std::io::BufReader::new(file)).map_err(|e| match e {
        Error::Json(source) => CliError::Artifact {
            path: path.to_path_buf(),
            source,
        },
        e => e.into(),
    })
}

fn backtest_fixtures(
    optimum_path: &Path,
    eigen_path: Option<&Path>,
    override_prices: Option<BTreeMap<String, f64>>,
) -> CliResult<SectorReportBundle> {
    let opt_fx = load_fixture(optimum_path)?;
    let optimum = PortfolioBacktest {
        allocation: opt_fx.allocate()?,
        actual: opt_fx.realize()?,
    };
    let eigen_fx = eigen_path.map(load_fixture).transpose()?;
    let (eigen, eigen_skipped) = match &eigen_fx {
        Some(fx) => eigen_or_skip(
            fx.allocate()
                .and_then(|allocation| Ok(PortfolioBacktest { actual: fx.realize()?, allocation })),
        )?,
        None => (None, Some("no eigen fixture given".into())),
    };

    let predicted = if let Some(prices) = override_prices {
        Some(predicted_from(PortfolioKind::Optimum, &optimum.allocation, prices)?)
    } else if let Some(prices) = opt_fx.predicted_prices() {
        Some(predicted_from(PortfolioKind::Optimum, &optimum.allocation, prices)?)
    } else if let (Some(fx), Some(e)) = (&eigen_fx, &eigen) {
        match fx.predicted_prices() {
            Some(prices) => Some(predicted_from(PortfolioKind::Eigen, &e.allocation, prices)?),
            None => None,
        }
    } else {
        None
    };
    if predicted.is_none() {
        log::warn!("no predicted prices in the fixtures; predicted return left empty");
    }

    Ok(assemble(
        opt_fx.sector.clone(),
        opt_fx.entry_date,
        opt_fx.exit_date,
        opt_fx.capital,
        None,
        None,
        optimum,
        eigen,
        eigen_skipped,
        predicted,
    ))
}

fn backtest_artifacts(cfg: &RunConfig, override_prices: Option<BTreeMap<String, f64>>) -> CliResult<SectorReportBundle> {
    let dir = &cfg.output_dir;
    let frontier: FrontierArtifact = read_artifact(&dir.join(FRONTIER_JSON), "frontier")?;
    let eigen_report: EigenReport = read_artifact(&dir.join(EIGEN_JSON), "eigen")?;
    let predicted_prices = match override_prices {
        Some(p) => p,
        None => read_artifact::<Predictions>(&dir.join(PREDICTIONS_JSON), "predict")?.exit_prices(),
    };

    let panel = load_panel(cfg)?;
    let entry = panel.prices_as_of(cfg.entry_date)?;
    let exit = panel.prices_as_of(cfg.exit_date)?;

    let sample = frontier.optimum().clone();
    let optimum = run_portfolio(cfg.capital, &frontier.tickers, sample.weights.as_slice(), &entry, &exit)?;
    let candidate = eigen_report.selected().cloned();
    let (eigen, eigen_skipped) = match &candidate {
        Some(c) => eigen_or_skip(run_portfolio(
            cfg.capital,
            &eigen_report.tickers,
            c.weights.as_slice(),
            &entry,
            &exit,
        ))?,
        None => (None, Some("eigen report has no selected candidate".into())),
    };
    let predicted = predicted_from(PortfolioKind::Optimum, &optimum.allocation, predicted_prices)?;

    Ok(assemble(
        cfg.sector.clone(),
        cfg.entry_date,
        cfg.exit_date,
        cfg.capital,
        Some(sample),
        candidate,
        optimum,
        eigen,
        eigen_skipped,
        Some(predicted),
    ))
}

#[allow(clippy::too_many_arguments)]
fn assemble(
    sector: String,
    entry_date: NaiveDate,
    exit_date: NaiveDate,
    capital: f64,
    optimum_sample: Option<PortfolioSample>,
    eigen_candidate: Option<EigenCandidate>,
    optimum: PortfolioBacktest,
    eigen: Option<PortfolioBacktest>,
    eigen_skipped: Option<String>,
    predicted: Option<PredictedBacktest>,
) -> SectorReportBundle {
    let summary = SummaryRow {
        sector: sector.clone(),
        returns: SectorReturns {
            optimum: optimum.actual.return_pct,
            eigen: eigen.as_ref().map(|e| e.actual.return_pct),
            predicted: predicted.as_ref().map(|p| p.report.return_pct),
        },
    };
    SectorReportBundle {
        sector,
        entry_date,
        exit_date,
        capital,
        optimum_sample,
        eigen_candidate,
        optimum,
        eigen,
        eigen_skipped,
        predicted,
        summary,
    }
}

/// Collects the summary rows of several sector bundles into one table.
pub fn cmd_report(cfg: &RunConfig, bundles: &[PathBuf]) -> CliResult<SummaryTable> {
    if bundles.is_empty() {
        return Err(CliError::Config("report needs at least one --bundle".into()));
    }
    let mut rows = BTreeMap::new();
    for path in bundles {
        let bundle: SectorReportBundle = read_artifact(path, "backtest")?;
        let sector = bundle.summary.sector.clone();
        if rows.insert(sector.clone(), bundle.summary.returns).is_some() {
            return Err(CliError::Config(format!("sector {sector} appears in more than one bundle")));
        }
    }
    let table = summary(&rows);
    write_text(&cfg.output_dir.join(SUMMARY_CSV), &table.to_csv())?;
    write_json(&cfg.output_dir.join(SUMMARY_JSON), &table)?;
    Ok(table)
}

/// Actual against predicted closes for one ticker over the holding period.
pub fn cmd_plot_prediction(cfg: &RunConfig, ticker: &str) -> CliResult<PathBuf> {
    let predictions: Predictions = read_artifact(&cfg.output_dir.join(PREDICTIONS_JSON), "predict")?;
    let p = predictions
        .tickers
        .iter()
        .find(|p| p.ticker == ticker)
        .ok_or_else(|| CliError::Config(format!("ticker {ticker} not found in {PREDICTIONS_JSON}")))?;
    let dates: Vec<NaiveDate> = p.path.iter().map(|x| x.date).collect();
    let actual: Vec<f64> = p.path.iter().map(|x| x.actual).collect();
    let predicted: Vec<f64> = p.path.iter().map(|x| x.predicted).collect();
    let svg = prediction_svg(&dates, &actual, &predicted, &format!("{ticker}: actual vs. predicted close"));
    let path = cfg.output_dir.join(PLOT_DIR).join(format!("{}.svg", file_stem(ticker)));
    write_text(&path, &svg)?;
    Ok(path)
}
