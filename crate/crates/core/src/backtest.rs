//! Buy-and-hold evaluation of a portfolio between an entry and exit date.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Read;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_CAPITAL: f64 = 100_000.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Position {
    pub ticker: String,
    pub weight: f64,
    pub amount_invested: f64,
    pub entry_price: f64,
    /// Fractional share count, never rounded.
    pub shares: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Allocation {
    pub capital: f64,
    pub positions: Vec<Position>,
}

impl Allocation {
    pub fn invested(&self) -> f64 {
        self.positions.iter().map(|p| p.amount_invested).sum()
    }

    pub fn tickers(&self) -> impl Iterator<Item = &str> {
        self.positions.iter().map(|p| p.ticker.as_str())
    }
}

/// Splits `capital` across `tickers` by `weights` at the entry prices.
pub fn allocate(
    capital: f64,
    tickers: &[String],
    weights: &[f64],
    entry_prices: &BTreeMap<String, f64>,
) -> Result<Allocation> {
    if !(capital > 0.0) || !capital.is_finite() {
        return Err(Error::Domain(format!("capital must be positive, got {capital}")));
    }
    if tickers.len() != weights.len() {
        return Err(Error::Dimension {
            expected: tickers.len(),
            actual: weights.len(),
        });
    }
    let mut positions = Vec::with_capacity(tickers.len());
    for (ticker, &weight) in tickers.iter().zip(weights) {
        if weight < 0.0 {
            return Err(Error::UnsupportedShort {
                ticker: ticker.clone(),
                weight,
            });
        }
        let entry_price = *entry_prices.get(ticker).ok_or_else(|| Error::MissingData {
            ticker: ticker.clone(),
        })?;
        if !(entry_price > 0.0) {
            return Err(Error::Domain(format!("entry price for {ticker} must be positive, got {entry_price}")));
        }
        let amount_invested = capital * weight;
        positions.push(Position {
            ticker: ticker.clone(),
            weight,
            amount_invested,
            entry_price,
            shares: amount_invested / entry_price,
        });
    }
    Ok(Allocation { capital, positions })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PriceBasis {
    Actual,
    Predicted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExitLine {
    pub ticker: String,
    pub shares: f64,
    pub exit_price: f64,
    pub exit_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BacktestReport {
    pub basis: PriceBasis,
    pub capital: f64,
    pub lines: Vec<ExitLine>,
    pub portfolio_value: f64,
    pub return_pct: f64,
}

fn value_at(alloc: &Allocation, exit_prices: &BTreeMap<String, f64>, basis: PriceBasis) -> Result<BacktestReport> {
    let mut lines = Vec::with_capacity(alloc.positions.len());
    for p in &alloc.positions {
        let exit_price = *exit_prices.get(&p.ticker).ok_or_else(|| Error::MissingData {
            ticker: p.ticker.clone(),
        })?;
        if !(exit_price > 0.0) {
            return Err(Error::Domain(format!("exit price for {} must be positive, got {exit_price}", p.ticker)));
        }
        lines.push(ExitLine {
            ticker: p.ticker.clone(),
            shares: p.shares,
            exit_price,
            exit_value: p.shares * exit_price,
        });
    }
    let portfolio_value: f64 = lines.iter().map(|l| l.exit_value).sum();
    Ok(BacktestReport {
        basis,
        capital: alloc.capital,
        lines,
        portfolio_value,
        return_pct: (portfolio_value / alloc.capital - 1.0) * 100.0,
    })
}

/// Values the allocation at realized exit prices.
pub fn realize(alloc: &Allocation, exit_prices: &BTreeMap<String, f64>) -> Result<BacktestReport> {
    value_at(alloc, exit_prices, PriceBasis::Actual)
}

/// Values the allocation at forecast exit prices.
pub fn predicted_report(alloc: &Allocation, predicted_prices: &BTreeMap<String, f64>) -> Result<BacktestReport> {
    value_at(alloc, predicted_prices, PriceBasis::Predicted)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectorReturns {
    pub optimum: f64,
    pub eigen: Option<f64>,
    pub predicted: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub sector: String,
    #[serde(flatten)]
    pub returns: SectorReturns,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryTable {
    pub rows: Vec<SummaryRow>,
}

/// Sector returns table, rows ordered case-insensitively by sector name.
pub fn summary(reports: &BTreeMap<String, SectorReturns>) -> SummaryTable {
    let mut rows: Vec<SummaryRow> = reports
        .iter()
        .map(|(sector, r)| SummaryRow {
            sector: sector.clone(),
            returns: *r,
        })
        .collect();
    rows.sort_by(|a, b| {
        a.sector
            .to_lowercase()
            .cmp(&b.sector.to_lowercase())
            .then_with(|| a.sector.cmp(&b.sector))
    });
    SummaryTable { rows }
}

fn pct(v: Option<f64>) -> String {
    v.map(|v| format!("{v:.2}")).unwrap_or_else(|| "n/a".into())
}

impl SummaryTable {
    pub fn to_csv(&self) -> String {
        let mut table = vec![vec![
            "Portfolio".to_string(),
            "Opt. Port Return (%)".into(),
            "Eigen Port Return (%)".into(),
            "LSTM Pred Return (%)".into(),
        ]];
        for r in &self.rows {
            table.push(vec![
                r.sector.clone(),
                pct(Some(r.returns.optimum)),
                pct(r.returns.eigen),
                pct(r.returns.predicted),
            ]);
        }
        aligned_csv(&table)
    }
}

/// Comma-separated rows padded so columns line up.
pub fn aligned_csv(table: &[Vec<String>]) -> String {
    let cols = table.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| table.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in table {
        let cells: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(c, s)| {
                if c + 1 == row.len() {
                    format!("{s:>w$}", w = widths[c])
                } else if c == 0 {
                    format!("{s:<w$}", w = widths[c])
                } else {
                    format!("{s:>w$}", w = widths[c])
                }
            })
            .collect();
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}

/// Allocation and its exit valuation in the layout of a portfolio table.
pub fn report_csv(alloc: &Allocation, report: &BacktestReport) -> String {
    let label = match report.basis {
        PriceBasis::Actual => ("Act Price", "Act Value"),
        PriceBasis::Predicted => ("Pred Price", "Pred Value"),
    };
    let mut table = vec![vec![
        "Stock".to_string(),
        "Wts".into(),
        "Amnt Invstd".into(),
        "Entry Price".into(),
        "No of Stocks".into(),
        label.0.into(),
        label.1.into(),
    ]];
    for (p, l) in alloc.positions.iter().zip(&report.lines) {
        table.push(vec![
            p.ticker.clone(),
            format!("{:.4}", p.weight),
            format!("{:.0}", p.amount_invested),
            format!("{:.2}", p.entry_price),
            format!("{:.2}", p.shares),
            format!("{:.2}", l.exit_price),
            format!("{:.0}", l.exit_value),
        ]);
    }
    table.push(vec![
        "Total".into(),
        String::new(),
        format!("{:.0}", alloc.invested()),
        String::new(),
        String::new(),
        String::new(),
        format!("{:.0}", report.portfolio_value),
    ]);
    table.push(vec![format!("Return (%): {:.2}", report.return_pct)]);
    aligned_csv(&table)
}

/// Which construction produced a fixture's weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PortfolioKind {
    #[default]
    Optimum,
    Eigen,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureRow {
    pub ticker: String,
    pub weight: f64,
    pub entry_price: f64,
    pub exit_price: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predicted_price: Option<f64>,
}

/// A portfolio with its entry, exit and (optionally) forecast prices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorFixture {
    pub sector: String,
    #[serde(default)]
    pub portfolio: PortfolioKind,
    pub capital: f64,
    pub entry_date: NaiveDate,
    pub exit_date: NaiveDate,
    pub rows: Vec<FixtureRow>,
}

impl SectorFixture {
    pub fn from_reader<R: Read>(reader: R) -> Result<Self> {
        Ok(serde_json::from_reader(reader)?)
    }

    pub fn tickers(&self) -> Vec<String> {
        self.rows.iter().map(|r| r.ticker.clone()).collect()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.weight).collect()
    }

    fn prices(&self, f: impl Fn(&FixtureRow) -> Option<f64>) -> Option<BTreeMap<String, f64>> {
        self.rows.iter().map(|r| f(r).map(|p| (r.ticker.clone(), p))).collect()
    }

    pub fn entry_prices(&self) -> BTreeMap<String, f64> {
        self.prices(|r| Some(r.entry_price)).expect("always present")
    }

    pub fn exit_prices(&self) -> BTreeMap<String, f64> {
        self.prices(|r| Some(r.exit_price)).expect("always present")
    }

    /// Forecast prices, if every row carries one.
    pub fn predicted_prices(&self) -> Option<BTreeMap<String, f64>> {
        self.prices(|r| r.predicted_price)
    }

    pub fn has_predictions(&self) -> bool {
        self.rows.iter().any(|r| r.predicted_price.is_some())
    }

    pub fn allocate(&self) -> Result<Allocation> {
        allocate(self.capital, &self.tickers(), &self.weights(), &self.entry_prices())
    }

    pub fn realize(&self) -> Result<BacktestReport> {
        realize(&self.allocate()?, &self.exit_prices())
    }

    pub fn predicted(&self) -> Result<Option<BacktestReport>> {
        match self.predicted_prices() {
            Some(p) => Ok(Some(predicted_report(&self.allocate()?, &p)?)),
            None if self.has_predictions() => {
                let missing = self
                    .rows
                    .iter()
                    .find(|r| r.predicted_price.is_none())
                    .map(|r| r.ticker.clone())
                    .unwrap_or_default();
                Err(Error::MissingData { ticker: missing })
            }
            None => Ok(None),
        }
    }
}
