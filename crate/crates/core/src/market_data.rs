//! Close-price ingestion, calendar alignment and daily return statistics.
//!
//! Input is long-format CSV with the header `ticker,date,close`. Per-ticker
//! series are aligned by intersecting their calendars; no price is ever
//! forward-filled.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{Read, Write};

use chrono::NaiveDate;
use ndarray::{Array1, Array2, Axis};
use serde::Deserialize;

use crate::error::{Error, Result};

/// Trading days per year used to annualize daily statistics.
pub const TRADING_DAYS_PER_YEAR: f64 = 250.0;

const DATE_FORMAT: &str = "%Y-%m-%d";

/// Close-price history of a single ticker, sorted by date.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceSeries {
    ticker: String,
    observations: Vec<(NaiveDate, f64)>,
}

impl PriceSeries {
    /// Builds a series from unsorted observations, checking for duplicate
    /// dates and non-positive closes.
    pub fn new(ticker: impl Into<String>, mut observations: Vec<(NaiveDate, f64)>) -> Result<Self> {
        let ticker = ticker.into();
        observations.sort_by_key(|(d, _)| *d);
        for pair in observations.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(Error::DuplicateObservation {
                    ticker,
                    date: pair[0].0,
                });
            }
        }
        if let Some((date, close)) = observations.iter().find(|(_, c)| !(*c > 0.0) || !c.is_finite()) {
            return Err(Error::Domain(format!(
                "{ticker} close on {date} must be a positive finite price, got {close}"
            )));
        }
        Ok(Self {
            ticker,
            observations,
        })
    }

    pub fn ticker(&self) -> &str {
        &self.ticker
    }

    pub fn observations(&self) -> &[(NaiveDate, f64)] {
        &self.observations
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn dates(&self) -> impl Iterator<Item = NaiveDate> + '_ {
        self.observations.iter().map(|(d, _)| *d)
    }

    pub fn closes(&self) -> Vec<f64> {
        self.observations.iter().map(|(_, c)| *c).collect()
    }
}

#[derive(Debug, Deserialize)]
struct CsvRow {
    ticker: String,
    date: String,
    close: String,
}

/// Reads `ticker,date,close` CSV text into one series per distinct ticker.
///
/// Series are returned in order of first appearance in the file.
pub fn load_prices<R: Read>(source: R) -> Result<Vec<PriceSeries>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(source);

    let headers = reader.headers().map_err(|e| Error::Parse {
        line: 1,
        message: e.to_string(),
    })?;
    let expected = ["ticker", "date", "close"];
    if headers.len() != 3 || headers.iter().zip(expected).any(|(h, e)| h != e) {
        return Err(Error::Parse {
            line: 1,
            message: format!("expected header `ticker,date,close`, got `{}`", headers.iter().collect::<Vec<_>>().join(",")),
        });
    }

    let mut order: Vec<String> = Vec::new();
    let mut by_ticker: BTreeMap<String, BTreeMap<NaiveDate, f64>> = BTreeMap::new();
    let mut record = csv::StringRecord::new();
    loop {
        let line = reader.position().line() as usize;
        match reader.read_record(&mut record) {
            Ok(false) => break,
            Ok(true) => {}
            Err(e) => {
                let line = e.position().map(|p| p.line() as usize).unwrap_or(line);
                return Err(Error::Parse {
                    line,
                    message: e.to_string(),
                });
            }
        }
        let line = record.position().map(|p| p.line() as usize).unwrap_or(line);
        let row: CsvRow = record.deserialize(None).map_err(|e| Error::Parse {
            line,
            message: e.to_string(),
        })?;
        if row.ticker.is_empty() {
            return Err(Error::Parse {
                line,
                message: "empty ticker".into(),
            });
        }
        let date = NaiveDate::parse_from_str(&row.date, DATE_FORMAT).map_err(|e| Error::Parse {
            line,
            message: format!("bad date `{}`: {e}", row.date),
        })?;
        let close: f64 = row.close.parse().map_err(|_| Error::Parse {
            line,
            message: format!("bad close `{}`", row.close),
        })?;
        if !close.is_finite() || close <= 0.0 {
            return Err(Error::Domain(format!(
                "line {line}: close for {} on {date} must be positive, got {close}",
                row.ticker
            )));
        }
        let entry = by_ticker.entry(row.ticker.clone()).or_insert_with(|| {
            order.push(row.ticker.clone());
            BTreeMap::new()
        });
        if entry.insert(date, close).is_some() {
            return Err(Error::DuplicateObservation {
                ticker: row.ticker,
                date,
            });
        }
    }

    order
        .into_iter()
        .map(|ticker| {
            let obs = by_ticker.remove(&ticker).unwrap_or_default();
            PriceSeries::new(ticker, obs.into_iter().collect())
        })
        .collect()
}

/// Aligned close prices: `closes[[t, i]]` is ticker `i` on `dates[t]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PricePanel {
    tickers: Vec<String>,
    dates: Vec<NaiveDate>,
    closes: Array2<f64>,
}

impl PricePanel {
    pub fn new(tickers: Vec<String>, dates: Vec<NaiveDate>, closes: Array2<f64>) -> Result<Self> {
        if closes.ncols() != tickers.len() || closes.nrows() != dates.len() {
            return Err(Error::Shape(format!(
                "closes is {}x{}, expected {}x{}",
                closes.nrows(),
                closes.ncols(),
                dates.len(),
                tickers.len()
            )));
        }
        if tickers.is_empty() {
            return Err(Error::Argument("panel needs at least one ticker".into()));
        }
        if dates.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain("panel dates must be strictly increasing".into()));
        }
        if closes.iter().any(|c| !(*c > 0.0) || !c.is_finite()) {
            return Err(Error::Domain("panel closes must be positive".into()));
        }
        Ok(Self {
            tickers,
            dates,
            closes,
        })
    }

    pub fn tickers(&self) -> &[String] {
        &self.tickers
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn closes(&self) -> &Array2<f64> {
        &self.closes
    }

    pub fn n_tickers(&self) -> usize {
        self.tickers.len()
    }

    pub fn n_dates(&self) -> usize {
        self.dates.len()
    }

    pub fn ticker_index(&self, ticker: &str) -> Option<usize> {
        self.tickers.iter().position(|t| t == ticker)
    }

    pub fn column(&self, ticker: &str) -> Result<Vec<f64>> {
        let i = self.ticker_index(ticker).ok_or_else(|| Error::MissingData {
            ticker: ticker.to_string(),
        })?;
        Ok(self.closes.column(i).to_vec())
    }

    /// Splits the panel back into per-ticker series.
    pub fn to_series(&self) -> Vec<PriceSeries> {
        self.tickers
            .iter()
            .enumerate()
            .map(|(i, t)| PriceSeries {
                ticker: t.clone(),
                observations: self
                    .dates
                    .iter()
                    .copied()
                    .zip(self.closes.column(i).iter().copied())
                    .collect(),
            })
            .collect()
    }

    /// Restricts the panel to the given tickers, in the given order.
    pub fn select(&self, tickers: &[String]) -> Result<PricePanel> {
        let idx = tickers
            .iter()
            .map(|t| {
                self.ticker_index(t).ok_or_else(|| Error::MissingData { ticker: t.clone() })
            })
            .collect::<Result<Vec<_>>>()?;
        let closes = self.closes.select(Axis(1), &idx);
        PricePanel::new(tickers.to_vec(), self.dates.clone(), closes)
    }

    /// Rows with `start <= date <= end`.
    pub fn between(&self, start: NaiveDate, end: NaiveDate) -> Result<PricePanel> {
        let rows: Vec<usize> = (0..self.dates.len())
            .filter(|&t| self.dates[t] >= start && self.dates[t] <= end)
            .collect();
        if rows.is_empty() {
            return Err(Error::Alignment(format!("no trading dates between {start} and {end}")));
        }
        PricePanel::new(
            self.tickers.clone(),
            rows.iter().map(|&t| self.dates[t]).collect(),
            self.closes.select(Axis(0), &rows),
        )
    }

    /// Index of the last trading date on or before `date`.
    pub fn row_as_of(&self, date: NaiveDate) -> Option<usize> {
        match self.dates.binary_search(&date) {
            Ok(i) => Some(i),
            Err(0) => None,
            Err(i) => Some(i - 1),
        }
    }

    /// Close of every ticker on the last trading date on or before `date`.
    pub fn prices_as_of(&self, date: NaiveDate) -> Result<BTreeMap<String, f64>> {
        let row = self.row_as_of(date).ok_or_else(|| {
            Error::Alignment(format!("no trading date on or before {date}"))
        })?;
        Ok(self
            .tickers
            .iter()
            .cloned()
            .zip(self.closes.row(row).iter().copied())
            .collect())
    }

    /// Writes the panel back out in `ticker,date,close` form.
    pub fn write_csv<W: Write>(&self, sink: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(sink);
        let map = |e: csv::Error| Error::Io(std::io::Error::other(e));
        w.write_record(["ticker", "date", "close"]).map_err(map)?;
        for (i, ticker) in self.tickers.iter().enumerate() {
            for (t, date) in self.dates.iter().enumerate() {
                w.write_record([
                    ticker.as_str(),
                    &date.format(DATE_FORMAT).to_string(),
                    &format!("{}", self.closes[[t, i]]),
                ])
                .map_err(map)?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// Aligns series onto the intersection of their calendars.
pub fn align(series: &[PriceSeries]) -> Result<PricePanel> {
    if series.is_empty() {
        return Err(Error::Argument("no series to align".into()));
    }
    if let Some(s) = series.iter().find(|s| s.is_empty()) {
        return Err(Error::Argument(format!("series {} is empty", s.ticker)));
    }
    let mut common: BTreeSet<NaiveDate> = series[0].dates().collect();
    for s in &series[1..] {
        let other: BTreeSet<NaiveDate> = s.dates().collect();
        common = common.intersection(&other).copied().collect();
    }
    if common.is_empty() {
        return Err(Error::Alignment(format!(
            "tickers {} share no common trading date",
            series.iter().map(|s| s.ticker.as_str()).collect::<Vec<_>>().join(",")
        )));
    }
    let dates: Vec<NaiveDate> = common.into_iter().collect();
    let mut closes = Array2::zeros((dates.len(), series.len()));
    for (i, s) in series.iter().enumerate() {
        let mut t = 0;
        for &(d, c) in &s.observations {
            if t < dates.len() && d == dates[t] {
                closes[[t, i]] = c;
                t += 1;
            }
        }
    }
    PricePanel::new(
        series.iter().map(|s| s.ticker.clone()).collect(),
        dates,
        closes,
    )
}

/// Daily simple returns, one row per consecutive pair of panel dates.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnMatrix {
    tickers: Vec<String>,
    dates: Vec<NaiveDate>,
    returns: Array2<f64>,
}

impl ReturnMatrix {
    pub fn new(tickers: Vec<String>, dates: Vec<NaiveDate>, returns: Array2<f64>) -> Result<Self> {
        if returns.ncols() != tickers.len() || returns.nrows() != dates.len() {
            return Err(Error::Shape(format!(
                "returns is {}x{}, expected {}x{}",
                returns.nrows(),
                returns.ncols(),
                dates.len(),
                tickers.len()
            )));
        }
        Ok(Self {
            tickers,
            dates,
            returns,
        })
    }

    pub fn tickers(&self) -> &[String] {
        &self.tickers
    }

    /// Date of the later close of each return.
    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.returns
    }

    pub fn n_rows(&self) -> usize {
        self.returns.nrows()
    }

    pub fn n_tickers(&self) -> usize {
        self.returns.ncols()
    }
}

pub fn daily_returns(panel: &PricePanel) -> Result<ReturnMatrix> {
    let t = panel.n_dates();
    if t < 2 {
        return Err(Error::InsufficientData {
            context: "daily returns",
            required: 2,
            actual: t,
        });
    }
    let c = &panel.closes;
    let mut r = Array2::zeros((t - 1, panel.n_tickers()));
    for row in 0..t - 1 {
        for i in 0..panel.n_tickers() {
            r[[row, i]] = c[[row + 1, i]] / c[[row, i]] - 1.0;
        }
    }
    ReturnMatrix::new(panel.tickers.clone(), panel.dates[1..].to_vec(), r)
}

/// Sample standard deviation of each return column scaled by `sqrt(trading_days)`.
pub fn annualized_volatility(returns: &ReturnMatrix, trading_days: f64) -> Result<Array1<f64>> {
    if returns.n_rows() < 2 {
        return Err(Error::InsufficientData {
            context: "annualized volatility",
            required: 2,
            actual: returns.n_rows(),
        });
    }
    Ok(returns
        .returns
        .std_axis(Axis(0), 1.0)
        .mapv(|s| s * trading_days.sqrt()))
}
