//! Sector portfolio toolkit.
//!
//! The pipeline ingests close-price histories, estimates annualized return
//! statistics, builds an optimum-risk portfolio from a Monte Carlo frontier
//! and an eigen portfolio from principal components, forecasts next-day
//! prices with an LSTM regressor and backtests the resulting portfolios.

// `!(x > 0.0)` is used deliberately so NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod backtest;
pub mod eigen;
pub mod error;
pub mod frontier;
pub mod lstm;
pub mod market_data;
pub mod plot;
pub mod portfolio;

pub use error::{Error, Result};
pub use market_data::{PricePanel, PriceSeries, ReturnMatrix, TRADING_DAYS_PER_YEAR};
pub use portfolio::{ReturnStats, RiskFree, Weights};
