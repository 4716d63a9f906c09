//! Printed backtest totals and returns with the fixture that encodes each table.

use std::path::PathBuf;

use sectorfolio::backtest::{BacktestReport, SectorFixture};

pub struct PrintedTable {
    pub label: &'static str,
    pub fixture: &'static str,
    pub predicted: bool,
    pub total: f64,
    pub return_pct: f64,
}

const fn t(label: &'static str, fixture: &'static str, predicted: bool, total: f64, return_pct: f64) -> PrintedTable {
    PrintedTable {
        label,
        fixture,
        predicted,
        total,
        return_pct,
    }
}

pub const PRINTED: [PrintedTable; 12] = [
    t("I", "fin_services_optimum", false, 111145.0, 11.15),
    t("II", "fin_services_eigen", false, 114714.0, 14.71),
    t("III", "fin_services_optimum", true, 110166.0, 10.17),
    t("IV", "oil_gas_optimum", false, 155295.0, 55.30),
    t("V", "oil_gas_eigen", false, 131468.0, 31.47),
    t("VI", "oil_gas_optimum", true, 156642.0, 56.64),
    t("VII", "pharma_optimum", false, 107908.0, 7.91),
    t("VIII", "pharma_eigen", false, 111288.0, 11.29),
    t("IX", "pharma_optimum", true, 105528.0, 5.53),
    t("X", "psu_banks_optimum", false, 156043.0, 56.04),
    t("XI", "psu_banks_eigen", false, 154301.0, 54.30),
    t("XII", "psu_banks_eigen", true, 151713.0, 51.71),
];

/// Summary rows: sector, optimum, eigen, predicted return (%).
pub const SUMMARY: [(&str, f64, f64, f64); 4] = [
    ("Fin Services", 11.15, 14.71, 10.17),
    ("Oil & Gas", 55.30, 31.47, 56.64),
    ("Pharma", 7.91, 11.29, 5.53),
    ("PSU Banks", 56.04, 54.30, 51.71),
];

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures/tables")
}

pub fn load(name: &str) -> SectorFixture {
    let path = fixture_dir().join(format!("{name}.json"));
    let file = std::fs::File::open(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    SectorFixture::from_reader(file).unwrap()
}

pub fn compute(table: &PrintedTable) -> BacktestReport {
    let fx = load(table.fixture);
    if table.predicted {
        fx.predicted().unwrap().expect("fixture carries predicted prices")
    } else {
        fx.realize().unwrap()
    }
}

/// Totals and returns each within 0.5% of the printed value.
pub fn within_tolerance(table: &PrintedTable, report: &BacktestReport) -> bool {
    close(report.portfolio_value, table.total) && close(report.return_pct, table.return_pct)
}

pub fn close(computed: f64, printed: f64) -> bool {
    (computed - printed).abs() <= 0.005 * printed.abs()
}
