//! Library results against independent brute-force computations.
#![allow(clippy::needless_range_loop)]

#[path = "support/jacobi.rs"]
mod jacobi;

use chrono::NaiveDate;
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sectorfolio::eigen::{fit_pca, symmetric_eigen_sorted};
use sectorfolio::frontier::{build_frontier, select_max_sharpe, select_min_variance};
use sectorfolio::market_data::{annualized_volatility, daily_returns};
use sectorfolio::portfolio::{portfolio_return, portfolio_variance};
use sectorfolio::{PricePanel, ReturnMatrix, ReturnStats, RiskFree, Weights};

fn dates(n: usize) -> Vec<NaiveDate> {
    let d0 = NaiveDate::from_ymd_opt(2016, 1, 1).unwrap();
    (0..n).map(|i| d0 + chrono::Days::new(i as u64)).collect()
}

fn tickers(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("T{i}")).collect()
}

fn random_panel(rng: &mut ChaCha8Rng, t: usize, n: usize) -> PricePanel {
    let closes = Array2::from_shape_fn((t, n), |_| rng.gen_range(10.0..500.0));
    PricePanel::new(tickers(n), dates(t), closes).unwrap()
}

fn random_returns(rng: &mut ChaCha8Rng, t: usize, n: usize) -> ReturnMatrix {
    let r = Array2::from_shape_fn((t, n), |_| rng.gen_range(-0.05..0.05));
    ReturnMatrix::new(tickers(n), dates(t), r).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

#[test]
fn daily_returns_match_quotients() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let panel = random_panel(&mut rng, 5, 3);
    let r = daily_returns(&panel).unwrap();
    assert_eq!(r.n_rows(), 4);
    for t in 0..4 {
        for i in 0..3 {
            let expect = (panel.closes()[[t + 1, i]] - panel.closes()[[t, i]]) / panel.closes()[[t, i]];
            assert!((r.values()[[t, i]] - expect).abs() <= 1e-12);
        }
    }
}

#[test]
fn returns_reconstruct_prices() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let panel = random_panel(&mut rng, 40, 4);
    let r = daily_returns(&panel).unwrap();
    for i in 0..4 {
        let mut p = panel.closes()[[0, i]];
        for t in 0..39 {
            p *= 1.0 + r.values()[[t, i]];
            assert!(rel(p, panel.closes()[[t + 1, i]]) <= 1e-10);
        }
    }
}

#[test]
fn volatility_matches_two_pass_variance() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let r = random_returns(&mut rng, 57, 4);
    let vol = annualized_volatility(&r, 250.0).unwrap();
    for i in 0..4 {
        let col: Vec<f64> = (0..57).map(|t| r.values()[[t, i]]).collect();
        let mean = col.iter().sum::<f64>() / 57.0;
        let var = col.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / 56.0;
        assert!((vol[i] - (var * 250.0).sqrt()).abs() <= 1e-12);
    }
}

#[test]
fn volatility_is_scale_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let panel = random_panel(&mut rng, 30, 3);
    let scaled = PricePanel::new(panel.tickers().to_vec(), panel.dates().to_vec(), panel.closes() * 7.5).unwrap();
    let a = annualized_volatility(&daily_returns(&panel).unwrap(), 250.0).unwrap();
    let b = annualized_volatility(&daily_returns(&scaled).unwrap(), 250.0).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!(rel(*x, *y) <= 1e-12);
    }
}

#[test]
fn portfolio_formulas_match_weighted_return_series() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let n = rng.gen_range(1..=8);
        let t = rng.gen_range(n + 2..120);
        let r = random_returns(&mut rng, t, n);
        let raw: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
        let total: f64 = raw.iter().sum();
        let w = Weights::new(raw.iter().map(|v| v / total).collect()).unwrap();
        let stats = ReturnStats::estimate(&r, 250.0).unwrap();

        let series: Vec<f64> = (0..t)
            .map(|row| (0..n).map(|i| w.as_slice()[i] * r.values()[[row, i]]).sum())
            .collect();
        let mean = series.iter().sum::<f64>() / t as f64;
        let var = series.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (t as f64 - 1.0);

        assert!(rel(portfolio_return(&w, &stats).unwrap(), mean * 250.0) <= 1e-10);
        assert!(rel(portfolio_variance(&w, &stats).unwrap().variance, var * 250.0) <= 1e-10);
    }
}

#[test]
fn portfolio_return_matches_explicit_loop() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let r = random_returns(&mut rng, 50, 6);
    let stats = ReturnStats::estimate(&r, 250.0).unwrap();
    let w = Weights::new((0..6).map(|_| rng.gen_range(-0.5..1.0)).collect()).unwrap();
    let mut dot = 0.0;
    for i in 0..6 {
        dot += w.as_slice()[i] * stats.mean_annual()[i];
    }
    assert!((portfolio_return(&w, &stats).unwrap() - dot).abs() <= 1e-15);
}

#[test]
fn selections_match_linear_scans() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let r = random_returns(&mut rng, 200, 5);
    let stats = ReturnStats::estimate(&r, 250.0).unwrap();
    let f = build_frontier(&stats, 1000, 99, RiskFree::default()).unwrap();

    let mut min_i = 0;
    let mut max_i = 0;
    for i in 0..f.samples.len() {
        if f.samples[i].ann_volatility < f.samples[min_i].ann_volatility {
            min_i = i;
        }
        if f.samples[i].sharpe > f.samples[max_i].sharpe {
            max_i = i;
        }
    }
    assert_eq!(select_min_variance(&f.samples).unwrap(), min_i);
    assert_eq!(select_max_sharpe(&f.samples).unwrap(), max_i);
    assert_eq!(f.min_variance, min_i);
    assert_eq!(f.max_sharpe, max_i);
}

fn eigen_against_jacobi(n: usize, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<Vec<f64>> = (0..40)
        .map(|_| {
            let common = rng.gen_range(-1.0..1.0);
            (0..n).map(|i| common * (i as f64 + 1.0) * 0.3 + rng.gen_range(-1.0..1.0)).collect()
        })
        .collect();
    let corr = jacobi::correlation(&rows);
    let (want_values, want_vectors) = jacobi::jacobi_eigen(&corr);

    let m = Array2::from_shape_fn((n, n), |(i, j)| corr[i][j]);
    let (values, vectors) = symmetric_eigen_sorted(&m);
    for j in 0..n {
        assert!((values[j] - want_values[j]).abs() <= 1e-8, "eigenvalue {j}");
        for i in 0..n {
            assert!((vectors[[j, i]] - want_vectors[j][i]).abs() <= 1e-8, "vector {j} entry {i}");
        }
    }

    // PCA on the same returns sees the same correlation matrix.
    let flat = Array2::from_shape_fn((40, n), |(t, i)| rows[t][i]);
    let returns = ReturnMatrix::new(tickers(n), dates(40), flat).unwrap();
    let pca = fit_pca(&returns, 1.0).unwrap();
    assert_eq!(pca.k(), n);
    for j in 0..n {
        assert!((pca.eigenvalues()[j] - want_values[j]).abs() <= 1e-8);
    }

    let diag = Array2::from_diag(&values);
    let rebuilt = vectors.t().dot(&diag).dot(&vectors);
    let err = (&rebuilt - &m).mapv(|v| v * v).sum().sqrt();
    let norm = m.mapv(|v| v * v).sum().sqrt();
    assert!(err / norm <= 1e-8);
}

#[test]
fn eigen_3x3_matches_jacobi() {
    for seed in 0..5 {
        eigen_against_jacobi(3, seed);
    }
}

#[test]
fn eigen_5x5_matches_jacobi() {
    for seed in 10..15 {
        eigen_against_jacobi(5, seed);
    }
}
