//! Eigen portfolios from principal components of standardized daily returns.
//!
//! Each retained component's loading vector is divided by the sum of its
//! entries to give a weight vector that sums to one (entries may be
//! negative). The candidate with the best Sharpe ratio is the eigen
//! portfolio.

use nalgebra::{DMatrix, SymmetricEigen};
use ndarray::{Array1, Array2, Axis};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::portfolio::{portfolio_return, portfolio_variance, sharpe_ratio, ReturnStats, RiskFree, Weights};
use crate::market_data::ReturnMatrix;

pub const DEFAULT_VARIANCE_TARGET: f64 = 0.80;

/// Loading sums closer to zero than this cannot be normalized.
pub const MIN_LOADING_SUM: f64 = 1e-12;

/// Principal components of the return correlation matrix, sorted by
/// descending eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct PcaResult {
    tickers: Vec<String>,
    /// n x n; row j is the unit loading vector of component j.
    components: Array2<f64>,
    eigenvalues: Array1<f64>,
    explained: Array1<f64>,
    k: usize,
    means: Array1<f64>,
    stds: Array1<f64>,
}

impl PcaResult {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn tickers(&self) -> &[String] {
        &self.tickers
    }

    /// Loadings of the retained components, k x n.
    pub fn loadings(&self) -> ndarray::ArrayView2<'_, f64> {
        self.components.slice(ndarray::s![..self.k, ..])
    }

    /// Loadings of every component, n x n.
    pub fn all_components(&self) -> &Array2<f64> {
        &self.components
    }

    pub fn eigenvalues(&self) -> &Array1<f64> {
        &self.eigenvalues
    }

    /// Explained-variance fractions of the retained components.
    pub fn explained_ratio(&self) -> ndarray::ArrayView1<'_, f64> {
        self.explained.slice(ndarray::s![..self.k])
    }

    /// Explained-variance fractions of all components; sums to one.
    pub fn explained_ratio_all(&self) -> &Array1<f64> {
        &self.explained
    }

    /// Standardizes `returns` with the column means and deviations of the fit.
    pub fn standardize(&self, returns: &Array2<f64>) -> Array2<f64> {
        (returns - &self.means) / &self.stds
    }
}

/// Fits PCA on the correlation matrix of `returns` and keeps the smallest
/// prefix of components whose explained variance reaches `variance_target`.
pub fn fit_pca(returns: &ReturnMatrix, variance_target: f64) -> Result<PcaResult> {
    if !(variance_target > 0.0 && variance_target <= 1.0) {
        return Err(Error::Argument(format!(
            "variance target must be in (0, 1], got {variance_target}"
        )));
    }
    let n = returns.n_tickers();
    let rows = returns.n_rows();
    if rows < n + 1 || rows < 2 {
        return Err(Error::InsufficientData {
            context: "PCA",
            required: (n + 1).max(2),
            actual: rows,
        });
    }
    let r = returns.values();
    let means = r.mean_axis(Axis(0)).expect("non-empty");
    let stds = r.std_axis(Axis(0), 1.0);
    for (i, s) in stds.iter().enumerate() {
        if !(*s > 0.0) {
            return Err(Error::DegenerateColumn {
                ticker: returns.tickers()[i].clone(),
            });
        }
    }
    let z = (r - &means) / &stds;
    let corr = z.t().dot(&z) / (rows as f64 - 1.0);

    let (eigenvalues, components) = symmetric_eigen_sorted(&corr);
    let total: f64 = eigenvalues.iter().map(|v| v.max(0.0)).sum();
    let explained = eigenvalues.mapv(|v| v.max(0.0) / total);
    let k = retained_count(&explained, variance_target);

    Ok(PcaResult {
        tickers: returns.tickers().to_vec(),
        components,
        eigenvalues,
        explained,
        k,
        means,
        stds,
    })
}

/// Smallest number of leading components whose ratios reach `target`.
fn retained_count(explained: &Array1<f64>, target: f64) -> usize {
    let mut cum = 0.0;
    for (j, r) in explained.iter().enumerate() {
        cum += r;
        // Round-off in the ratios must not push a full-variance target past n.
        if cum >= target - 1e-12 {
            return j + 1;
        }
    }
    explained.len()
}

/// Eigenpairs of a symmetric matrix, sorted by descending eigenvalue, with
/// eigenvectors as rows and each row's largest-magnitude entry positive.
pub fn symmetric_eigen_sorted(m: &Array2<f64>) -> (Array1<f64>, Array2<f64>) {
    let n = m.nrows();
    let dm = DMatrix::from_fn(n, n, |i, j| m[[i, j]]);
    let eig = SymmetricEigen::new(dm);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let values = Array1::from_iter(order.iter().map(|&j| eig.eigenvalues[j]));
    let mut vectors = Array2::zeros((n, n));
    for (row, &j) in order.iter().enumerate() {
        let col = eig.eigenvectors.column(j);
        let mut pivot = 0;
        for i in 1..n {
            if col[i].abs() > col[pivot].abs() {
                pivot = i;
            }
        }
        let sign = if col[pivot] < 0.0 { -1.0 } else { 1.0 };
        for i in 0..n {
            vectors[[row, i]] = sign * col[i];
        }
    }
    (values, vectors)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenCandidate {
    #[serde(rename = "component")]
    pub component_index: usize,
    pub weights: Weights,
    #[serde(rename = "return")]
    pub ann_return: f64,
    #[serde(rename = "volatility")]
    pub ann_volatility: f64,
    pub sharpe: f64,
}

/// Loading row divided by the sum of its entries.
pub fn loading_weights(component: usize, loading: &[f64]) -> Result<Weights> {
    let sum: f64 = loading.iter().sum();
    if sum.abs() <= MIN_LOADING_SUM {
        return Err(Error::NonNormalizable { component });
    }
    Weights::new(loading.iter().map(|v| v / sum).collect())
}

/// One candidate per retained component. Components whose loadings sum to
/// zero are skipped with a warning.
pub fn candidate_portfolios(pca: &PcaResult, stats: &ReturnStats, rf: RiskFree) -> Result<Vec<EigenCandidate>> {
    let mut out = Vec::with_capacity(pca.k);
    for (j, row) in pca.loadings().outer_iter().enumerate() {
        let weights = match loading_weights(j, &row.to_vec()) {
            Ok(w) => w,
            Err(e @ Error::NonNormalizable { .. }) => {
                log::warn!("skipping eigen candidate: {e}");
                continue;
            }
            Err(e) => return Err(e),
        };
        let ann_return = portfolio_return(&weights, stats)?;
        let ann_volatility = portfolio_variance(&weights, stats)?.volatility;
        let sharpe = sharpe_ratio(ann_return, ann_volatility, rf)?;
        out.push(EigenCandidate {
            component_index: j,
            weights,
            ann_return,
            ann_volatility,
            sharpe,
        });
    }
    Ok(out)
}

/// Candidate with the largest Sharpe ratio, lowest component on ties.
pub fn select_best_eigen(candidates: &[EigenCandidate]) -> Result<&EigenCandidate> {
    let mut best = candidates
        .first()
        .ok_or_else(|| Error::Argument("no eigen candidates".into()))?;
    for c in &candidates[1..] {
        if c.sharpe > best.sharpe
            || (c.sharpe == best.sharpe && c.component_index < best.component_index)
        {
            best = c;
        }
    }
    Ok(best)
}

/// Serialized eigen-portfolio result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenReport {
    pub tickers: Vec<String>,
    pub explained_ratio: Vec<f64>,
    pub k: usize,
    pub candidates: Vec<EigenCandidate>,
    pub selected_component: usize,
}

impl EigenReport {
    pub fn selected(&self) -> Option<&EigenCandidate> {
        self.candidates
            .iter()
            .find(|c| c.component_index == self.selected_component)
    }
}

/// Full eigen-portfolio construction: PCA, candidates, selection.
pub fn build_eigen_portfolio(
    returns: &ReturnMatrix,
    stats: &ReturnStats,
    variance_target: f64,
    rf: RiskFree,
) -> Result<EigenReport> {
    let pca = fit_pca(returns, variance_target)?;
    let candidates = candidate_portfolios(&pca, stats, rf)?;
    let selected_component = select_best_eigen(&candidates)?.component_index;
    Ok(EigenReport {
        tickers: pca.tickers.clone(),
        explained_ratio: pca.explained_ratio().to_vec(),
        k: pca.k,
        candidates,
        selected_component,
    })
}
