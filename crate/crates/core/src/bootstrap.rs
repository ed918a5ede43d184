//! AR-sieve bootstrap and the test decision.
//!
//! A VAR(p) is fitted to the data, `B` Gaussian replicates of length `T` are
//! simulated from it, and the statistic is recomputed on each replicate with
//! the same evaluation grid. `H0` is rejected when the observed statistic
//! exceeds the `⌊(1−α)B⌋`-th order statistic of the replicates.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::deviation::{build_grid, sup_unchecked, EvaluationGrid, GridSummary};
use crate::error::{Error, Result};
use crate::linalg;
use crate::rng::{self, domain};
use crate::series::MultivariateSeries;
use crate::var::{self, AicPenalty, Estimator, VarModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderMode {
    /// Whittle-AIC over `p_min..=p_max`; `p_max = None` uses
    /// [`var::default_p_max`].
    Auto { p_min: usize, p_max: Option<usize> },
    Fixed(usize),
}

impl Default for OrderMode {
    fn default() -> Self {
        OrderMode::Auto { p_min: 0, p_max: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapConfig {
    pub replicates: usize,
    pub alpha: f64,
    pub seed: u64,
    /// Discarded start-up samples; `None` means `100 + 10p`.
    pub burn_in: Option<usize>,
    pub order: OrderMode,
    pub estimator: Estimator,
    pub penalty: AicPenalty,
    /// Worker threads; `None` uses the global pool. Results never depend on it.
    #[serde(skip)]
    pub threads: Option<usize>,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        Self {
            replicates: 200,
            alpha: 0.05,
            seed: 42,
            burn_in: None,
            order: OrderMode::default(),
            estimator: Estimator::YuleWalker,
            penalty: AicPenalty::Akaike,
            threads: None,
        }
    }
}

/// `⌊(1−α)B⌋`, guarded against representation error in `1 − α`.
pub fn quantile_index(alpha: f64, replicates: usize) -> usize {
    ((1.0 - alpha) * replicates as f64 + 1e-9).floor() as usize
}

impl BootstrapConfig {
    pub fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(Error::domain("at least one bootstrap replicate is required"));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::domain(format!("alpha = {} must lie in (0, 1)", self.alpha)));
        }
        if quantile_index(self.alpha, self.replicates) < 1 {
            return Err(Error::domain(format!(
                "⌊(1−α)B⌋ = 0 for alpha = {} and B = {}",
                self.alpha, self.replicates
            )));
        }
        Ok(())
    }

    pub fn burn_in_for(&self, order: usize) -> usize {
        self.burn_in.unwrap_or(100 + 10 * order)
    }

    /// Runs `f` inside a pool with the configured number of threads.
    pub fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> Result<R> {
        match self.threads {
            None => Ok(f()),
            Some(n) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| Error::domain(format!("cannot build thread pool: {e}")))?;
                Ok(pool.install(f))
            }
        }
    }
}

/// Simulates `T` observations of `model` driven by Gaussian innovations
/// `L Z_t` with `L L^T = Σ`, starting from zeros and discarding `burn_in`
/// samples.
pub fn simulate_var<R: Rng + ?Sized>(
    model: &VarModel,
    t_len: usize,
    burn_in: usize,
    rng: &mut R,
) -> Result<MultivariateSeries> {
    if model.order > 0 {
        let radius = model.spectral_radius();
        if radius.is_nan() || radius >= 1.0 - var::STABILITY_MARGIN {
            return Err(Error::UnstableModel { radius });
        }
    }
    let chol = linalg::cholesky_lower(&model.sigma)
        .ok_or_else(|| Error::degenerate("innovation covariance is not positive definite"))?;
    let d = model.dim();
    let p = model.order;
    let total = burn_in + t_len;
    // time-major buffer with p leading zeros
    let mut x = vec![0.0; (total + p) * d];
    let mut z = vec![0.0; d];
    for t in p..total + p {
        for zi in z.iter_mut() {
            *zi = rng.sample(StandardNormal);
        }
        let (past, rest) = x.split_at_mut(t * d);
        let cur = &mut rest[..d];
        for a in 0..d {
            let mut acc = 0.0;
            for b in 0..=a {
                acc += chol[(a, b)] * z[b];
            }
            for (j, coef) in model.coeffs.iter().enumerate() {
                let lagged = &past[(t - j - 1) * d..(t - j) * d];
                for b in 0..d {
                    acc += coef[(a, b)] * lagged[b];
                }
            }
            cur[a] = acc;
        }
    }
    let start = (p + burn_in) * d;
    MultivariateSeries::from_row_major(t_len, d, &x[start..])
}

/// Applies `f` to `B` replicates simulated from `model`. Replicate `r` uses
/// the stream derived from `(seed, r)`; the output is ordered by `r`.
pub fn bootstrap_map<F, R>(
    model: &VarModel,
    config: &BootstrapConfig,
    t_len: usize,
    center: bool,
    f: F,
) -> Result<Vec<R>>
where
    F: Fn(&MultivariateSeries) -> R + Sync,
    R: Send,
{
    config.validate()?;
    let burn_in = config.burn_in_for(model.order);
    config.install(|| {
        (0..config.replicates)
            .into_par_iter()
            .map(|r| {
                let mut rng = rng::derived_stream(config.seed, domain::BOOTSTRAP, r as u64);
                let x = simulate_var(model, t_len, burn_in, &mut rng).map_err(|e| Error::Replicate {
                    index: r,
                    source: Box::new(e),
                })?;
                let x = if center { x.center() } else { x };
                Ok(f(&x))
            })
            .collect()
    })?
}

/// Statistics of `B` bootstrap replicates on `grid`. Replicates are centred
/// exactly when `series` was.
pub fn bootstrap_replicates(
    series: &MultivariateSeries,
    model: &VarModel,
    config: &BootstrapConfig,
    grid: &EvaluationGrid,
) -> Result<Vec<f64>> {
    if grid.t_len() != series.len() {
        return Err(Error::domain("grid and series lengths differ"));
    }
    bootstrap_map(model, config, series.len(), series.is_centered(), |x| {
        sup_unchecked(x, grid).1
    })
}

/// The `⌊(1−α)B⌋`-th smallest replicate (1-based).
pub fn bootstrap_quantile(stats: &[f64], alpha: f64) -> Result<f64> {
    if stats.is_empty() {
        return Err(Error::domain("no bootstrap replicates"));
    }
    let m = quantile_index(alpha, stats.len());
    if m < 1 || m > stats.len() {
        return Err(Error::domain(format!(
            "quantile index {m} outside 1..={} for alpha = {alpha}",
            stats.len()
        )));
    }
    let mut sorted = stats.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(sorted[m - 1])
}

/// Fraction of replicates at least as large as `statistic`.
pub fn p_value(stats: &[f64], statistic: f64) -> f64 {
    stats.iter().filter(|&&s| s >= statistic).count() as f64 / stats.len() as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub statistic: f64,
    pub quantile: f64,
    pub p_value: f64,
    pub reject: bool,
    pub alpha: f64,
    pub order: usize,
    pub estimator: Estimator,
    /// Model the replicates were drawn from; `sigma` is the centred residual
    /// covariance.
    pub model: VarModel,
    pub sup_matrix: Vec<Vec<f64>>,
    pub replicate_stats: Vec<f64>,
    pub replicates: usize,
    pub seed: u64,
    pub burn_in: usize,
    pub grid: GridSummary,
    pub column_means: Option<Vec<f64>>,
    pub warnings: Vec<String>,
}

/// Decision for one significance level from an existing replicate sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Decision {
    pub alpha: f64,
    pub quantile: f64,
    pub reject: bool,
}

pub fn decide(statistic: f64, replicates: &[f64], alpha: f64) -> Result<Decision> {
    let quantile = bootstrap_quantile(replicates, alpha)?;
    Ok(Decision {
        alpha,
        quantile,
        reject: statistic > quantile,
    })
}

/// Fits the bootstrap model: order selection or a fixed order, then the
/// centred residual covariance as innovation covariance.
pub fn fit_bootstrap_model(series: &MultivariateSeries, config: &BootstrapConfig) -> Result<VarModel> {
    let t = series.len();
    let fitted = match config.order {
        OrderMode::Fixed(p) => var::fit(series, p, config.estimator)?,
        OrderMode::Auto { p_min, p_max } => {
            let p_max = p_max.unwrap_or_else(|| var::default_p_max(t)).max(p_min);
            var::select_order(series, p_min, p_max, config.estimator, config.penalty)?.model
        }
    };
    if fitted.method == Estimator::LeastSquares && fitted.order > 0 && !fitted.is_stable() {
        return Err(Error::UnstableModel {
            radius: fitted.spectral_radius(),
        });
    }
    let sigma = if fitted.order == 0 {
        fitted.sigma.clone()
    } else {
        var::residual_covariance(series, &fitted)?
    };
    if linalg::cholesky_lower(&sigma).is_none() {
        return Err(Error::degenerate("residual covariance is not positive definite"));
    }
    Ok(fitted.with_sigma(sigma))
}

pub(crate) struct Replication {
    pub grid: EvaluationGrid,
    pub sup: DMatrix<f64>,
    pub statistic: f64,
    pub model: VarModel,
    pub stats: Vec<f64>,
}

pub(crate) fn replicate(series: &MultivariateSeries, config: &BootstrapConfig) -> Result<Replication> {
    series.check_testable()?;
    config.validate()?;
    let grid = build_grid(series.len())?;
    let (sup, statistic) = sup_unchecked(series, &grid);
    let model = fit_bootstrap_model(series, config)?;
    let stats = bootstrap_replicates(series, &model, config, &grid)?;
    Ok(Replication {
        grid,
        sup,
        statistic,
        model,
        stats,
    })
}

/// Full test: statistic, VAR fit, `B` replicates, quantile, p-value and
/// decision. Deterministic given the data and the configuration.
pub fn run_test(series: &MultivariateSeries, config: &BootstrapConfig) -> Result<TestReport> {
    let rep = replicate(series, config)?;
    let decision = decide(rep.statistic, &rep.stats, config.alpha)?;
    let mut warnings = Vec::new();
    if series.is_truncated() {
        warnings.push(format!(
            "odd sample size {}: the last observation is excluded from spectral computations",
            series.len()
        ));
    }
    Ok(TestReport {
        statistic: rep.statistic,
        quantile: decision.quantile,
        p_value: p_value(&rep.stats, rep.statistic),
        reject: decision.reject,
        alpha: config.alpha,
        order: rep.model.order,
        estimator: config.estimator,
        burn_in: config.burn_in_for(rep.model.order),
        model: rep.model,
        sup_matrix: linalg::rows_of(&rep.sup),
        replicates: rep.stats.len(),
        replicate_stats: rep.stats,
        seed: config.seed,
        grid: rep.grid.summary(),
        column_means: series.means().map(<[f64]>::to_vec),
        warnings,
    })
}

/// Runs the test once and returns the statistic with decisions at several
/// levels, all sharing one replicate sample.
pub fn run_test_levels(
    series: &MultivariateSeries,
    config: &BootstrapConfig,
    alphas: &[f64],
) -> Result<(f64, Vec<Decision>)> {
    let rep = replicate(series, config)?;
    let decisions = alphas
        .iter()
        .map(|&a| decide(rep.statistic, &rep.stats, a))
        .collect::<Result<_>>()?;
    Ok((rep.statistic, decisions))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantile_rule() {
        assert_eq!(quantile_index(0.05, 200), 190);
        assert_eq!(quantile_index(0.1, 10), 9);
        let stats: Vec<f64> = (1..=10).rev().map(f64::from).collect();
        assert_eq!(bootstrap_quantile(&stats, 0.1).unwrap(), 9.0);
        assert_eq!(bootstrap_quantile(&[2.5; 7], 0.3).unwrap(), 2.5);
        assert!(bootstrap_quantile(&[1.0], 0.5).is_err());
    }

    #[test]
    fn config_validation() {
        let mut c = BootstrapConfig::default();
        assert!(c.validate().is_ok());
        c.replicates = 1;
        assert!(c.validate().is_err());
        c.alpha = 0.0;
        c.replicates = 10;
        assert!(c.validate().is_err());
    }

    #[test]
    fn unstable_model_is_refused() {
        let m = VarModel {
            order: 1,
            coeffs: vec![DMatrix::from_element(1, 1, 1.01)],
            sigma: DMatrix::identity(1, 1),
            method: Estimator::LeastSquares,
        };
        let mut r = rng::stream(1);
        assert!(matches!(simulate_var(&m, 10, 0, &mut r), Err(Error::UnstableModel { .. })));
        let m = VarModel::white_noise(DMatrix::zeros(1, 1), Estimator::YuleWalker);
        assert!(matches!(simulate_var(&m, 10, 0, &mut r), Err(Error::Degenerate(_))));
    }

    #[test]
    fn p_value_counts_ties() {
        assert_eq!(p_value(&[1.0, 2.0, 3.0, 4.0], 3.0), 0.5);
        assert_eq!(p_value(&[1.0, 2.0], 5.0), 0.0);
    }
}
