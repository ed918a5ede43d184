//! Monte Carlo rejection frequencies.
//!
//! Run `r` at sample size `T` draws its data from the stream derived from
//! `(seed, MC_DATA, key)` and its bootstrap from `(seed, MC_TEST, key)` with
//! `key = T << 32 | r`, so tables are reproducible and independent of the
//! thread count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bootstrap::{run_test_levels, BootstrapConfig, OrderMode};
use crate::error::{Error, Result};
use crate::models::{generate, ModelSpec};
use crate::rng::{self, domain};
use crate::var::{AicPenalty, Estimator};

/// Largest fraction of failed runs tolerated before the experiment aborts.
pub const MAX_FAILURE_RATE: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McExperiment {
    pub model: ModelSpec,
    pub t_values: Vec<usize>,
    pub runs: usize,
    pub replicates: usize,
    pub alphas: Vec<f64>,
    pub seed: u64,
    pub estimator: Estimator,
    pub order: OrderMode,
    pub penalty: AicPenalty,
    /// Centre each generated series before testing.
    pub center: bool,
    #[serde(skip)]
    pub threads: Option<usize>,
}

impl McExperiment {
    pub fn new(model: ModelSpec, t_values: Vec<usize>) -> Self {
        Self {
            model,
            t_values,
            runs: 200,
            replicates: 200,
            alphas: vec![0.05],
            seed: 42,
            estimator: Estimator::YuleWalker,
            order: OrderMode::default(),
            penalty: AicPenalty::default(),
            center: false,
            threads: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::domain("at least one Monte Carlo run is required"));
        }
        if self.t_values.is_empty() {
            return Err(Error::domain("no sample sizes given"));
        }
        if self.alphas.is_empty() {
            return Err(Error::domain("no significance levels given"));
        }
        if let Some(&t) = self.t_values.iter().find(|&&t| t < crate::series::MIN_LEN || t > u32::MAX as usize) {
            return Err(Error::domain(format!("sample size {t} out of range")));
        }
        self.model.validate()?;
        for &alpha in &self.alphas {
            self.bootstrap_config(alpha, 0).validate()?;
        }
        Ok(())
    }

    fn bootstrap_config(&self, alpha: f64, seed: u64) -> BootstrapConfig {
        BootstrapConfig {
            replicates: self.replicates,
            alpha,
            seed,
            order: self.order,
            estimator: self.estimator,
            penalty: self.penalty,
            ..BootstrapConfig::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McRow {
    pub model: String,
    pub t: usize,
    pub alpha: f64,
    pub runs: usize,
    pub failures: usize,
    pub rejections: usize,
    /// Rejections over successful runs.
    pub frequency: f64,
    /// `sqrt(f(1−f)/R)`.
    pub std_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McTable {
    pub experiment: McExperiment,
    pub rows: Vec<McRow>,
    /// Observed statistics per sample size in run order, failed runs omitted.
    pub statistics: Vec<Vec<f64>>,
}

fn run_key(t: usize, r: usize) -> u64 {
    ((t as u64) << 32) | r as u64
}

/// Runs the experiment. Fails when more than 1% of the runs at any sample
/// size fail; otherwise failed runs are excluded and counted.
pub fn run_mc(exp: &McExperiment) -> Result<McTable> {
    exp.validate()?;
    let pool = match exp.threads {
        Some(n) => Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::domain(format!("cannot build thread pool: {e}")))?,
        ),
        None => None,
    };
    let mut rows = Vec::new();
    let mut statistics = Vec::new();
    for &t in &exp.t_values {
        let work = || -> Vec<Result<(f64, Vec<bool>)>> {
            (0..exp.runs)
                .into_par_iter()
                .map(|r| {
                    let key = run_key(t, r);
                    let mut data_rng = rng::derived_stream(exp.seed, domain::MC_DATA, key);
                    let x = generate(&exp.model, t, &mut data_rng)?;
                    let x = if exp.center { x.center() } else { x };
                    let config = exp.bootstrap_config(exp.alphas[0], rng::derive_seed(exp.seed, domain::MC_TEST, key));
                    let (stat, decisions) = run_test_levels(&x, &config, &exp.alphas)?;
                    Ok((stat, decisions.iter().map(|d| d.reject).collect()))
                })
                .collect()
        };
        let results = match &pool {
            Some(p) => p.install(work),
            None => work(),
        };
        let failures: Vec<&Error> = results.iter().filter_map(|r| r.as_ref().err()).collect();
        if failures.len() as f64 > MAX_FAILURE_RATE * exp.runs as f64 {
            return Err(Error::numerical(format!(
                "{} of {} runs failed at T = {t}; first error: {}",
                failures.len(),
                exp.runs,
                failures[0]
            )));
        }
        let ok: Vec<&(f64, Vec<bool>)> = results.iter().filter_map(|r| r.as_ref().ok()).collect();
        let n_ok = ok.len();
        for (i, &alpha) in exp.alphas.iter().enumerate() {
            let rejections = ok.iter().filter(|(_, d)| d[i]).count();
            let frequency = if n_ok == 0 { 0.0 } else { rejections as f64 / n_ok as f64 };
            rows.push(McRow {
                model: exp.model.name.clone(),
                t,
                alpha,
                runs: n_ok,
                failures: failures.len(),
                rejections,
                frequency,
                std_error: if n_ok == 0 {
                    0.0
                } else {
                    (frequency * (1.0 - frequency) / n_ok as f64).sqrt()
                },
            });
        }
        statistics.push(ok.iter().map(|(s, _)| *s).collect());
    }
    Ok(McTable {
        experiment: exp.clone(),
        rows,
        statistics,
    })
}

impl McTable {
    pub fn row(&self, t: usize, alpha: f64) -> Option<&McRow> {
        self.rows.iter().find(|r| r.t == t && (r.alpha - alpha).abs() < 1e-12)
    }

    /// Plain-text table, one line per `(T, α)`.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "{:<14} {:>6} {:>6} {:>6} {:>8} {:>10} {:>8}\n",
            "model", "T", "alpha", "runs", "rejects", "frequency", "se"
        );
        for r in &self.rows {
            s.push_str(&format!(
                "{:<14} {:>6} {:>6.3} {:>6} {:>8} {:>10.3} {:>8.4}\n",
                r.model, r.t, r.alpha, r.runs, r.rejections, r.frequency, r.std_error
            ));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_experiment_is_reproducible() {
        let mut exp = McExperiment::new(ModelSpec::preset("wn").unwrap(), vec![32]);
        exp.runs = 6;
        exp.replicates = 20;
        exp.alphas = vec![0.05, 0.10];
        let a = run_mc(&exp).unwrap();
        exp.threads = Some(1);
        let b = run_mc(&exp).unwrap();
        assert_eq!(a.rows, b.rows);
        assert_eq!(a.statistics, b.statistics);
        assert_eq!(a.rows.len(), 2);
        assert!(a.rows[0].rejections <= a.rows[1].rejections);
    }

    #[test]
    fn rejects_bad_settings() {
        let mut exp = McExperiment::new(ModelSpec::preset("wn").unwrap(), vec![4]);
        assert!(run_mc(&exp).is_err());
        exp.t_values = vec![32];
        exp.runs = 0;
        assert!(run_mc(&exp).is_err());
    }
}
