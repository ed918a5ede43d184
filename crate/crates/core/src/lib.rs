//! Bootstrap test for second-order stationarity of multivariate time series.
//!
//! The test statistic compares cumulative periodograms of data prefixes
//! (the first `2⌊vT/2⌋` observations) with `v` times the full-sample
//! cumulative periodogram, takes entrywise suprema over `(v, ω)` and
//! aggregates them with the Frobenius norm. Critical values come from an
//! AR-sieve bootstrap: a VAR(p) model is fitted to the data and Gaussian
//! replicates are simulated from it.
//!
//! Module map:
//!
//! - [`series`]: observation container and CSV ingestion
//! - [`spectral`]: Fourier frequencies and cross-periodogram matrices
//! - [`deviation`]: the deviation field, its sup matrix and the statistic
//! - [`var`]: VAR fitting (Yule-Walker, least squares) and Whittle-AIC
//! - [`bootstrap`]: sieve bootstrap replicates and the test decision
//! - [`identify`]: stationary-component identification after a rejection
//! - [`models`]: simulation models used in size and power studies
//! - [`mc`]: Monte Carlo rejection-frequency harness
//! - [`report`]: versioned JSON reports

pub mod bootstrap;
pub mod deviation;
pub mod error;
pub mod identify;
pub mod linalg;
pub mod mc;
pub mod models;
pub mod report;
pub mod rng;
pub mod series;
pub mod spectral;
pub mod var;

pub use bootstrap::{run_test, BootstrapConfig, OrderMode, TestReport};
pub use deviation::{build_grid, deviation_field, DeviationField, EvaluationGrid};
pub use error::{Error, Result};
pub use identify::{identify, IdentificationResult};
pub use models::ModelSpec;
pub use series::MultivariateSeries;
pub use var::{Estimator, VarModel};

pub use num_complex::Complex64;
