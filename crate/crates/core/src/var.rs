//! Stationary VAR(p) fitting for the sieve bootstrap.
//!
//! Yule-Walker estimates come from the block Levinson–Whittle recursion on
//! the biased (divisor `T`) sample autocovariances, which keeps the
//! block-Toeplitz system positive semidefinite and the fitted filter stable.
//! Least squares regresses `X_t` on `(X_{t-1}, …, X_{t-p})` without intercept.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::series::MultivariateSeries;
use crate::spectral::{periodogram_bins, SpectralMatrix};

/// Relative eigenvalue floor below which a covariance is treated as singular.
const SINGULAR_TOL: f64 = 1e-12;

/// Margin used in the companion-matrix stability check.
pub const STABILITY_MARGIN: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Estimator {
    #[default]
    YuleWalker,
    LeastSquares,
}

impl std::str::FromStr for Estimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "yw" | "yule-walker" => Ok(Estimator::YuleWalker),
            "ols" | "ls" | "least-squares" => Ok(Estimator::LeastSquares),
            other => Err(Error::domain(format!("unknown estimator {other:?} (expected yw or ols)"))),
        }
    }
}

/// Penalty term added to the Whittle likelihood.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum AicPenalty {
    /// `p / T`
    Order,
    /// `p d² / T`, the number of autoregressive parameters.
    Parameters,
    /// `2π p d² / T`, the default: the classical `2k` AIC penalty on the scale of the
    /// `(2π/T) Σ_{k<=T/2}` Whittle sum, which is `π` times `−2 log L / T`.
    #[default]
    Akaike,
}

impl std::str::FromStr for AicPenalty {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "order" => Ok(AicPenalty::Order),
            "params" | "parameters" => Ok(AicPenalty::Parameters),
            "akaike" | "aic" => Ok(AicPenalty::Akaike),
            other => Err(Error::domain(format!("unknown penalty {other:?} (expected order, params or akaike)"))),
        }
    }
}

/// Sample autocovariances `Γ̂(h) = (1/T) Σ_{t=1}^{T-h} X_{t+h} X_t^T`.
#[derive(Debug, Clone, PartialEq)]
pub struct AutocovarianceSequence {
    pub lags: Vec<DMatrix<f64>>,
}

impl AutocovarianceSequence {
    pub fn max_lag(&self) -> usize {
        self.lags.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.lags[0].nrows()
    }

    /// `Γ̂(h)` for any integer `h`, using `Γ̂(-h) = Γ̂(h)^T`.
    pub fn at(&self, h: isize) -> DMatrix<f64> {
        if h >= 0 {
            self.lags[h as usize].clone()
        } else {
            self.lags[(-h) as usize].transpose()
        }
    }
}

pub fn sample_autocov(series: &MultivariateSeries, h_max: usize) -> Result<AutocovarianceSequence> {
    let t = series.len();
    if h_max >= t {
        return Err(Error::domain(format!("lag {h_max} must be below T = {t}")));
    }
    let d = series.dim();
    let lags = (0..=h_max)
        .map(|h| {
            DMatrix::from_fn(d, d, |a, b| {
                let (xa, xb) = (series.column(a), series.column(b));
                xa[h..].iter().zip(&xb[..t - h]).map(|(x, y)| x * y).sum::<f64>() / t as f64
            })
        })
        .collect();
    Ok(AutocovarianceSequence { lags })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarModel {
    pub order: usize,
    /// `coeffs[j-1]` multiplies `X_{t-j}`.
    #[serde(with = "matrix_list")]
    pub coeffs: Vec<DMatrix<f64>>,
    #[serde(with = "matrix_rows")]
    pub sigma: DMatrix<f64>,
    pub method: Estimator,
}

impl VarModel {
    pub fn white_noise(sigma: DMatrix<f64>, method: Estimator) -> Self {
        Self {
            order: 0,
            coeffs: Vec::new(),
            sigma,
            method,
        }
    }

    pub fn dim(&self) -> usize {
        self.sigma.nrows()
    }

    pub fn companion(&self) -> DMatrix<f64> {
        linalg::companion(&self.coeffs)
    }

    pub fn spectral_radius(&self) -> f64 {
        linalg::spectral_radius(&self.companion())
    }

    pub fn is_stable(&self) -> bool {
        self.spectral_radius() < 1.0 - STABILITY_MARGIN
    }

    /// `Φ(e^{-iλ}) = I − Σ_j A_j e^{-iλj}`.
    pub fn transfer(&self, lambda: f64) -> CMatrix {
        let d = self.dim();
        let mut phi = CMatrix::identity(d, d);
        for (j, a) in self.coeffs.iter().enumerate() {
            let z = Complex64::from_polar(1.0, -lambda * (j + 1) as f64);
            phi -= linalg::to_complex(a) * z;
        }
        phi
    }

    /// Same model with a different innovation covariance.
    pub fn with_sigma(&self, sigma: DMatrix<f64>) -> Self {
        Self {
            sigma,
            ..self.clone()
        }
    }
}

/// One step of the block Levinson–Whittle recursion.
struct LevinsonState {
    forward: Vec<DMatrix<f64>>,
    backward: Vec<DMatrix<f64>>,
    forward_err: DMatrix<f64>,
    backward_err: DMatrix<f64>,
}

fn check_covariance(m: &DMatrix<f64>, scale: f64, what: &str) -> Result<()> {
    let min = linalg::min_eigenvalue(m);
    if min.is_nan() || min <= SINGULAR_TOL * scale {
        return Err(Error::degenerate(format!(
            "{what} is singular (minimum eigenvalue {min:.3e})"
        )));
    }
    Ok(())
}

fn invert(m: &DMatrix<f64>, what: &str) -> Result<DMatrix<f64>> {
    m.clone()
        .try_inverse()
        .ok_or_else(|| Error::degenerate(format!("{what} is not invertible")))
}

/// Yule-Walker fits of every order `0..=p_max`.
///
/// Stops early if the recursion hits a singular prediction-error covariance;
/// the returned vector then holds the orders that could be fitted. Fails if
/// `Γ̂(0)` itself is singular.
pub fn yule_walker_path(acov: &AutocovarianceSequence, p_max: usize) -> Result<Vec<VarModel>> {
    if p_max > acov.max_lag() {
        return Err(Error::domain(format!(
            "order {p_max} needs autocovariances through lag {p_max}, have {}",
            acov.max_lag()
        )));
    }
    let gamma0 = linalg::symmetrize(&acov.lags[0]);
    let scale = linalg::trace_scale(&gamma0);
    check_covariance(&gamma0, scale, "lag-0 autocovariance")?;

    let mut models = vec![VarModel::white_noise(gamma0.clone(), Estimator::YuleWalker)];
    let mut st = LevinsonState {
        forward: Vec::new(),
        backward: Vec::new(),
        forward_err: gamma0.clone(),
        backward_err: gamma0,
    };
    for k in 1..=p_max {
        // Δ_k = Γ(k) − Σ_{j<k} A_j Γ(k−j)
        let mut delta = acov.at(k as isize);
        for (j, a) in st.forward.iter().enumerate() {
            delta -= a * acov.at((k - j - 1) as isize);
        }
        let a_kk = &delta * invert(&st.backward_err, "backward prediction-error covariance")?;
        let b_kk = delta.transpose() * invert(&st.forward_err, "forward prediction-error covariance")?;

        let forward: Vec<DMatrix<f64>> = (0..k - 1)
            .map(|j| &st.forward[j] - &a_kk * &st.backward[k - 2 - j])
            .chain(std::iter::once(a_kk.clone()))
            .collect();
        let backward: Vec<DMatrix<f64>> = (0..k - 1)
            .map(|j| &st.backward[j] - &b_kk * &st.forward[k - 2 - j])
            .chain(std::iter::once(b_kk.clone()))
            .collect();
        let forward_err = linalg::symmetrize(&(&st.forward_err - &a_kk * delta.transpose()));
        let backward_err = linalg::symmetrize(&(&st.backward_err - &b_kk * &delta));

        if check_covariance(&forward_err, scale, "prediction-error covariance").is_err()
            || check_covariance(&backward_err, scale, "prediction-error covariance").is_err()
        {
            break;
        }
        models.push(VarModel {
            order: k,
            coeffs: forward.clone(),
            sigma: forward_err.clone(),
            method: Estimator::YuleWalker,
        });
        st = LevinsonState {
            forward,
            backward,
            forward_err,
            backward_err,
        };
    }
    Ok(models)
}

/// Yule-Walker VAR(p). `sigma` is the forward prediction-error covariance.
pub fn yule_walker_fit(acov: &AutocovarianceSequence, p: usize) -> Result<VarModel> {
    let mut path = yule_walker_path(acov, p)?;
    if path.len() <= p {
        return Err(Error::degenerate(format!(
            "block-Toeplitz system is singular at order {}",
            path.len()
        )));
    }
    Ok(path.pop().expect("path holds order p"))
}

/// Least-squares coefficients of `X_t` on `(X_{t-1}, …, X_{t-p})`.
pub(crate) fn least_squares_coeffs(series: &MultivariateSeries, p: usize) -> Result<Vec<DMatrix<f64>>> {
    let (t, d) = (series.len(), series.dim());
    if p == 0 {
        return Err(Error::domain("least squares needs order p >= 1"));
    }
    if t <= p || t - p <= d * p {
        return Err(Error::domain(format!(
            "order {p} is not identifiable from {t} observations of dimension {d}"
        )));
    }
    let x = series.values();
    let rows = t - p;
    let regressors = DMatrix::from_fn(rows, d * p, |r, c| {
        let (lag, comp) = (c / d + 1, c % d);
        x[(r + p - lag, comp)]
    });
    let response = x.rows(p, rows).into_owned();
    let gram = regressors.transpose() * &regressors;
    let eig = gram.clone().symmetric_eigenvalues();
    if eig.min() <= SINGULAR_TOL * eig.max() {
        return Err(Error::degenerate("regressor Gram matrix is rank deficient"));
    }
    let chol = gram
        .cholesky()
        .ok_or_else(|| Error::degenerate("regressor Gram matrix is rank deficient"))?;
    let beta = chol.solve(&(regressors.transpose() * response));
    Ok((0..p)
        .map(|j| beta.rows(j * d, d).transpose())
        .collect())
}

/// Least-squares VAR(p); `sigma` is the residual covariance.
pub fn least_squares_fit(series: &MultivariateSeries, p: usize) -> Result<VarModel> {
    let coeffs = least_squares_coeffs(series, p)?;
    let mut model = VarModel {
        order: p,
        coeffs,
        sigma: DMatrix::zeros(series.dim(), series.dim()),
        method: Estimator::LeastSquares,
    };
    let sigma = residual_covariance(series, &model)?;
    let gamma0 = sample_autocov(series, 0)?.lags.remove(0);
    check_covariance(&sigma, linalg::trace_scale(&gamma0), "residual covariance")?;
    model.sigma = sigma;
    Ok(model)
}

/// Fits a VAR(p) with the chosen estimator.
pub fn fit(series: &MultivariateSeries, p: usize, method: Estimator) -> Result<VarModel> {
    match method {
        Estimator::YuleWalker => yule_walker_fit(&sample_autocov(series, p)?, p),
        Estimator::LeastSquares if p == 0 => {
            let acov = sample_autocov(series, 0)?;
            let mut m = yule_walker_fit(&acov, 0)?;
            m.method = Estimator::LeastSquares;
            Ok(m)
        }
        Estimator::LeastSquares => least_squares_fit(series, p),
    }
}

/// Mean-centred residual covariance with divisor `T − p`:
/// `ẑ_j = X_j − Σ_i A_i X_{j-i}` for `j = p+1..T`.
pub fn residual_covariance(series: &MultivariateSeries, model: &VarModel) -> Result<DMatrix<f64>> {
    let (t, d, p) = (series.len(), series.dim(), model.order);
    if t <= p {
        return Err(Error::domain(format!("T = {t} must exceed the order {p}")));
    }
    if model.dim() != d {
        return Err(Error::domain("model and series dimensions differ"));
    }
    let x = series.values();
    let n = t - p;
    let mut resid = x.rows(p, n).into_owned();
    for (i, a) in model.coeffs.iter().enumerate() {
        let lagged = x.rows(p - i - 1, n);
        resid -= lagged * a.transpose();
    }
    let mean = resid.row_mean();
    for mut row in resid.row_iter_mut() {
        row -= &mean;
    }
    Ok(linalg::symmetrize(&(resid.transpose() * &resid / n as f64)))
}

/// Spectral density of the fitted VAR,
/// `f(λ) = (1/2π) Φ(e^{-iλ})^{-1} Σ Φ(e^{-iλ})^{-H}`.
pub fn var_spectral_density(model: &VarModel, lambda: f64) -> Result<SpectralMatrix> {
    let phi = model.transfer(lambda);
    let sv = phi.clone().singular_values();
    let cond = sv.max() / sv.min();
    if cond.is_nan() || cond > 1e12 {
        return Err(Error::numerical(format!(
            "transfer matrix is singular at λ = {lambda} (condition number {cond:.3e})"
        )));
    }
    let inv = phi
        .try_inverse()
        .ok_or_else(|| Error::numerical(format!("transfer matrix is singular at λ = {lambda}")))?;
    let sigma = linalg::to_complex(&model.sigma);
    let entries = &inv * sigma * inv.adjoint() / Complex64::from(2.0 * PI);
    Ok(SpectralMatrix {
        entries,
        frequency: lambda,
        base: 0,
    })
}

/// Whittle negative log-likelihood at the Fourier frequencies of the full
/// sample, without penalty.
fn whittle_likelihood(periodograms: &[CMatrix], t_eff: usize, model: &VarModel) -> Result<f64> {
    let mut total = 0.0;
    for (k, pgram) in periodograms.iter().enumerate() {
        let lambda = 2.0 * PI * (k + 1) as f64 / t_eff as f64;
        let f = var_spectral_density(model, lambda)?.entries;
        let f = (&f + f.adjoint()) * Complex64::from(0.5);
        let chol = f.cholesky().ok_or_else(|| {
            Error::numerical(format!("fitted spectral density is not positive definite at λ = {lambda}"))
        })?;
        let log_det: f64 = chol.l().diagonal().iter().map(|z| 2.0 * z.re.ln()).sum();
        let trace = chol.solve(pgram).trace().re;
        total += log_det + trace;
    }
    Ok(2.0 * PI / t_eff as f64 * total)
}

fn penalty(model: &VarModel, t_eff: usize, kind: AicPenalty) -> f64 {
    let p = model.order as f64;
    let d = model.dim() as f64;
    match kind {
        AicPenalty::Order => p / t_eff as f64,
        AicPenalty::Parameters => p * d * d / t_eff as f64,
        AicPenalty::Akaike => 2.0 * std::f64::consts::PI * p * d * d / t_eff as f64,
    }
}

/// Whittle-likelihood AIC,
/// `(2π/T) Σ_{k=1}^{T/2} [log det f(λ_k) + tr(f(λ_k)^{-1} I_T(λ_k))]` plus the
/// penalty selected by `kind`.
pub fn whittle_aic(series: &MultivariateSeries, model: &VarModel, kind: AicPenalty) -> Result<f64> {
    let t_eff = series.effective_len();
    let pgrams = periodogram_bins(series, t_eff)?;
    Ok(whittle_likelihood(&pgrams, t_eff, model)? + penalty(model, t_eff, kind))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderSelection {
    pub model: VarModel,
    pub order: usize,
    /// `(p, AIC)` for every order that could be fitted.
    pub criteria: Vec<(usize, f64)>,
}

/// Default upper order, `min(⌊T/10⌋, 15)`.
pub fn default_p_max(t_len: usize) -> usize {
    (t_len / 10).min(15)
}

/// Fits every order in `p_min..=p_max` and keeps the AIC minimiser; ties go
/// to the smaller order.
pub fn select_order(
    series: &MultivariateSeries,
    p_min: usize,
    p_max: usize,
    method: Estimator,
    kind: AicPenalty,
) -> Result<OrderSelection> {
    let t = series.len();
    if p_min > p_max || 2 * p_max >= t {
        return Err(Error::domain(format!(
            "order range {p_min}..={p_max} invalid for T = {t} (need p_min <= p_max < T/2)"
        )));
    }
    let t_eff = series.effective_len();
    let pgrams = periodogram_bins(series, t_eff)?;

    let candidates: Vec<Result<VarModel>> = match method {
        Estimator::YuleWalker => {
            let path = yule_walker_path(&sample_autocov(series, p_max)?, p_max)?;
            path.into_iter().skip(p_min).map(Ok).collect()
        }
        Estimator::LeastSquares => (p_min..=p_max)
            .into_par_iter()
            .map(|p| fit(series, p, method))
            .collect(),
    };

    let scored: Vec<(VarModel, f64)> = candidates
        .into_par_iter()
        .filter_map(|m| m.ok())
        .filter_map(|m| {
            let aic = whittle_likelihood(&pgrams, t_eff, &m).ok()? + penalty(&m, t_eff, kind);
            aic.is_finite().then_some((m, aic))
        })
        .collect();

    let criteria: Vec<(usize, f64)> = scored.iter().map(|(m, a)| (m.order, *a)).collect();
    let best = scored
        .into_iter()
        .reduce(|best, cand| if cand.1 < best.1 { cand } else { best })
        .ok_or_else(|| Error::degenerate(format!("no order in {p_min}..={p_max} could be fitted")))?;
    Ok(OrderSelection {
        order: best.0.order,
        model: best.0,
        criteria,
    })
}

mod matrix_rows {
    use nalgebra::DMatrix;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &DMatrix<f64>, s: S) -> Result<S::Ok, S::Error> {
        crate::linalg::rows_of(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<DMatrix<f64>, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(d)?;
        Ok(crate::linalg::from_rows(&rows))
    }
}

mod matrix_list {
    use nalgebra::DMatrix;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(ms: &[DMatrix<f64>], s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<Vec<f64>>> = ms.iter().map(crate::linalg::rows_of).collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<DMatrix<f64>>, D::Error> {
        let rows = Vec::<Vec<Vec<f64>>>::deserialize(d)?;
        Ok(rows.iter().map(|r| crate::linalg::from_rows(r)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn scalar(x: f64) -> DMatrix<f64> {
        DMatrix::from_element(1, 1, x)
    }

    #[test]
    fn autocov_by_hand() {
        let s = MultivariateSeries::univariate(&[1.0, -1.0, 1.0, -1.0]).unwrap();
        let acov = sample_autocov(&s, 1).unwrap();
        assert_relative_eq!(acov.lags[0][(0, 0)], 1.0);
        assert_relative_eq!(acov.lags[1][(0, 0)], -0.75);
        assert!(sample_autocov(&s, 4).is_err());

        let z = MultivariateSeries::from_row_major(4, 2, &[0.0; 8]).unwrap();
        assert!(sample_autocov(&z, 3).unwrap().lags.iter().all(|m| m.iter().all(|&x| x == 0.0)));
    }

    #[test]
    fn yule_walker_exact_ar1() {
        let phi: f64 = 0.5;
        let lags = (0..=3).map(|h| scalar(phi.powi(h) / (1.0 - phi * phi))).collect();
        let acov = AutocovarianceSequence { lags };
        let m = yule_walker_fit(&acov, 1).unwrap();
        assert!((m.coeffs[0][(0, 0)] - 0.5).abs() < 1e-10);
        assert!((m.sigma[(0, 0)] - 1.0).abs() < 1e-10);
        // higher orders add zero coefficients
        let m3 = yule_walker_fit(&acov, 3).unwrap();
        assert!((m3.coeffs[0][(0, 0)] - 0.5).abs() < 1e-10);
        assert!(m3.coeffs[1][(0, 0)].abs() < 1e-10 && m3.coeffs[2][(0, 0)].abs() < 1e-10);
    }

    #[test]
    fn yule_walker_white_noise_autocov() {
        let g0 = DMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]);
        let lags = vec![g0.clone(), DMatrix::zeros(2, 2), DMatrix::zeros(2, 2)];
        let acov = AutocovarianceSequence { lags };
        for p in 0..=2 {
            let m = yule_walker_fit(&acov, p).unwrap();
            assert_eq!(m.order, p);
            assert!(m.coeffs.iter().all(|a| a.iter().all(|&x| x == 0.0)));
            assert_relative_eq!(m.sigma, g0, epsilon = 1e-15);
        }
    }

    #[test]
    fn yule_walker_matches_normal_equations_bivariate() {
        // Γ(h) of a known VAR(1) is not needed: any PD block-Toeplitz input
        // must reproduce the direct solution of the normal equations.
        let xs: Vec<f64> = (0..400)
            .map(|i| ((i * 7919) % 113) as f64 / 113.0 - 0.5 + 0.3 * ((i as f64) * 0.37).sin())
            .collect();
        let s = MultivariateSeries::from_row_major(200, 2, &xs).unwrap();
        let p = 2;
        let acov = sample_autocov(&s, p).unwrap();
        let m = yule_walker_fit(&acov, p).unwrap();
        // block Toeplitz R[i][j] = Γ(j − i), rhs[i] = Γ(i+1)^T ; [A_1..A_p]^T = R^{-1} rhs
        let d = 2;
        let r = DMatrix::from_fn(d * p, d * p, |i, j| acov.at((j / d) as isize - (i / d) as isize)[(i % d, j % d)]);
        let rhs = DMatrix::from_fn(d * p, d, |i, j| acov.at((i / d) as isize + 1).transpose()[(i % d, j)]);
        let sol = r.lu().solve(&rhs).unwrap();
        for j in 0..p {
            let a = sol.rows(j * d, d).transpose();
            assert_relative_eq!(m.coeffs[j], a, epsilon = 1e-10);
        }
        assert!(m.is_stable());
    }

    #[test]
    fn least_squares_exact_recursion() {
        let xs: Vec<f64> = (0..20).map(|i| 0.7f64.powi(i)).collect();
        let s = MultivariateSeries::univariate(&xs).unwrap();
        let a = least_squares_coeffs(&s, 1).unwrap();
        assert!((a[0][(0, 0)] - 0.7).abs() < 1e-12);
        assert!(matches!(least_squares_fit(&s, 1), Err(Error::Degenerate(_))));
    }

    #[test]
    fn residual_covariance_order_zero() {
        let s = MultivariateSeries::univariate(&[1.0, 2.0, 3.0, 6.0]).unwrap();
        let m = VarModel::white_noise(scalar(1.0), Estimator::YuleWalker);
        let c = residual_covariance(&s, &m).unwrap();
        // mean 3, deviations -2,-1,0,3
        assert_relative_eq!(c[(0, 0)], 14.0 / 4.0);
        let m = VarModel {
            order: 4,
            coeffs: vec![scalar(0.0); 4],
            sigma: scalar(1.0),
            method: Estimator::LeastSquares,
        };
        assert!(residual_covariance(&s, &m).is_err());
    }

    #[test]
    fn white_noise_density() {
        let m = VarModel::white_noise(DMatrix::identity(2, 2), Estimator::YuleWalker);
        for lam in [0.0, 0.3, PI] {
            let f = var_spectral_density(&m, lam).unwrap().entries;
            assert_relative_eq!(f[(0, 0)].re, 1.0 / (2.0 * PI), epsilon = 1e-15);
            assert_relative_eq!(f[(0, 1)].norm(), 0.0);
        }
    }

    #[test]
    fn ar1_density_at_zero() {
        let m = VarModel {
            order: 1,
            coeffs: vec![scalar(0.5)],
            sigma: scalar(1.0),
            method: Estimator::YuleWalker,
        };
        let f = var_spectral_density(&m, 0.0).unwrap().entries[(0, 0)];
        assert_relative_eq!(f.re, 2.0 / PI, epsilon = 1e-14);
        let unit_root = VarModel {
            coeffs: vec![scalar(1.0)],
            ..m
        };
        assert!(matches!(var_spectral_density(&unit_root, 0.0), Err(Error::Numerical(_))));
    }

    #[test]
    fn aic_penalty_is_order_over_t() {
        let xs: Vec<f64> = (0..64).map(|i| ((i * 31) % 17) as f64 - 8.0).collect();
        let s = MultivariateSeries::univariate(&xs).unwrap();
        let base = VarModel {
            order: 1,
            coeffs: vec![scalar(0.2)],
            sigma: scalar(20.0),
            method: Estimator::YuleWalker,
        };
        let bigger = VarModel {
            order: 2,
            coeffs: vec![scalar(0.2), scalar(0.0)],
            ..base.clone()
        };
        let a1 = whittle_aic(&s, &base, AicPenalty::Order).unwrap();
        let a2 = whittle_aic(&s, &bigger, AicPenalty::Order).unwrap();
        assert_relative_eq!(a2 - a1, 1.0 / 64.0, epsilon = 1e-12);
    }

    #[test]
    fn singleton_order_range() {
        let xs: Vec<f64> = (0..64).map(|i| ((i * 31) % 17) as f64 - 8.0).collect();
        let s = MultivariateSeries::univariate(&xs).unwrap();
        let sel = select_order(&s, 3, 3, Estimator::YuleWalker, AicPenalty::Order).unwrap();
        assert_eq!(sel.order, 3);
        assert!(select_order(&s, 0, 32, Estimator::YuleWalker, AicPenalty::Order).is_err());
    }
}
