//! The deviation field `D̂(v, ω)`, its entrywise supremum matrix and the
//! Frobenius-norm test statistic.
//!
//! For a grid value `v` with `n_v = ⌊v·T/2⌋` and `n_1 = T/2` (all lengths
//! after dropping a trailing odd observation),
//!
//! ```text
//! D̂(v, ω) = (v/T) · S_v(⌊ω n_v⌋) − (v²/T) · S_1(⌊ω n_1⌋)
//! ```
//!
//! where `S_v` is the cumulative periodogram of the first `2 n_v`
//! observations. For fixed `v` the field is a right-continuous step function
//! of `ω` that only jumps at `k/n_v` or `k/n_1`, so evaluating it at those
//! breakpoints gives the exact supremum over `ω ∈ [0, 1]`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::series::{MultivariateSeries, MIN_LEN};
use crate::spectral::{cumulative_unchecked, CumulativePeriodogram};

/// One point of the `ω` grid for a given `v`: `ω = num/den` with the two
/// summation limits it induces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Breakpoint {
    pub omega: f64,
    /// `⌊ω n_v⌋`
    pub k_prefix: usize,
    /// `⌊ω n_1⌋`
    pub k_full: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationGrid {
    t_len: usize,
    t_eff: usize,
    v_values: Vec<f64>,
    half_lens: Vec<usize>,
    dyadic: bool,
    breakpoints: Vec<Vec<Breakpoint>>,
}

/// Merges `{i/n_v}` and `{j/n_1}` exactly, using integer cross-multiplication.
fn merge_breakpoints(n_v: usize, n_1: usize) -> Vec<Breakpoint> {
    let mut out = Vec::with_capacity(n_v + n_1 + 2);
    let (mut i, mut j) = (0usize, 0usize);
    while i <= n_v || j <= n_1 {
        // compare i/n_v with j/n_1
        let ord = if i > n_v {
            std::cmp::Ordering::Greater
        } else if j > n_1 {
            std::cmp::Ordering::Less
        } else {
            (i * n_1).cmp(&(j * n_v))
        };
        let bp = match ord {
            std::cmp::Ordering::Less => {
                let bp = Breakpoint {
                    omega: i as f64 / n_v as f64,
                    k_prefix: i,
                    k_full: i * n_1 / n_v,
                };
                i += 1;
                bp
            }
            std::cmp::Ordering::Greater => {
                let bp = Breakpoint {
                    omega: j as f64 / n_1 as f64,
                    k_prefix: j * n_v / n_1,
                    k_full: j,
                };
                j += 1;
                bp
            }
            std::cmp::Ordering::Equal => {
                let bp = Breakpoint {
                    omega: j as f64 / n_1 as f64,
                    k_prefix: i,
                    k_full: j,
                };
                i += 1;
                j += 1;
                bp
            }
        };
        out.push(bp);
    }
    out
}

impl EvaluationGrid {
    /// Grid with explicit prefix half-lengths `n_v` (each in `1..=T_eff/2`).
    pub fn with_half_lengths(t_len: usize, mut half_lens: Vec<usize>) -> Result<Self> {
        if t_len < MIN_LEN {
            return Err(Error::TooShort { len: t_len, min: MIN_LEN });
        }
        let t_eff = 2 * (t_len / 2);
        let n_1 = t_eff / 2;
        half_lens.sort_unstable();
        half_lens.dedup();
        if half_lens.first() == Some(&0) || half_lens.last().is_some_and(|&n| n > n_1) {
            return Err(Error::domain("prefix half-lengths must lie in 1..=T/2"));
        }
        if half_lens.last() != Some(&n_1) {
            half_lens.push(n_1);
        }
        let v_values = half_lens.iter().map(|&n| 2.0 * n as f64 / t_eff as f64).collect();
        let breakpoints = half_lens.iter().map(|&n| merge_breakpoints(n, n_1)).collect();
        Ok(Self {
            t_len,
            t_eff,
            v_values,
            dyadic: half_lens.iter().all(|n| n.is_power_of_two()) && n_1.is_power_of_two(),
            half_lens,
            breakpoints,
        })
    }

    /// Observations the grid was built for.
    pub fn t_len(&self) -> usize {
        self.t_len
    }

    /// `2⌊T/2⌋`
    pub fn t_eff(&self) -> usize {
        self.t_eff
    }

    pub fn v_values(&self) -> &[f64] {
        &self.v_values
    }

    /// `n_v = ⌊v·T/2⌋` for every grid value.
    pub fn half_lengths(&self) -> &[usize] {
        &self.half_lens
    }

    pub fn is_dyadic(&self) -> bool {
        self.dyadic
    }

    pub fn breakpoints(&self, v_index: usize) -> &[Breakpoint] {
        &self.breakpoints[v_index]
    }

    pub fn omega_values(&self, v_index: usize) -> Vec<f64> {
        self.breakpoints[v_index].iter().map(|b| b.omega).collect()
    }

    pub fn len(&self) -> usize {
        self.v_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v_values.is_empty()
    }

    pub fn summary(&self) -> GridSummary {
        GridSummary {
            t_len: self.t_len,
            t_eff: self.t_eff,
            dyadic: self.dyadic,
            v_values: self.v_values.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSummary {
    pub t_len: usize,
    pub t_eff: usize,
    pub dyadic: bool,
    pub v_values: Vec<f64>,
}

/// Default grid: `v = 2^i / T` for `i = 1..=log2 T` when `2⌊T/2⌋` is a power
/// of two, otherwise every even prefix `v = 2j/T`.
pub fn build_grid(t_len: usize) -> Result<EvaluationGrid> {
    if t_len < MIN_LEN {
        return Err(Error::TooShort { len: t_len, min: MIN_LEN });
    }
    let n_1 = t_len / 2;
    let half_lens = if n_1.is_power_of_two() {
        std::iter::successors(Some(1usize), |n| Some(n * 2))
            .take_while(|&n| n <= n_1)
            .collect()
    } else {
        (1..=n_1).collect()
    };
    EvaluationGrid::with_half_lengths(t_len, half_lens)
}

/// Grid-evaluated deviation field.
#[derive(Debug, Clone)]
pub struct DeviationField {
    pub grid: EvaluationGrid,
    /// `values[i][j]` is `D̂(v_i, ω_j)` at the `j`-th breakpoint of `v_i`.
    pub values: Vec<Vec<CMatrix>>,
    pub sup_matrix: DMatrix<f64>,
    pub statistic: f64,
}

impl DeviationField {
    /// Field value at an arbitrary `ω` for grid value `v_index`, using the
    /// step-function structure.
    pub fn value_at(&self, v_index: usize, omega: f64) -> CMatrix {
        let bps = self.grid.breakpoints(v_index);
        let j = bps.partition_point(|b| b.omega <= omega).saturating_sub(1);
        self.values[v_index][j].clone()
    }

    /// Long-format rows `(v, ω, a, b, |D̂_ab|)` for plotting.
    pub fn long_rows(&self) -> Vec<(f64, f64, usize, usize, f64)> {
        let mut rows = Vec::new();
        for (i, &v) in self.grid.v_values().iter().enumerate() {
            for (bp, m) in self.grid.breakpoints(i).iter().zip(&self.values[i]) {
                for b in 0..m.ncols() {
                    for a in 0..m.nrows() {
                        rows.push((v, bp.omega, a, b, m[(a, b)].norm()));
                    }
                }
            }
        }
        rows
    }
}

fn check_grid(series: &MultivariateSeries, grid: &EvaluationGrid) -> Result<()> {
    if grid.t_len() != series.len() {
        return Err(Error::domain(format!(
            "grid built for T = {} but series has T = {}",
            grid.t_len(),
            series.len()
        )));
    }
    Ok(())
}

fn frobenius(m: &DMatrix<f64>) -> f64 {
    m.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Cumulative periodograms of every prefix on the grid. The last entry is
/// the full-sample one.
fn prefix_sums(series: &MultivariateSeries, grid: &EvaluationGrid) -> Vec<CumulativePeriodogram> {
    grid.half_lengths()
        .iter()
        .map(|&n| cumulative_unchecked(series, 2 * n))
        .collect()
}

/// Visits `D̂(v_i, ω_j)` as a flat column-major block for every grid point.
fn scan<F>(series: &MultivariateSeries, grid: &EvaluationGrid, mut visit: F)
where
    F: FnMut(usize, usize, &[Complex64]),
{
    let dd = series.dim() * series.dim();
    let t = grid.t_eff() as f64;
    let sums = prefix_sums(series, grid);
    let full = sums.last().expect("grid contains v = 1");
    let mut buf = vec![Complex64::default(); dd];
    for (i, (&v, prefix)) in grid.v_values().iter().zip(&sums).enumerate() {
        let (w1, w2) = (v / t, v * v / t);
        for (j, bp) in grid.breakpoints(i).iter().enumerate() {
            let s_v = prefix.block(bp.k_prefix);
            let s_1 = full.block(bp.k_full);
            for e in 0..dd {
                buf[e] = s_v[e] * w1 - s_1[e] * w2;
            }
            visit(i, j, &buf);
        }
    }
}

/// Entrywise supremum matrix `M[a][b] = sup |D̂_ab(v, ω)|` and its Frobenius
/// norm, without materialising the field.
pub fn sup_statistic(series: &MultivariateSeries, grid: &EvaluationGrid) -> Result<(DMatrix<f64>, f64)> {
    check_grid(series, grid)?;
    Ok(sup_unchecked(series, grid))
}

pub(crate) fn sup_unchecked(series: &MultivariateSeries, grid: &EvaluationGrid) -> (DMatrix<f64>, f64) {
    let d = series.dim();
    let mut sup = DMatrix::<f64>::zeros(d, d);
    scan(series, grid, |_, _, block| {
        for (m, z) in sup.iter_mut().zip(block) {
            *m = m.max(z.norm());
        }
    });
    let stat = frobenius(&sup);
    (sup, stat)
}

/// Test statistic `‖M‖_F`.
pub fn statistic(series: &MultivariateSeries, grid: &EvaluationGrid) -> Result<f64> {
    sup_statistic(series, grid).map(|(_, s)| s)
}

pub fn deviation_field(series: &MultivariateSeries, grid: &EvaluationGrid) -> Result<DeviationField> {
    check_grid(series, grid)?;
    let d = series.dim();
    let mut values: Vec<Vec<CMatrix>> = (0..grid.len())
        .map(|i| Vec::with_capacity(grid.breakpoints(i).len()))
        .collect();
    let mut sup = DMatrix::<f64>::zeros(d, d);
    scan(series, grid, |i, _, block| {
        for (m, z) in sup.iter_mut().zip(block) {
            *m = m.max(z.norm());
        }
        values[i].push(CMatrix::from_column_slice(d, d, block));
    });
    let statistic = frobenius(&sup);
    Ok(DeviationField {
        grid: grid.clone(),
        values,
        sup_matrix: sup,
        statistic,
    })
}

/// `D̂(v, ω)` at one point, from scratch. `v` must satisfy `2⌊vT/2⌋ >= 2`.
pub fn deviation_at(series: &MultivariateSeries, v: f64, omega: f64) -> Result<CMatrix> {
    series.check_testable()?;
    if !(0.0..=1.0).contains(&v) || !(0.0..=1.0).contains(&omega) {
        return Err(Error::domain("v and omega must lie in [0, 1]"));
    }
    let t_eff = series.effective_len();
    let n_1 = t_eff / 2;
    let n_v = (v * t_eff as f64 / 2.0).floor() as usize;
    if n_v == 0 {
        return Err(Error::domain(format!("v = {v} selects an empty prefix")));
    }
    let prefix = cumulative_unchecked(series, 2 * n_v);
    let full = cumulative_unchecked(series, 2 * n_1);
    let k_v = (omega * n_v as f64).floor() as usize;
    let k_1 = (omega * n_1 as f64).floor() as usize;
    let t = t_eff as f64;
    Ok(prefix.get(k_v) * Complex64::from(v / t) - full.get(k_1) * Complex64::from(v * v / t))
}

/// Covariance of the limiting Gaussian field between entries `(a1, b1)` at
/// `(v1, ω1)` and `(a2, b2)` at `(v2, ω2)`:
///
/// ```text
/// (1/2π) v1 v2 (min(v1,v2) − v1 v2) ∫_0^{min(ω1,ω2)π} f_{a1 b2}(λ) f_{b1 a2}(−λ) dλ
/// ```
///
/// `f_bar` is the (time-averaged) spectral density. The integral uses
/// adaptive Simpson quadrature with relative tolerance `1e-8`; the real part
/// is returned.
#[allow(clippy::too_many_arguments)]
pub fn limit_covariance_kernel<F>(
    v1: f64,
    omega1: f64,
    v2: f64,
    omega2: f64,
    f_bar: F,
    a1: usize,
    b1: usize,
    a2: usize,
    b2: usize,
) -> Result<f64>
where
    F: Fn(f64) -> CMatrix,
{
    for x in [v1, omega1, v2, omega2] {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::domain("kernel arguments must lie in [0, 1]"));
        }
    }
    let weight = v1 * v2 * (v1.min(v2) - v1 * v2) / (2.0 * PI);
    let upper = omega1.min(omega2) * PI;
    if weight == 0.0 || upper == 0.0 {
        return Ok(0.0);
    }
    let d = f_bar(0.0).nrows();
    if [a1, b1, a2, b2].iter().any(|&i| i >= d) {
        return Err(Error::domain("component index out of range"));
    }
    let integrand = |lam: f64| f_bar(lam)[(a1, b2)] * f_bar(-lam)[(b1, a2)];
    let integral = adaptive_simpson(&integrand, 0.0, upper, 1e-8);
    Ok(weight * integral.re)
}

fn adaptive_simpson<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, rel_tol: f64) -> Complex64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (fa + fm * 4.0 + fb) * ((b - a) / 6.0);
    let scale = whole.norm().max(f64::MIN_POSITIVE);
    simpson_step(f, a, b, fa, fm, fb, whole, rel_tol * scale, 50)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    fa: Complex64,
    fm: Complex64,
    fb: Complex64,
    whole: Complex64,
    tol: f64,
    depth: u32,
) -> Complex64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (fa + flm * 4.0 + fm) * ((m - a) / 6.0);
    let right = (fm + frm * 4.0 + fb) * ((b - m) / 6.0);
    let delta = left + right - whole;
    if depth == 0 || delta.norm() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}
