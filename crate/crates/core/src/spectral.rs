//! Fourier frequencies, finite Fourier transforms of data prefixes and
//! cross-periodogram matrices.
//!
//! For a prefix of length `n` the periodogram at `λ` is
//! `I_n(λ) = D(λ) D(λ)^H / (2πn)` with `D(λ) = Σ_{s<n} X_{1+s} e^{-iλs}`,
//! which equals the double sum over `r, s` of `X_{1+s} X_{1+r}^T e^{-iλ(s-r)}`
//! divided by `2πn`.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::series::MultivariateSeries;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(n: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(n))
}

/// `λ_{k,n} = 2πk/n` for `1 <= k <= n`.
pub fn fourier_frequency(k: usize, n: usize) -> Result<f64> {
    if n == 0 || k == 0 || k > n {
        return Err(Error::domain(format!("frequency index {k} outside 1..={n}")));
    }
    Ok(2.0 * PI * k as f64 / n as f64)
}

/// A `d × d` Hermitian periodogram or spectral-density value.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralMatrix {
    pub entries: CMatrix,
    pub frequency: f64,
    /// Segment length the frequency refers to; 0 for model densities.
    pub base: usize,
}

fn check_base(series: &MultivariateSeries, n: usize) -> Result<()> {
    if n == 0 || n % 2 == 1 {
        return Err(Error::domain(format!("periodogram base {n} must be a positive even integer")));
    }
    if n > series.effective_len() {
        return Err(Error::domain(format!(
            "periodogram base {n} exceeds the {} usable observations",
            series.effective_len()
        )));
    }
    Ok(())
}

/// Finite Fourier transforms of the first `n` observations of every
/// component: `out[a][k] = Σ_{s<n} X_{1+s,a} e^{-2πiks/n}` for `k < n`.
pub fn fourier_transform(series: &MultivariateSeries, n: usize) -> Vec<Vec<Complex64>> {
    let fft = plan(n);
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
    (0..series.dim())
        .map(|a| {
            let mut buf: Vec<Complex64> = series.column(a)[..n]
                .iter()
                .map(|&x| Complex64::new(x, 0.0))
                .collect();
            fft.process_with_scratch(&mut buf, &mut scratch);
            buf
        })
        .collect()
}

fn outer(dft: &[Vec<Complex64>], k: usize, scale: f64) -> CMatrix {
    let d = dft.len();
    CMatrix::from_fn(d, d, |a, b| dft[a][k] * dft[b][k].conj() * scale)
}

/// `I_n(λ_{k,n})` from the first `n` observations, `1 <= k <= n`.
pub fn periodogram_matrix(series: &MultivariateSeries, n: usize, k: usize) -> Result<SpectralMatrix> {
    check_base(series, n)?;
    let frequency = fourier_frequency(k, n)?;
    let dft = fourier_transform(series, n);
    Ok(SpectralMatrix {
        entries: outer(&dft, k % n, 1.0 / (2.0 * PI * n as f64)),
        frequency,
        base: n,
    })
}

/// Periodogram matrices `I_n(λ_{k,n})` for `k = 1..=n/2`.
pub fn periodogram_bins(series: &MultivariateSeries, n: usize) -> Result<Vec<CMatrix>> {
    check_base(series, n)?;
    let dft = fourier_transform(series, n);
    let scale = 1.0 / (2.0 * PI * n as f64);
    Ok((1..=n / 2).map(|k| outer(&dft, k, scale)).collect())
}

/// Partial sums `S(m) = Σ_{k=1}^{m} I_n(λ_{k,n})` for `m = 0..=n/2`.
///
/// Stored flat, `d²` complex entries per `m`, column-major within a block.
#[derive(Debug, Clone)]
pub struct CumulativePeriodogram {
    base: usize,
    dim: usize,
    sums: Vec<Complex64>,
}

impl CumulativePeriodogram {
    pub fn base(&self) -> usize {
        self.base
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Largest valid index, `n/2`.
    pub fn max_index(&self) -> usize {
        self.base / 2
    }

    /// Entries of `S(m)` as a flat column-major `d × d` block.
    #[inline]
    pub fn block(&self, m: usize) -> &[Complex64] {
        let dd = self.dim * self.dim;
        &self.sums[m * dd..(m + 1) * dd]
    }

    pub fn get(&self, m: usize) -> CMatrix {
        CMatrix::from_column_slice(self.dim, self.dim, self.block(m))
    }

    pub fn partial_sums(&self) -> Vec<CMatrix> {
        (0..=self.max_index()).map(|m| self.get(m)).collect()
    }
}

pub fn cumulative_periodogram(series: &MultivariateSeries, n: usize) -> Result<CumulativePeriodogram> {
    check_base(series, n)?;
    Ok(cumulative_unchecked(series, n))
}

#[allow(clippy::needless_range_loop)]
pub(crate) fn cumulative_unchecked(series: &MultivariateSeries, n: usize) -> CumulativePeriodogram {
    let d = series.dim();
    let dd = d * d;
    let half = n / 2;
    let dft = fourier_transform(series, n);
    let scale = 1.0 / (2.0 * PI * n as f64);
    let mut sums = vec![Complex64::default(); (half + 1) * dd];
    for k in 1..=half {
        let (prev, cur) = sums[(k - 1) * dd..(k + 1) * dd].split_at_mut(dd);
        for b in 0..d {
            let conj_b = dft[b][k].conj() * scale;
            for a in 0..d {
                let i = a + b * d;
                cur[i] = prev[i] + dft[a][k] * conj_b;
            }
        }
    }
    CumulativePeriodogram { base: n, dim: d, sums }
}
