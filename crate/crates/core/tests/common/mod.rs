//! Independent reference implementations used as test oracles.
#![allow(dead_code)]

use std::f64::consts::PI;

use lsstat::linalg::CMatrix;
use lsstat::rng;
use lsstat::{Complex64, MultivariateSeries};
use rand::Rng;
use rand_distr::StandardNormal;

/// Gaussian `t × d` series from a seed.
pub fn gaussian(t: usize, d: usize, seed: u64) -> MultivariateSeries {
    let mut r = rng::stream(seed);
    let xs: Vec<f64> = (0..t * d).map(|_| r.sample(StandardNormal)).collect();
    MultivariateSeries::from_row_major(t, d, &xs).unwrap()
}

/// `I_n(λ) = (2πn)^{-1} Σ_{r,s<n} X_{1+s} X_{1+r}^T exp(−iλ(s−r))`, computed
/// with the double sum.
pub fn double_sum_periodogram(x: &MultivariateSeries, n: usize, lambda: f64) -> CMatrix {
    let d = x.dim();
    let mut m = CMatrix::zeros(d, d);
    for s in 0..n {
        for r in 0..n {
            let w = Complex64::from_polar(1.0, -lambda * (s as f64 - r as f64));
            for a in 0..d {
                for b in 0..d {
                    m[(a, b)] += w * (x.column(a)[s] * x.column(b)[r]);
                }
            }
        }
    }
    m / Complex64::from(2.0 * PI * n as f64)
}

/// `D̂(v, ω)` straight from its definition, with the double-sum periodogram.
/// `v` is given through the prefix half-length `n_v = ⌊v T_eff / 2⌋`.
pub fn brute_force_deviation(x: &MultivariateSeries, n_v: usize, omega: f64) -> CMatrix {
    let t = 2 * (x.len() / 2);
    let n_1 = t / 2;
    let v = 2.0 * n_v as f64 / t as f64;
    let d = x.dim();
    let mut first = CMatrix::zeros(d, d);
    let k_v = (omega * n_v as f64 + 1e-12).floor() as usize;
    for k in 1..=k_v {
        first += double_sum_periodogram(x, 2 * n_v, 2.0 * PI * k as f64 / (2 * n_v) as f64);
    }
    let mut second = CMatrix::zeros(d, d);
    let k_1 = (omega * n_1 as f64 + 1e-12).floor() as usize;
    for k in 1..=k_1 {
        second += double_sum_periodogram(x, t, 2.0 * PI * k as f64 / t as f64);
    }
    first * Complex64::from(v / t as f64) - second * Complex64::from(v * v / t as f64)
}

/// Largest index sets with no flagged pair (diagonal included), by
/// enumerating all `2^d` subsets.
pub fn exhaustive_zero_sets(c: &[Vec<bool>]) -> (usize, Vec<Vec<usize>>) {
    let d = c.len();
    let mut best = 0;
    let mut sets = Vec::new();
    for mask in 1u32..(1 << d) {
        let members: Vec<usize> = (0..d).filter(|&i| mask & (1 << i) != 0).collect();
        let ok = members.iter().all(|&a| members.iter().all(|&b| !c[a][b]));
        if !ok {
            continue;
        }
        if members.len() > best {
            best = members.len();
            sets.clear();
        }
        if members.len() == best {
            sets.push(members);
        }
    }
    sets.sort();
    (best, sets)
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}
