//! Identification of stationary sub-series after a rejection.
//!
//! Each pair `(a, b)` is flagged when `√T · M[a][b]` exceeds the hard
//! threshold `T^γ · sqrt(2 V̂_ab · log(d(d+1)/2))`, with the variation proxy
//! `V̂_ab = 0.0125 π⁻² T⁻² Σ X²_a Σ X²_b`. The largest component sets without
//! any flagged pair (diagonal included) are the maximum cliques of the graph
//! of unflagged pairs.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::deviation::DeviationField;
use crate::error::{Error, Result};
use crate::series::MultivariateSeries;

/// Largest dimension accepted by the clique search.
pub const MAX_DIM: usize = 30;

pub const DEFAULT_GAMMA: f64 = 0.25;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentificationResult {
    pub indicator: Vec<Vec<bool>>,
    pub thresholds: Vec<Vec<f64>>,
    pub pair_stats: Vec<Vec<f64>>,
    pub d_prime: usize,
    /// Every maximum set, 0-based component indices, lexicographic order.
    pub subsets: Vec<Vec<usize>>,
    pub gamma: f64,
}

/// `0.0125 π⁻² T⁻² Σ_t X²_{t,a} Σ_t X²_{t,b}` over the first `2⌊T/2⌋` points.
pub fn variation_proxy(series: &MultivariateSeries, a: usize, b: usize) -> Result<f64> {
    let d = series.dim();
    if a >= d || b >= d {
        return Err(Error::domain(format!("component index out of range for d = {d}")));
    }
    let t = series.effective_len();
    let ss = |j: usize| series.column(j)[..t].iter().map(|x| x * x).sum::<f64>();
    let tf = t as f64;
    Ok(0.0125 / (PI * PI) / (tf * tf) * ss(a) * ss(b))
}

/// `T^γ sqrt(2 V̂_ab log(d(d+1)/2))`.
pub fn threshold(series: &MultivariateSeries, a: usize, b: usize, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    let v = variation_proxy(series, a, b)?;
    Ok(threshold_from(v, series.effective_len(), series.dim(), gamma))
}

fn threshold_from(proxy: f64, t_eff: usize, d: usize, gamma: f64) -> f64 {
    let pairs = (d * (d + 1)) as f64 / 2.0;
    (t_eff as f64).powf(gamma) * (2.0 * proxy * pairs.ln()).sqrt()
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma < 0.5) {
        return Err(Error::domain(format!("gamma = {gamma} must lie in (0, 1/2)")));
    }
    Ok(())
}

pub fn identify(series: &MultivariateSeries, field: &DeviationField, gamma: f64) -> Result<IdentificationResult> {
    check_gamma(gamma)?;
    let d = series.dim();
    if d < 2 {
        return Err(Error::domain(
            "identification needs d >= 2: with one component log(d(d+1)/2) = 0 and the threshold vanishes",
        ));
    }
    if d > MAX_DIM {
        return Err(Error::domain(format!("identification supports at most {MAX_DIM} components")));
    }
    if field.sup_matrix.nrows() != d || field.grid.t_len() != series.len() {
        return Err(Error::domain("deviation field was not computed on this series"));
    }
    let t_eff = series.effective_len();
    let root_t = (t_eff as f64).sqrt();
    let mut pair_stats = vec![vec![0.0; d]; d];
    let mut thresholds = vec![vec![0.0; d]; d];
    let mut indicator = vec![vec![false; d]; d];
    for a in 0..d {
        for b in 0..d {
            pair_stats[a][b] = root_t * field.sup_matrix[(a, b)];
            thresholds[a][b] = threshold_from(variation_proxy(series, a, b)?, t_eff, d, gamma);
            indicator[a][b] = pair_stats[a][b] > thresholds[a][b];
        }
    }
    let (d_prime, subsets) = maximum_zero_sets(&indicator)?;
    Ok(IdentificationResult {
        indicator,
        thresholds,
        pair_stats,
        d_prime,
        subsets,
        gamma,
    })
}

/// All largest index sets `S` with `c(a, b) = 0` for every `a, b ∈ S`.
#[allow(clippy::needless_range_loop)]
pub fn maximum_zero_sets(indicator: &[Vec<bool>]) -> Result<(usize, Vec<Vec<usize>>)> {
    let d = indicator.len();
    if d > MAX_DIM {
        return Err(Error::domain(format!("at most {MAX_DIM} components supported")));
    }
    let mut vertices = 0u32;
    let mut adj = vec![0u32; d];
    for i in 0..d {
        if !indicator[i][i] {
            vertices |= 1 << i;
        }
        for j in 0..d {
            if i != j && !indicator[i][j] && !indicator[j][i] {
                adj[i] |= 1 << j;
            }
        }
    }
    for a in adj.iter_mut() {
        *a &= vertices;
    }
    let cliques = maximum_cliques(&adj, vertices);
    let size = cliques.first().map_or(0, |c| c.count_ones() as usize);
    let mut subsets: Vec<Vec<usize>> = cliques
        .into_iter()
        .map(|c| (0..d).filter(|&i| c & (1 << i) != 0).collect())
        .collect();
    subsets.sort();
    Ok((size, subsets))
}

/// Branch and bound over vertices sorted by decreasing degree. Returns every
/// clique of maximum size as a bit set; empty if `vertices` is empty.
fn maximum_cliques(adj: &[u32], vertices: u32) -> Vec<u32> {
    if vertices == 0 {
        return Vec::new();
    }
    let mut order: Vec<usize> = (0..adj.len()).filter(|&v| vertices & (1 << v) != 0).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse((adj[v] & vertices).count_ones()), v));

    struct Search<'a> {
        adj: &'a [u32],
        order: Vec<usize>,
        best: u32,
        found: Vec<u32>,
    }

    impl Search<'_> {
        fn expand(&mut self, clique: u32, mut candidates: u32) {
            let size = clique.count_ones();
            if size + candidates.count_ones() < self.best {
                return;
            }
            if candidates == 0 {
                if size > self.best {
                    self.best = size;
                    self.found.clear();
                }
                self.found.push(clique);
                return;
            }
            for i in 0..self.order.len() {
                let v = self.order[i];
                if candidates & (1 << v) == 0 {
                    continue;
                }
                if size + candidates.count_ones() < self.best {
                    return;
                }
                self.expand(clique | (1 << v), candidates & self.adj[v]);
                candidates &= !(1 << v);
            }
        }
    }

    let mut s = Search {
        adj,
        order,
        best: 0,
        found: Vec::new(),
    };
    s.expand(0, vertices);
    s.found
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_zero_pairs(d: usize, zero: &[(usize, usize)]) -> Vec<Vec<bool>> {
        let mut c = vec![vec![true; d]; d];
        for &(a, b) in zero {
            c[a][b] = false;
            c[b][a] = false;
        }
        c
    }

    #[test]
    fn complete_and_empty_graphs() {
        let zero = vec![vec![false; 4]; 4];
        assert_eq!(maximum_zero_sets(&zero).unwrap(), (4, vec![vec![0, 1, 2, 3]]));
        let ones = vec![vec![true; 4]; 4];
        assert_eq!(maximum_zero_sets(&ones).unwrap(), (0, vec![]));
    }

    #[test]
    fn two_disjoint_blocks() {
        // {1,3} and {2,4} in 1-based labels
        let c = from_zero_pairs(4, &[(0, 0), (2, 2), (0, 2), (1, 1), (3, 3), (1, 3)]);
        assert_eq!(maximum_zero_sets(&c).unwrap(), (2, vec![vec![0, 2], vec![1, 3]]));
    }

    #[test]
    fn diagonal_flags_exclude_vertices() {
        let mut c = vec![vec![false; 3]; 3];
        c[1][1] = true;
        assert_eq!(maximum_zero_sets(&c).unwrap(), (2, vec![vec![0, 2]]));
    }

    #[test]
    fn proxy_and_threshold() {
        let z = MultivariateSeries::from_row_major(8, 2, &[0.0; 16]).unwrap();
        assert_eq!(variation_proxy(&z, 0, 1).unwrap(), 0.0);
        assert_eq!(threshold(&z, 0, 1, 0.25).unwrap(), 0.0);
        assert!(threshold(&z, 0, 1, 0.5).is_err());
        assert!(threshold(&z, 0, 1, 0.0).is_err());

        // d = 2, T = 256, γ = 1/4, V̂ = 1.2665e-3
        let eps = threshold_from(1.2665e-3, 256, 2, 0.25);
        assert!((eps - 4.0 * (2.0 * 1.2665e-3 * 3f64.ln()).sqrt()).abs() < 1e-15);
        assert!((eps - 0.2110).abs() < 5e-4);
        assert!(threshold_from(1e-3, 256, 3, 0.3) > threshold_from(1e-3, 256, 3, 0.2));
    }

    #[test]
    fn proxy_scales_with_fourth_power() {
        let xs: Vec<f64> = (0..32).map(|i| (i as f64 * 0.9).cos()).collect();
        let s = MultivariateSeries::from_row_major(16, 2, &xs).unwrap();
        let v = variation_proxy(&s, 0, 1).unwrap();
        let v3 = variation_proxy(&s.scaled(3.0), 0, 1).unwrap();
        assert!((v3 / v - 81.0).abs() < 1e-12);
    }
}
