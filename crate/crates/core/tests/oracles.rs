mod common;

use std::f64::consts::PI;

use common::*;
use lsstat::deviation::{build_grid, deviation_field, EvaluationGrid};
use lsstat::identify::maximum_zero_sets;
use lsstat::linalg::CMatrix;
use lsstat::spectral::periodogram_matrix;
use lsstat::var::{yule_walker_fit, AutocovarianceSequence};
use lsstat::Complex64;
use nalgebra::DMatrix;
use proptest::prelude::*;

#[test]
fn fast_periodogram_matches_double_sum() {
    let x = gaussian(128, 2, 17);
    for n in (2..=128).step_by(2) {
        for k in [1, (n / 3).max(1), n / 2, n - 1, n] {
            let fast = periodogram_matrix(&x, n, k).unwrap().entries;
            let slow = double_sum_periodogram(&x, n, 2.0 * PI * k as f64 / n as f64);
            let scale = slow.iter().map(|z| z.norm()).fold(1.0, f64::max);
            assert!(max_abs_diff(&fast, &slow) <= 1e-10 * scale, "n = {n}, k = {k}");
        }
    }
}

#[test]
fn parseval_identity() {
    for (seed, n, d) in [(1, 8, 1), (2, 30, 2), (3, 64, 3), (4, 126, 2)] {
        let x = gaussian(n, d, seed);
        let mut lhs = CMatrix::zeros(d, d);
        for k in 1..=n {
            lhs += periodogram_matrix(&x, n, k).unwrap().entries;
        }
        lhs *= Complex64::from(2.0 * PI / n as f64);
        let rhs = DMatrix::from_fn(d, d, |a, b| {
            (0..n).map(|t| x.column(a)[t] * x.column(b)[t]).sum::<f64>() / n as f64
        });
        for a in 0..d {
            for b in 0..d {
                assert!((lhs[(a, b)] - rhs[(a, b)]).norm() <= 1e-10, "n = {n}");
            }
        }
    }
}

fn check_field_against_definition(x: &lsstat::MultivariateSeries, grid: &EvaluationGrid) {
    let field = deviation_field(x, grid).unwrap();
    for (i, &n_v) in grid.half_lengths().iter().enumerate() {
        // every breakpoint plus a point strictly inside each step
        let mut omegas = grid.omega_values(i);
        let mids: Vec<f64> = omegas.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        omegas.extend(mids);
        for omega in omegas {
            let expected = brute_force_deviation(x, n_v, omega);
            let got = field.value_at(i, omega);
            assert!(
                max_abs_diff(&got, &expected) <= 1e-10,
                "n_v = {n_v}, omega = {omega}"
            );
        }
    }
}

#[test]
fn deviation_field_matches_definition_at_t8() {
    let x = gaussian(8, 2, 5);
    check_field_against_definition(&x, &build_grid(8).unwrap());
    check_field_against_definition(&x, &EvaluationGrid::with_half_lengths(8, vec![1, 2, 3, 4]).unwrap());
    let odd = gaussian(9, 1, 6);
    check_field_against_definition(&odd, &build_grid(9).unwrap());
    let twelve = gaussian(12, 2, 7);
    check_field_against_definition(&twelve, &build_grid(12).unwrap());
}

#[test]
fn sup_matrix_is_exact_over_dense_omega() {
    let x = gaussian(8, 2, 8);
    let grid = EvaluationGrid::with_half_lengths(8, vec![1, 2, 3, 4]).unwrap();
    let field = deviation_field(&x, &grid).unwrap();
    let mut dense = DMatrix::<f64>::zeros(2, 2);
    for &n_v in grid.half_lengths() {
        for j in 0..=2400 {
            let m = brute_force_deviation(&x, n_v, j as f64 / 2400.0);
            for e in 0..4 {
                dense[e] = dense[e].max(m[e].norm());
            }
        }
    }
    assert!((dense - &field.sup_matrix).amax() <= 1e-10);
}

#[test]
fn yule_walker_recovers_exact_ar1() {
    for phi in [-0.9, -0.3, 0.5, 0.95] {
        let g0 = 1.0 / (1.0 - phi * phi);
        let lags = (0..=4).map(|h| DMatrix::from_element(1, 1, g0 * f64::powi(phi, h))).collect();
        let acov = AutocovarianceSequence { lags };
        let m = yule_walker_fit(&acov, 1).unwrap();
        assert!((m.coeffs[0][(0, 0)] - phi).abs() <= 1e-10);
        assert!((m.sigma[(0, 0)] - 1.0).abs() <= 1e-10);
        let m3 = yule_walker_fit(&acov, 3).unwrap();
        assert!((m3.coeffs[0][(0, 0)] - phi).abs() <= 1e-10);
        assert!(m3.coeffs[1][(0, 0)].abs() <= 1e-10 && m3.coeffs[2][(0, 0)].abs() <= 1e-10);
    }
}

#[test]
fn two_block_example_matches_enumeration() {
    let mut c = vec![vec![true; 4]; 4];
    for (a, b) in [(0, 0), (2, 2), (0, 2), (2, 0), (1, 1), (3, 3), (1, 3), (3, 1)] {
        c[a][b] = false;
    }
    assert_eq!(maximum_zero_sets(&c).unwrap(), exhaustive_zero_sets(&c));
}

#[allow(clippy::needless_range_loop)]
fn indicator(d: usize, bits: &[bool], p_diag: &[bool]) -> Vec<Vec<bool>> {
    let mut c = vec![vec![false; d]; d];
    let mut it = bits.iter();
    for a in 0..d {
        c[a][a] = p_diag[a];
        for b in a + 1..d {
            let f = *it.next().unwrap();
            c[a][b] = f;
            c[b][a] = f;
        }
    }
    c
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn clique_search_matches_enumeration(
        d in 1usize..=12,
        bits in proptest::collection::vec(any::<bool>(), 66),
        diag in proptest::collection::vec(prop::bool::weighted(0.15), 12),
    ) {
        let c = indicator(d, &bits, &diag);
        prop_assert_eq!(maximum_zero_sets(&c).unwrap(), exhaustive_zero_sets(&c));
    }

    #[test]
    fn maximum_sets_are_maximal(
        d in 1usize..=10,
        bits in proptest::collection::vec(prop::bool::weighted(0.4), 45),
        diag in proptest::collection::vec(prop::bool::weighted(0.1), 10),
    ) {
        let c = indicator(d, &bits, &diag);
        let (size, sets) = maximum_zero_sets(&c).unwrap();
        for s in &sets {
            prop_assert_eq!(s.len(), size);
            for extra in (0..d).filter(|i| !s.contains(i)) {
                let bigger: Vec<usize> = s.iter().copied().chain([extra]).collect();
                prop_assert!(bigger.iter().any(|&a| bigger.iter().any(|&b| c[a][b])));
            }
        }
    }
}
