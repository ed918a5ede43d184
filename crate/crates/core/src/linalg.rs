//! Small dense linear-algebra helpers on top of `nalgebra`.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

/// Smallest eigenvalue of a symmetric matrix.
pub fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    m.clone()
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// `trace(m) / n`, floored at the smallest positive normal so it can be
/// used as a relative scale.
pub fn trace_scale(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows().max(1) as f64;
    (m.trace() / n).abs().max(f64::MIN_POSITIVE)
}

pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Block companion matrix of a VAR with coefficient blocks `coeffs`.
pub fn companion(coeffs: &[DMatrix<f64>]) -> DMatrix<f64> {
    let p = coeffs.len();
    if p == 0 {
        return DMatrix::zeros(0, 0);
    }
    let d = coeffs[0].nrows();
    let mut c = DMatrix::zeros(d * p, d * p);
    for (j, a) in coeffs.iter().enumerate() {
        c.view_mut((0, j * d), (d, d)).copy_from(a);
    }
    for i in 0..d * (p - 1) {
        c[(d + i, i)] = 1.0;
    }
    c
}

/// Largest eigenvalue modulus.
pub fn spectral_radius(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    m.complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// Largest absolute deviation from Hermitian symmetry.
pub fn hermitian_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            worst = worst.max((m[(a, b)] - m[(b, a)].conj()).norm());
        }
    }
    worst
}

pub fn to_complex(m: &DMatrix<f64>) -> CMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}

/// Lower Cholesky factor, or `None` if `m` is not numerically positive definite.
pub fn cholesky_lower(m: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    m.clone().cholesky().map(|c| c.l())
}

pub fn rows_of(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

pub fn from_rows(rows: &[Vec<f64>]) -> DMatrix<f64> {
    let n = rows.len();
    let k = rows.first().map_or(0, Vec::len);
    DMatrix::from_fn(n, k, |i, j| rows[i][j])
}
