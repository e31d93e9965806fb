//! Dense matrix helpers behind the unfolding-based tensor operations.

use nalgebra::DMatrix;

use crate::scalar::Scalar;

/// Singular values in descending order.
pub fn singular_values<T: Scalar>(m: &DMatrix<T>) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut sv: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Numerical rank: singular values above `tol * sigma_max * max(rows, cols)`.
pub fn numerical_rank<T: Scalar>(m: &DMatrix<T>, tol: f64) -> usize {
    let sv = singular_values(m);
    let Some(&smax) = sv.first() else {
        return 0;
    };
    if smax == 0.0 {
        return 0;
    }
    let cutoff = tol * smax * m.nrows().max(m.ncols()) as f64;
    sv.iter().filter(|&&s| s > cutoff).count()
}

/// Ratio of extreme singular values; infinite when singular.
pub fn condition_number<T: Scalar>(m: &DMatrix<T>) -> f64 {
    let sv = singular_values(m);
    match (sv.first(), sv.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        _ => f64::INFINITY,
    }
}

pub fn spectral_norm<T: Scalar>(m: &DMatrix<T>) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Extreme eigenvalues `(min, max)` of the symmetric part `(M + M^T) / 2`.
pub fn symmetric_part_extremes(m: &DMatrix<f64>) -> (f64, f64) {
    if m.is_empty() {
        return (0.0, 0.0);
    }
    let sym = (m + m.transpose()) * 0.5;
    let eig = sym.symmetric_eigenvalues();
    (eig.min(), eig.max())
}
