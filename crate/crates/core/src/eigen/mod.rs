//! Eigenvalue solvers and bulk/outlier separation.

pub mod arnoldi;
pub mod dense;

use num_complex::Complex64;

pub use arnoldi::{topk, ArnoldiOptions, EigenReport};
pub use dense::{dense_spectrum, symmetric_eigen, DenseEigen};

use crate::error::Result;
use crate::sparse::MatVec;

/// Default relative margin around the bulk radius.
pub const DEFAULT_MARGIN: f64 = 0.1;

/// Eigenvalues within this distance of `1` or `-(q-1)` are treated as trivial.
pub const TRIVIAL_TOL: f64 = 1e-6;

/// `sqrt((q - 1) d)`.
pub fn bulk_radius(q: usize, d: f64) -> f64 {
    ((q - 1) as f64 * d).max(0.0).sqrt()
}

pub fn is_trivial(lambda: Complex64, q: usize) -> bool {
    (lambda - 1.0).norm() <= TRIVIAL_TOL || (lambda + (q - 1) as f64).norm() <= TRIVIAL_TOL
}

/// Indices of eigenvalues with `|lambda| > (1 + margin) sqrt((q - 1) d)`,
/// skipping the trivial values `1` and `-(q-1)`. A margin of `-1` or below
/// returns every index.
pub fn outside_bulk(values: &[Complex64], q: usize, d: f64, margin: f64) -> Vec<usize> {
    if margin <= -1.0 {
        return (0..values.len()).collect();
    }
    let thr = (1.0 + margin) * bulk_radius(q, d);
    values
        .iter()
        .enumerate()
        .filter(|(_, l)| l.norm() > thr && !is_trivial(**l, q))
        .map(|(i, _)| i)
        .collect()
}

impl EigenReport {
    /// Records the bulk radius for mean degree `d` and the indices outside it.
    pub fn classify(&mut self, q: usize, d: f64, margin: f64) {
        self.bulk_radius = Some(bulk_radius(q, d));
        self.informative = outside_bulk(&self.ritz_values, q, d, margin);
    }

    /// Whether the smallest reported eigenvalue is already inside the bulk
    /// threshold, so that no further outlier can exist below it.
    pub fn reaches_bulk(&self, q: usize, d: f64, margin: f64) -> bool {
        let thr = (1.0 + margin.max(-1.0)) * bulk_radius(q, d);
        self.ritz_values.last().is_some_and(|l| l.norm() <= thr)
    }
}

/// Computes leading eigenpairs, doubling `k` until the smallest reported
/// eigenvalue lies inside the bulk threshold (or `k_max` is reached), then
/// classifies them.
pub fn leading_outliers(
    op: &dyn MatVec,
    q: usize,
    d: f64,
    margin: f64,
    k_start: usize,
    k_max: usize,
    opts: &ArnoldiOptions,
) -> Result<EigenReport> {
    let mut k = k_start.max(1);
    loop {
        let mut rep = topk(op, k, opts)?;
        rep.classify(q, d, margin);
        if margin <= -1.0 || rep.reaches_bulk(q, d, margin) || k >= k_max.min(op.dim()) {
            return Ok(rep);
        }
        k = (2 * k).min(k_max);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bulk_selection() {
        let vals = vec![
            Complex64::new(12.0, 0.0),
            Complex64::new(6.0, 0.0),
            Complex64::new(-3.0, 0.0),
            Complex64::new(3.0, 1.0),
            Complex64::new(1.0, 0.0),
        ];
        assert_eq!(outside_bulk(&vals, 4, 4.0, 0.1), vec![0, 1]);
        assert_eq!(outside_bulk(&vals, 4, 4.0, -1.0).len(), 5);
        // -(q-1) = -3 is trivial even when outside the radius.
        assert_eq!(outside_bulk(&vals, 4, 0.5, 0.0), vec![0, 1, 3]);
    }
}
