//! Restarted Arnoldi iteration for the largest-modulus eigenpairs of a real
//! non-symmetric operator.
//!
//! Each cycle extends a Krylov decomposition `A U = U G + f b^T` to the full
//! subspace dimension, computes the Ritz pairs of `G` with the dense solver,
//! and restarts from the invariant subspace spanned by the wanted Ritz
//! vectors (real and imaginary parts). Keeping exactly the wanted Ritz
//! vectors is the same filter as implicit restarting with the unwanted Ritz
//! values as exact shifts. Converged vectors stay in the basis, which locks
//! them.

use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};

use crate::eigen::dense::dense_spectrum;
use crate::error::Result;
use crate::rng::rng_from_seed;
use crate::sparse::{DenseMatrix, MatVec};

/// Operators of at most this dimension are solved densely.
const DENSE_CUTOFF: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArnoldiOptions {
    /// Residual tolerance relative to `max(1, |lambda|)`.
    pub tol: f64,
    pub max_restarts: usize,
    /// Krylov subspace dimension; `None` means `max(2k + 10, 32)`.
    pub subspace_dim: Option<usize>,
    pub seed: u64,
}

impl Default for ArnoldiOptions {
    fn default() -> Self {
        ArnoldiOptions {
            tol: 1e-8,
            max_restarts: 500,
            subspace_dim: None,
            seed: 0,
        }
    }
}

/// Leading eigenpairs of an operator, sorted by decreasing modulus.
#[derive(Debug, Clone, Default)]
pub struct EigenReport {
    pub ritz_values: Vec<Complex64>,
    /// Unit eigenvectors, aligned with `ritz_values`.
    pub vectors: Vec<Vec<Complex64>>,
    /// `|M v - lambda v|` recomputed with a fresh application of `M`.
    pub residuals: Vec<f64>,
    /// Residual estimates from the Krylov relation.
    pub estimated_residuals: Vec<f64>,
    pub converged: bool,
    pub restarts: usize,
    pub matvecs: usize,
    /// `sqrt((q - 1) d)`, filled in by [`EigenReport::classify`].
    pub bulk_radius: Option<f64>,
    /// Indices outside the bulk, filled in by [`EigenReport::classify`].
    pub informative: Vec<usize>,
}

/// Modulus descending, then real part descending, then imaginary part
/// descending, so a conjugate pair lists the positive imaginary part first.
pub(crate) fn modulus_order(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    b.norm()
        .total_cmp(&a.norm())
        .then(b.re.total_cmp(&a.re))
        .then(b.im.total_cmp(&a.im))
}

fn is_pair_start(vals: &[Complex64], i: usize) -> bool {
    vals[i].im > 0.0
        && i + 1 < vals.len()
        && (vals[i + 1] - vals[i].conj()).norm() <= 1e-12 * vals[i].norm().max(1.0)
}

/// Smallest count `>= want` that does not split a conjugate pair.
fn unsplit_count(vals: &[Complex64], want: usize) -> usize {
    if want == 0 || want >= vals.len() {
        return want.min(vals.len());
    }
    if is_pair_start(vals, want - 1) {
        want + 1
    } else {
        want
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Orthogonalizes `w` against `basis` with two classical Gram-Schmidt
/// passes; returns the accumulated coefficients.
fn orthogonalize(basis: &[Vec<f64>], w: &mut [f64]) -> Vec<f64> {
    let mut coef = vec![0.0; basis.len()];
    for _ in 0..2 {
        for (c, v) in coef.iter_mut().zip(basis) {
            let h = dot(v, w);
            *c += h;
            for (wi, vi) in w.iter_mut().zip(v) {
                *wi -= h * vi;
            }
        }
    }
    coef
}

fn random_unit(n: usize, rng: &mut crate::rng::Rng) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
    let s = norm(&v);
    v.iter_mut().for_each(|x| *x /= s);
    v
}

/// A unit vector orthogonal to `basis`, drawn at random.
fn random_orthogonal(basis: &[Vec<f64>], n: usize, rng: &mut crate::rng::Rng) -> Vec<f64> {
    loop {
        let mut v = random_unit(n, rng);
        orthogonalize(basis, &mut v);
        let s = norm(&v);
        if s > 1e-8 {
            v.iter_mut().for_each(|x| *x /= s);
            return v;
        }
    }
}

fn fresh_residual(op: &dyn MatVec, lambda: Complex64, x: &[Complex64]) -> f64 {
    let n = x.len();
    let re: Vec<f64> = x.iter().map(|c| c.re).collect();
    let mut are = vec![0.0; n];
    op.apply(&re, &mut are);
    let mut aim = vec![0.0; n];
    if lambda.im != 0.0 || x.iter().any(|c| c.im != 0.0) {
        let im: Vec<f64> = x.iter().map(|c| c.im).collect();
        op.apply(&im, &mut aim);
    }
    let mut s = 0.0;
    for i in 0..n {
        let ax = Complex64::new(are[i], aim[i]);
        s += (ax - lambda * x[i]).norm_sqr();
    }
    s.sqrt()
}

fn normalize_complex(mut v: Vec<Complex64>) -> Vec<Complex64> {
    let s = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if s > 0.0 {
        v.iter_mut().for_each(|c| *c /= s);
    }
    v
}

fn dense_report(op: &dyn MatVec, k: usize, tol: f64) -> Result<EigenReport> {
    let d = op.to_dense();
    let eig = dense_spectrum(&d, true)?;
    let vecs = eig.vectors.unwrap_or_default();
    let mut order: Vec<usize> = (0..eig.values.len()).collect();
    order.sort_by(|&a, &b| modulus_order(&eig.values[a], &eig.values[b]));
    let sorted: Vec<Complex64> = order.iter().map(|&i| eig.values[i]).collect();
    let kw = unsplit_count(&sorted, k);
    let mut rep = EigenReport {
        converged: true,
        ..Default::default()
    };
    for &i in order.iter().take(kw) {
        let lam = eig.values[i];
        let x = vecs[i].clone();
        let r = fresh_residual(op, lam, &x);
        rep.converged &= r <= tol * lam.norm().max(1.0);
        rep.ritz_values.push(lam);
        rep.vectors.push(x);
        rep.residuals.push(r);
        rep.estimated_residuals.push(r);
    }
    rep.matvecs = d.rows();
    Ok(rep)
}

/// Largest-modulus eigenpairs of `op`. Returns `k` pairs, or `k + 1` when the
/// `k`-th would split a conjugate pair. On non-convergence the report holds
/// the current best pairs with `converged = false`.
pub fn topk(op: &dyn MatVec, k: usize, opts: &ArnoldiOptions) -> Result<EigenReport> {
    let n = op.dim();
    let k = k.max(1).min(n);
    if n == 0 {
        return Ok(EigenReport {
            converged: true,
            ..Default::default()
        });
    }
    let m = opts
        .subspace_dim
        .unwrap_or((2 * k + 10).max(32))
        .max(2 * k + 2);
    if n <= DENSE_CUTOFF || m + 1 >= n {
        return dense_report(op, k, opts.tol);
    }

    let mut rng = rng_from_seed(opts.seed);
    let mut u: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
    u.push(random_unit(n, &mut rng));
    // g is (m + 1) x m, row-major in a dense matrix.
    let mut g = DenseMatrix::zeros(m + 1, m);
    let mut start = 0;
    let mut matvecs = 0;
    let mut restarts = 0;
    let mut w = vec![0.0; n];
    let mut anorm: f64 = 0.0;

    loop {
        // Extend the decomposition to m columns.
        for j in start..m {
            op.apply(&u[j], &mut w);
            matvecs += 1;
            let wn = norm(&w);
            anorm = anorm.max(wn);
            let coef = orthogonalize(&u[..=j], &mut w);
            for (i, c) in coef.into_iter().enumerate() {
                g[(i, j)] += c;
            }
            let beta = norm(&w);
            if beta <= 1e-12 * anorm.max(f64::MIN_POSITIVE) {
                g[(j + 1, j)] = 0.0;
                let v = random_orthogonal(&u[..=j], n, &mut rng);
                u.push(v);
            } else {
                g[(j + 1, j)] = beta;
                u.push(w.iter().map(|x| x / beta).collect());
            }
        }
        let beta_m = g[(m, m - 1)];

        let mut gm = DenseMatrix::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                gm[(i, j)] = g[(i, j)];
            }
        }
        let eig = dense_spectrum(&gm, true)?;
        let y = eig.vectors.unwrap_or_default();
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| modulus_order(&eig.values[a], &eig.values[b]));
        let vals: Vec<Complex64> = order.iter().map(|&i| eig.values[i]).collect();
        let est: Vec<f64> = order
            .iter()
            .map(|&i| beta_m.abs() * y[i][m - 1].norm())
            .collect();

        let kw = unsplit_count(&vals, k);
        let is_conv = |i: usize| est[i] <= opts.tol * vals[i].norm().max(1.0);
        let nconv = (0..kw).filter(|&i| is_conv(i)).count();

        if nconv == kw || restarts >= opts.max_restarts {
            let mut rep = EigenReport {
                restarts,
                converged: true,
                ..Default::default()
            };
            for (pos, &i) in order.iter().take(kw).enumerate() {
                let lam = eig.values[i];
                let mut x = vec![Complex64::new(0.0, 0.0); n];
                for (c, uc) in y[i].iter().zip(&u) {
                    for (xi, ui) in x.iter_mut().zip(uc) {
                        *xi += c * ui;
                    }
                }
                let x = normalize_complex(x);
                let r = fresh_residual(op, lam, &x);
                matvecs += 1 + usize::from(lam.im != 0.0);
                rep.converged &= r <= opts.tol * lam.norm().max(1.0);
                rep.ritz_values.push(lam);
                rep.vectors.push(x);
                rep.residuals.push(r);
                rep.estimated_residuals.push(est[pos]);
            }
            rep.matvecs = matvecs;
            return Ok(rep);
        }

        // Keep the wanted Ritz vectors plus some extra, as ARPACK does.
        let extra = nconv.min((m - kw) / 2);
        let keep = unsplit_count(&vals, (kw + extra).min(m - 1)).min(m - 1);
        let keep = if keep > 0 && is_pair_start(&vals, keep - 1) {
            keep - 1
        } else {
            keep
        };

        // Real basis of the kept invariant subspace of G.
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(keep);
        let mut p = 0;
        while p < keep {
            let yi = &y[order[p]];
            let mut cands = vec![yi.iter().map(|c| c.re).collect::<Vec<f64>>()];
            if vals[p].im != 0.0 {
                cands.push(yi.iter().map(|c| c.im).collect());
                p += 2;
            } else {
                p += 1;
            }
            for mut c in cands {
                let before = norm(&c);
                orthogonalize(&basis, &mut c);
                let s = norm(&c);
                if s > 1e-10 * before.max(f64::MIN_POSITIVE) {
                    c.iter_mut().for_each(|x| *x /= s);
                    basis.push(c);
                }
            }
        }
        let kk = basis.len();

        // New basis U W, projected matrix W^T G W, residual row beta W[m-1, :].
        let mut new_u: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
        for wcol in &basis {
            let mut v = vec![0.0; n];
            for (c, uc) in wcol.iter().zip(&u) {
                if *c != 0.0 {
                    for (vi, ui) in v.iter_mut().zip(uc) {
                        *vi += c * ui;
                    }
                }
            }
            new_u.push(v);
        }
        let gw: Vec<Vec<f64>> = basis
            .iter()
            .map(|wcol| {
                (0..m)
                    .map(|i| (0..m).map(|j| gm[(i, j)] * wcol[j]).sum())
                    .collect()
            })
            .collect();
        let mut new_g = DenseMatrix::zeros(m + 1, m);
        for a in 0..kk {
            for b in 0..kk {
                new_g[(a, b)] = dot(&basis[a], &gw[b]);
            }
            new_g[(kk, a)] = beta_m * basis[a][m - 1];
        }
        let tail = u.swap_remove(m);
        new_u.push(tail);
        u = new_u;
        g = new_g;
        start = kk;
        restarts += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparse::CsrMatrix;

    #[test]
    fn symmetric_positive_matches_power_iteration() {
        let n = 400;
        let mut trip = Vec::new();
        for i in 0..n {
            trip.push((
                i,
                i,
                if i == 17 {
                    4.0
                } else {
                    2.0 + (i % 7) as f64 * 0.1
                },
            ));
            trip.push((i, (i + 1) % n, 0.5));
            trip.push(((i + 1) % n, i, 0.5));
        }
        let a = CsrMatrix::from_triplets(n, n, &trip);
        let rep = topk(&a, 1, &ArnoldiOptions::default()).unwrap();
        assert!(rep.converged);
        let mut x = vec![1.0; n];
        let mut lam = 0.0;
        for _ in 0..5000 {
            let y = a.mul_vec(&x);
            lam = norm(&y) / norm(&x);
            let s = norm(&y);
            x = y.into_iter().map(|v| v / s).collect();
        }
        assert!((rep.ritz_values[0].re - lam).abs() < 1e-6);
    }

    #[test]
    fn finds_complex_pair() {
        let n = 300;
        let mut trip = Vec::new();
        for i in 2..n {
            trip.push((i, i, 0.01 * (i as f64).sin()));
        }
        // A planted rotation block with eigenvalues 3 +- 2i.
        trip.push((0, 0, 3.0));
        trip.push((0, 1, 2.0));
        trip.push((1, 0, -2.0));
        trip.push((1, 1, 3.0));
        let a = CsrMatrix::from_triplets(n, n, &trip);
        let rep = topk(&a, 1, &ArnoldiOptions::default()).unwrap();
        assert_eq!(rep.ritz_values.len(), 2);
        assert!((rep.ritz_values[0] - Complex64::new(3.0, 2.0)).norm() < 1e-8);
        assert!((rep.ritz_values[1] - Complex64::new(3.0, -2.0)).norm() < 1e-8);
        assert!(rep.converged);
    }
}
