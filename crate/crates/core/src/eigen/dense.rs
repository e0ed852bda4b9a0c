//! Dense eigensolvers for small matrices: cyclic Jacobi for symmetric input
//! and Hessenberg reduction plus shifted QR for general real input.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sparse::DenseMatrix;

/// Largest dimension accepted by [`dense_spectrum`].
pub const DENSE_MAX_DIM: usize = 2000;

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Returns eigenvalues (unsorted) and a matrix whose column `k` is the unit
/// eigenvector of eigenvalue `k`.
pub fn symmetric_eigen(a: &DenseMatrix) -> (Vec<f64>, DenseMatrix) {
    let n = a.rows();
    assert_eq!(n, a.cols(), "symmetric_eigen needs a square matrix");
    let mut m = a.clone();
    let mut v = DenseMatrix::identity(n);
    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += m[(i, j)] * m[(i, j)];
            }
        }
        let scale = m.frobenius_norm().max(f64::MIN_POSITIVE);
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..n).map(|i| m[(i, i)]).collect(), v)
}

/// Spectral norm of a small dense matrix.
pub fn spectral_norm(a: &DenseMatrix) -> f64 {
    let ata = a.transpose().matmul(a);
    let (vals, _) = symmetric_eigen(&ata);
    vals.into_iter().fold(0.0, f64::max).sqrt()
}

/// All eigenvalues of a dense real matrix and, optionally, unit eigenvectors.
#[derive(Debug, Clone)]
pub struct DenseEigen {
    pub values: Vec<Complex64>,
    pub vectors: Option<Vec<Vec<Complex64>>>,
}

/// Full spectrum via Householder reduction to Hessenberg form and the
/// Francis double-shift QR iteration.
pub fn dense_spectrum(a: &DenseMatrix, want_vectors: bool) -> Result<DenseEigen> {
    let n = a.rows();
    assert_eq!(n, a.cols(), "dense_spectrum needs a square matrix");
    if n > DENSE_MAX_DIM {
        return Err(Error::TooLarge(format!(
            "dense eigensolver limited to dimension {DENSE_MAX_DIM}, got {n}"
        )));
    }
    if n == 0 {
        return Ok(DenseEigen {
            values: Vec::new(),
            vectors: want_vectors.then(Vec::new),
        });
    }
    let mut h: Vec<Vec<f64>> = (0..n).map(|i| a.row(i).to_vec()).collect();
    let mut v = vec![vec![0.0; n]; n];
    orthes(&mut h, &mut v);
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    hqr2(&mut h, &mut v, &mut d, &mut e, want_vectors)?;
    let values: Vec<Complex64> = d
        .iter()
        .zip(&e)
        .map(|(&re, &im)| Complex64::new(re, im))
        .collect();
    let vectors = want_vectors.then(|| {
        let mut out = Vec::with_capacity(n);
        let mut j = 0;
        while j < n {
            if e[j] == 0.0 {
                out.push(normalize(
                    (0..n).map(|i| Complex64::new(v[i][j], 0.0)).collect(),
                ));
                j += 1;
            } else {
                let w: Vec<Complex64> = (0..n)
                    .map(|i| Complex64::new(v[i][j], v[i][j + 1]))
                    .collect();
                out.push(normalize(w.clone()));
                out.push(normalize(w.into_iter().map(|c| c.conj()).collect()));
                j += 2;
            }
        }
        out
    });
    Ok(DenseEigen { values, vectors })
}

fn normalize(mut w: Vec<Complex64>) -> Vec<Complex64> {
    let s = w.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if s > 0.0 {
        for c in &mut w {
            *c /= s;
        }
    }
    w
}

/// Householder reduction to upper Hessenberg form; accumulates the
/// orthogonal transformation in `v`.
fn orthes(h: &mut [Vec<f64>], v: &mut [Vec<f64>]) {
    let n = h.len();
    let high = n - 1;
    let mut ort = vec![0.0; n];
    for m in 1..high {
        let scale: f64 = (m..=high).map(|i| h[i][m - 1].abs()).sum();
        if scale == 0.0 {
            continue;
        }
        let mut hh = 0.0;
        for i in (m..=high).rev() {
            ort[i] = h[i][m - 1] / scale;
            hh += ort[i] * ort[i];
        }
        let mut g = hh.sqrt();
        if ort[m] > 0.0 {
            g = -g;
        }
        hh -= ort[m] * g;
        ort[m] -= g;
        for j in m..n {
            let mut f = 0.0;
            for i in (m..=high).rev() {
                f += ort[i] * h[i][j];
            }
            f /= hh;
            for i in m..=high {
                h[i][j] -= f * ort[i];
            }
        }
        for row in h.iter_mut().take(high + 1) {
            let mut f = 0.0;
            for j in (m..=high).rev() {
                f += ort[j] * row[j];
            }
            f /= hh;
            for j in m..=high {
                row[j] -= f * ort[j];
            }
        }
        ort[m] *= scale;
        h[m][m - 1] = scale * g;
    }
    for (i, row) in v.iter_mut().enumerate() {
        row.iter_mut().for_each(|x| *x = 0.0);
        row[i] = 1.0;
    }
    for m in (1..high).rev() {
        if h[m][m - 1] == 0.0 {
            continue;
        }
        for i in m + 1..=high {
            ort[i] = h[i][m - 1];
        }
        for j in m..=high {
            let mut g = 0.0;
            for i in m..=high {
                g += ort[i] * v[i][j];
            }
            g = (g / ort[m]) / h[m][m - 1];
            for i in m..=high {
                v[i][j] += g * ort[i];
            }
        }
    }
}

fn cdiv(xr: f64, xi: f64, yr: f64, yi: f64) -> (f64, f64) {
    if yr.abs() > yi.abs() {
        let r = yi / yr;
        let d = yr + r * yi;
        ((xr + r * xi) / d, (xi - r * xr) / d)
    } else {
        let r = yr / yi;
        let d = yi + r * yr;
        ((r * xr + xi) / d, (r * xi - xr) / d)
    }
}

/// Shifted QR on a Hessenberg matrix. On exit `d + i e` are the eigenvalues;
/// a complex pair occupies consecutive slots with `e[j] > 0`, and if vectors
/// are requested, `v[:, j] + i v[:, j + 1]` is the eigenvector of
/// `d[j] + i e[j]`.
#[allow(clippy::many_single_char_names)]
fn hqr2(
    h: &mut [Vec<f64>],
    v: &mut [Vec<f64>],
    d: &mut [f64],
    e: &mut [f64],
    want_vectors: bool,
) -> Result<()> {
    let nn = h.len();
    let mut n = nn as isize - 1;
    let low: isize = 0;
    let high: isize = nn as isize - 1;
    let eps = f64::EPSILON;
    let mut exshift = 0.0;
    let (mut p, mut q, mut r, mut s, mut z) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let (mut t, mut w, mut x, mut y);
    let max_total = 30 * nn.max(1);
    let mut total_iter = 0usize;

    let mut norm = 0.0;
    for i in 0..nn {
        for j in i.saturating_sub(1)..nn {
            norm += h[i][j].abs();
        }
    }

    macro_rules! at {
        ($m:expr, $i:expr, $j:expr) => {
            $m[($i) as usize][($j) as usize]
        };
    }

    let mut iter = 0;
    while n >= low {
        let mut l = n;
        while l > low {
            s = at!(h, l - 1, l - 1).abs() + at!(h, l, l).abs();
            if s == 0.0 {
                s = norm;
            }
            if at!(h, l, l - 1).abs() < eps * s {
                break;
            }
            l -= 1;
        }

        if l == n {
            at!(h, n, n) += exshift;
            d[n as usize] = at!(h, n, n);
            e[n as usize] = 0.0;
            n -= 1;
            iter = 0;
        } else if l == n - 1 {
            w = at!(h, n, n - 1) * at!(h, n - 1, n);
            p = (at!(h, n - 1, n - 1) - at!(h, n, n)) / 2.0;
            q = p * p + w;
            z = q.abs().sqrt();
            at!(h, n, n) += exshift;
            at!(h, n - 1, n - 1) += exshift;
            x = at!(h, n, n);
            if q >= 0.0 {
                z = if p >= 0.0 { p + z } else { p - z };
                d[(n - 1) as usize] = x + z;
                d[n as usize] = d[(n - 1) as usize];
                if z != 0.0 {
                    d[n as usize] = x - w / z;
                }
                e[(n - 1) as usize] = 0.0;
                e[n as usize] = 0.0;
                x = at!(h, n, n - 1);
                s = x.abs() + z.abs();
                p = x / s;
                q = z / s;
                r = (p * p + q * q).sqrt();
                p /= r;
                q /= r;
                for j in (n - 1)..nn as isize {
                    z = at!(h, n - 1, j);
                    at!(h, n - 1, j) = q * z + p * at!(h, n, j);
                    at!(h, n, j) = q * at!(h, n, j) - p * z;
                }
                for i in 0..=n {
                    z = at!(h, i, n - 1);
                    at!(h, i, n - 1) = q * z + p * at!(h, i, n);
                    at!(h, i, n) = q * at!(h, i, n) - p * z;
                }
                for i in low..=high {
                    z = at!(v, i, n - 1);
                    at!(v, i, n - 1) = q * z + p * at!(v, i, n);
                    at!(v, i, n) = q * at!(v, i, n) - p * z;
                }
            } else {
                d[(n - 1) as usize] = x + p;
                d[n as usize] = x + p;
                e[(n - 1) as usize] = z;
                e[n as usize] = -z;
            }
            n -= 2;
            iter = 0;
        } else {
            x = at!(h, n, n);
            y = 0.0;
            w = 0.0;
            if l < n {
                y = at!(h, n - 1, n - 1);
                w = at!(h, n, n - 1) * at!(h, n - 1, n);
            }
            // Exceptional shifts.
            if iter == 10 {
                exshift += x;
                for i in low..=n {
                    at!(h, i, i) -= x;
                }
                s = at!(h, n, n - 1).abs() + at!(h, n - 1, n - 2).abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            if iter == 30 {
                s = (y - x) / 2.0;
                s = s * s + w;
                if s > 0.0 {
                    s = s.sqrt();
                    if y < x {
                        s = -s;
                    }
                    s = x - w / ((y - x) / 2.0 + s);
                    for i in low..=n {
                        at!(h, i, i) -= s;
                    }
                    exshift += s;
                    x = 0.964;
                    y = x;
                    w = x;
                }
            }
            iter += 1;
            total_iter += 1;
            if total_iter > max_total {
                return Err(Error::NoConvergence {
                    iterations: total_iter,
                });
            }

            let mut m = n - 2;
            while m >= l {
                z = at!(h, m, m);
                r = x - z;
                s = y - z;
                p = (r * s - w) / at!(h, m + 1, m) + at!(h, m, m + 1);
                q = at!(h, m + 1, m + 1) - z - r - s;
                r = at!(h, m + 2, m + 1);
                s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                if at!(h, m, m - 1).abs() * (q.abs() + r.abs())
                    < eps
                        * (p.abs()
                            * (at!(h, m - 1, m - 1).abs() + z.abs() + at!(h, m + 1, m + 1).abs()))
                {
                    break;
                }
                m -= 1;
            }

            for i in (m + 2)..=n {
                at!(h, i, i - 2) = 0.0;
                if i > m + 2 {
                    at!(h, i, i - 3) = 0.0;
                }
            }

            for k in m..n {
                let notlast = k != n - 1;
                if k != m {
                    p = at!(h, k, k - 1);
                    q = at!(h, k + 1, k - 1);
                    r = if notlast { at!(h, k + 2, k - 1) } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x == 0.0 {
                        continue;
                    }
                    p /= x;
                    q /= x;
                    r /= x;
                }
                s = (p * p + q * q + r * r).sqrt();
                if p < 0.0 {
                    s = -s;
                }
                if s != 0.0 {
                    if k != m {
                        at!(h, k, k - 1) = -s * x;
                    } else if l != m {
                        at!(h, k, k - 1) = -at!(h, k, k - 1);
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    z = r / s;
                    q /= p;
                    r /= p;

                    for j in k..nn as isize {
                        p = at!(h, k, j) + q * at!(h, k + 1, j);
                        if notlast {
                            p += r * at!(h, k + 2, j);
                            at!(h, k + 2, j) -= p * z;
                        }
                        at!(h, k, j) -= p * x;
                        at!(h, k + 1, j) -= p * y;
                    }
                    for i in 0..=n.min(k + 3) {
                        p = x * at!(h, i, k) + y * at!(h, i, k + 1);
                        if notlast {
                            p += z * at!(h, i, k + 2);
                            at!(h, i, k + 2) -= p * r;
                        }
                        at!(h, i, k) -= p;
                        at!(h, i, k + 1) -= p * q;
                    }
                    for i in low..=high {
                        p = x * at!(v, i, k) + y * at!(v, i, k + 1);
                        if notlast {
                            p += z * at!(v, i, k + 2);
                            at!(v, i, k + 2) -= p * r;
                        }
                        at!(v, i, k) -= p;
                        at!(v, i, k + 1) -= p * q;
                    }
                }
            }
        }
    }

    if !want_vectors || norm == 0.0 {
        return Ok(());
    }

    // Back-substitute to find vectors of the upper triangular form.
    for n in (0..nn as isize).rev() {
        p = d[n as usize];
        q = e[n as usize];
        if q == 0.0 {
            let mut l = n;
            at!(h, n, n) = 1.0;
            for i in (0..n).rev() {
                w = at!(h, i, i) - p;
                r = 0.0;
                for j in l..=n {
                    r += at!(h, i, j) * at!(h, j, n);
                }
                if e[i as usize] < 0.0 {
                    z = w;
                    s = r;
                } else {
                    l = i;
                    if e[i as usize] == 0.0 {
                        at!(h, i, n) = if w != 0.0 { -r / w } else { -r / (eps * norm) };
                    } else {
                        x = at!(h, i, i + 1);
                        y = at!(h, i + 1, i);
                        q = (d[i as usize] - p) * (d[i as usize] - p)
                            + e[i as usize] * e[i as usize];
                        t = (x * s - z * r) / q;
                        at!(h, i, n) = t;
                        at!(h, i + 1, n) = if x.abs() > z.abs() {
                            (-r - w * t) / x
                        } else {
                            (-s - y * t) / z
                        };
                    }
                    t = at!(h, i, n).abs();
                    if (eps * t) * t > 1.0 {
                        for j in i..=n {
                            at!(h, j, n) /= t;
                        }
                    }
                }
            }
        } else if q < 0.0 {
            let mut l = n - 1;
            if at!(h, n, n - 1).abs() > at!(h, n - 1, n).abs() {
                at!(h, n - 1, n - 1) = q / at!(h, n, n - 1);
                at!(h, n - 1, n) = -(at!(h, n, n) - p) / at!(h, n, n - 1);
            } else {
                let (cr, ci) = cdiv(0.0, -at!(h, n - 1, n), at!(h, n - 1, n - 1) - p, q);
                at!(h, n - 1, n - 1) = cr;
                at!(h, n - 1, n) = ci;
            }
            at!(h, n, n - 1) = 0.0;
            at!(h, n, n) = 1.0;
            for i in (0..n - 1).rev() {
                let mut ra = 0.0;
                let mut sa = 0.0;
                for j in l..=n {
                    ra += at!(h, i, j) * at!(h, j, n - 1);
                    sa += at!(h, i, j) * at!(h, j, n);
                }
                w = at!(h, i, i) - p;
                if e[i as usize] < 0.0 {
                    z = w;
                    r = ra;
                    s = sa;
                } else {
                    l = i;
                    if e[i as usize] == 0.0 {
                        let (cr, ci) = cdiv(-ra, -sa, w, q);
                        at!(h, i, n - 1) = cr;
                        at!(h, i, n) = ci;
                    } else {
                        x = at!(h, i, i + 1);
                        y = at!(h, i + 1, i);
                        let di = d[i as usize] - p;
                        let mut vr = di * di + e[i as usize] * e[i as usize] - q * q;
                        let vi = di * 2.0 * q;
                        if vr == 0.0 && vi == 0.0 {
                            vr = eps * norm * (w.abs() + q.abs() + x.abs() + y.abs() + z.abs());
                        }
                        let (cr, ci) =
                            cdiv(x * r - z * ra + q * sa, x * s - z * sa - q * ra, vr, vi);
                        at!(h, i, n - 1) = cr;
                        at!(h, i, n) = ci;
                        if x.abs() > z.abs() + q.abs() {
                            at!(h, i + 1, n - 1) =
                                (-ra - w * at!(h, i, n - 1) + q * at!(h, i, n)) / x;
                            at!(h, i + 1, n) = (-sa - w * at!(h, i, n) - q * at!(h, i, n - 1)) / x;
                        } else {
                            let (cr, ci) =
                                cdiv(-r - y * at!(h, i, n - 1), -s - y * at!(h, i, n), z, q);
                            at!(h, i + 1, n - 1) = cr;
                            at!(h, i + 1, n) = ci;
                        }
                    }
                    t = at!(h, i, n - 1).abs().max(at!(h, i, n).abs());
                    if (eps * t) * t > 1.0 {
                        for j in i..=n {
                            at!(h, j, n - 1) /= t;
                            at!(h, j, n) /= t;
                        }
                    }
                }
            }
        }
    }

    // Back-transform to eigenvectors of the original matrix.
    for j in (0..nn).rev() {
        for i in 0..nn {
            let mut acc = 0.0;
            for k in 0..=j {
                acc += v[i][k] * h[k][j];
            }
            v[i][j] = acc;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted_by_re_im(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn diagonal_spectrum() {
        let m = DenseMatrix::diag(&[3.0, 1.0, -2.0]);
        let vals = sorted_by_re_im(dense_spectrum(&m, false).unwrap().values);
        let want = [-2.0, 1.0, 3.0];
        for (v, w) in vals.iter().zip(want) {
            assert!((v - w).norm() < 1e-12);
        }
    }

    #[test]
    fn rotation_has_imaginary_pair() {
        let m = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![-1.0, 0.0]]);
        let vals = sorted_by_re_im(dense_spectrum(&m, false).unwrap().values);
        assert!((vals[0] - Complex64::new(0.0, -1.0)).norm() < 1e-12);
        assert!((vals[1] - Complex64::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn companion_matrix_roots_of_unity() {
        // z^3 - 1
        let m = DenseMatrix::from_rows(&[
            vec![0.0, 0.0, 1.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
        ]);
        let vals = dense_spectrum(&m, false).unwrap().values;
        for k in 0..3 {
            let root = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / 3.0);
            assert!(vals.iter().any(|v| (v - root).norm() < 1e-10));
        }
    }

    #[test]
    fn eigenvectors_satisfy_equation() {
        let rows: Vec<Vec<f64>> = (0..9)
            .map(|i| {
                (0..9)
                    .map(|j| (((i * 7 + j * 3) % 11) as f64 - 5.0) / 3.0)
                    .collect()
            })
            .collect();
        let m = DenseMatrix::from_rows(&rows);
        let eig = dense_spectrum(&m, true).unwrap();
        let vecs = eig.vectors.unwrap();
        for (lam, x) in eig.values.iter().zip(&vecs) {
            let mut worst: f64 = 0.0;
            for i in 0..9 {
                let mx: Complex64 = (0..9).map(|j| x[j] * m[(i, j)]).sum();
                worst = worst.max((mx - lam * x[i]).norm());
            }
            assert!(worst < 1e-10, "residual {worst} for {lam}");
        }
    }

    #[test]
    fn jacobi_reconstructs() {
        let a = DenseMatrix::from_rows(&[
            vec![4.0, 1.0, 0.5],
            vec![1.0, 3.0, -1.0],
            vec![0.5, -1.0, 2.0],
        ]);
        let (vals, v) = symmetric_eigen(&a);
        let rebuilt = v.matmul(&DenseMatrix::diag(&vals)).matmul(&v.transpose());
        assert!(rebuilt.sub(&a).max_abs() < 1e-12);
        assert!((spectral_norm(&DenseMatrix::diag(&[-3.0, 2.0])) - 3.0).abs() < 1e-12);
    }
}
