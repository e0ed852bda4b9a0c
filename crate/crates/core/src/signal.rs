//! Deterministic quantities derived from the model parameters: the two-type
//! degree matrix, the signal matrix `Q` and its spectrum, detectability
//! ratios, the gamma constants and the GW second-moment vectors.
//!
//! Indices `i` in this module are 0-based; `i = 0` is the Perron pair
//! `(d, 1)`.

use std::io::Write;

use serde::Serialize;

use crate::eigen::dense::symmetric_eigen;
use crate::error::{Error, Result};
use crate::model::{validate_params, ModelParams};
use crate::sparse::DenseMatrix;

/// `D2_ij = sum_{k in [r]^{q-2}} p(i, j, k) prod pi_k`.
pub fn two_type_matrix(params: &ModelParams) -> DenseMatrix {
    let r = params.r();
    let q = params.q();
    let mut d2 = DenseMatrix::zeros(r, r);
    for i in 0..r {
        for j in i..r {
            let v = params.tensor.contract(&params.pi, &[i, j], q - 2);
            d2[(i, j)] = v;
            d2[(j, i)] = v;
        }
    }
    d2
}

/// `Q3_ijk = pi_j pi_k sum_{l in [r]^{q-3}} p(i, j, k, l) prod pi_l`,
/// stored as `q3[i][j][k]`. Zero for `q = 2`.
pub fn q3_tensor(params: &ModelParams) -> Vec<Vec<Vec<f64>>> {
    let r = params.r();
    let q = params.q();
    let mut out = vec![vec![vec![0.0; r]; r]; r];
    if q < 3 {
        return out;
    }
    let pi = &params.pi;
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                out[i][j][k] = pi[j] * pi[k] * params.tensor.contract(pi, &[i, j, k], q - 3);
            }
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct SignalSpectrum {
    pub q: usize,
    pub d: f64,
    pub pi: Vec<f64>,
    /// Eigenvalues of `Q`, by decreasing modulus, ties by decreasing value.
    pub mu: Vec<f64>,
    /// `phi[i]` is the eigenvector of `mu[i]`, orthonormal in the
    /// `pi`-weighted inner product.
    pub phi: Vec<Vec<f64>>,
    /// `tau_i = d / ((q - 1) mu_i^2)`.
    pub tau: Vec<f64>,
    /// Number of eigenvalues with `(q - 1) mu_i^2 > d`.
    pub r0: usize,
    /// `(q - 1) mu_i^2 - d`.
    pub ks_margin: Vec<f64>,
    #[serde(skip)]
    pub q_matrix: DenseMatrix,
    #[serde(skip)]
    pub q3: Vec<Vec<Vec<f64>>>,
}

/// Eigen-decomposes the signal matrix `Q = D2 Pi` through the symmetric
/// `S = Pi^{1/2} D2 Pi^{1/2}`; `phi = Pi^{-1/2} psi`.
pub fn signal_spectrum(params: &ModelParams) -> Result<SignalSpectrum> {
    if params.tensor.entries().any(|(_, v)| !v.is_finite()) {
        return Err(Error::InvalidParams("tensor has non-finite entries".into()));
    }
    let d = validate_params(params)?;
    let r = params.r();
    let q = params.q();
    let pi = params.pi.clone();
    let d2 = two_type_matrix(params);
    let sq: Vec<f64> = pi.iter().map(|p| p.sqrt()).collect();
    let mut s = DenseMatrix::zeros(r, r);
    let mut qm = DenseMatrix::zeros(r, r);
    for i in 0..r {
        for j in 0..r {
            s[(i, j)] = sq[i] * d2[(i, j)] * sq[j];
            qm[(i, j)] = d2[(i, j)] * pi[j];
        }
    }
    let (vals, vecs) = symmetric_eigen(&s);
    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by(|&a, &b| {
        vals[b]
            .abs()
            .total_cmp(&vals[a].abs())
            .then(vals[b].total_cmp(&vals[a]))
    });
    let mut mu = Vec::with_capacity(r);
    let mut phi = Vec::with_capacity(r);
    for &k in &order {
        let mut f: Vec<f64> = (0..r).map(|i| vecs[(i, k)] / sq[i]).collect();
        if let Some(first) = f.iter().find(|x| x.abs() > 1e-12) {
            if *first < 0.0 {
                f.iter_mut().for_each(|x| *x = -*x);
            }
        }
        mu.push(vals[k]);
        phi.push(f);
    }
    let tau: Vec<f64> = mu.iter().map(|&m| d / ((q - 1) as f64 * m * m)).collect();
    let ks_margin: Vec<f64> = mu.iter().map(|&m| (q - 1) as f64 * m * m - d).collect();
    let r0 = ks_margin.iter().filter(|&&k| k > 0.0).count();
    Ok(SignalSpectrum {
        q,
        d,
        pi,
        mu,
        phi,
        tau,
        r0,
        ks_margin,
        q_matrix: qm,
        q3: q3_tensor(params),
    })
}

impl SignalSpectrum {
    pub fn r(&self) -> usize {
        self.mu.len()
    }

    pub fn is_informative(&self, i: usize) -> bool {
        self.ks_margin.get(i).is_some_and(|&k| k > 0.0)
    }

    /// `<x, y>_pi`.
    pub fn pi_dot(&self, x: &[f64], y: &[f64]) -> f64 {
        self.pi
            .iter()
            .zip(x)
            .zip(y)
            .map(|((p, a), b)| p * a * b)
            .sum()
    }

    /// `Q x`.
    pub fn apply_q(&self, x: &[f64]) -> Vec<f64> {
        let r = self.r();
        (0..r)
            .map(|i| (0..r).map(|j| self.q_matrix[(i, j)] * x[j]).sum())
            .collect()
    }

    /// `Q3 (x (x) y)`, i.e. `sum_jk Q3_ijk x_j y_k`.
    pub fn apply_q3(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        self.q3
            .iter()
            .map(|m| {
                m.iter()
                    .zip(x)
                    .map(|(row, xj)| xj * row.iter().zip(y).map(|(a, b)| a * b).sum::<f64>())
                    .sum()
            })
            .collect()
    }

    /// `y = Q (a o b) + (q - 2) Q3 (a (x) b)`.
    pub fn y_of(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        let had: Vec<f64> = a.iter().zip(b).map(|(x, y)| x * y).collect();
        let mut y = self.apply_q(&had);
        if self.q > 2 {
            let t = self.apply_q3(a, b);
            let c = (self.q - 2) as f64;
            y.iter_mut().zip(t).for_each(|(yi, ti)| *yi += c * ti);
        }
        y
    }

    /// `y` for the eigenvector pair `(phi_i, phi_j)`.
    pub fn y_vector(&self, i: usize, j: usize) -> Vec<f64> {
        self.y_of(&self.phi[i], &self.phi[j])
    }

    /// `(gamma_i^(l), gamma_{i,U}^(l))` for an informative index.
    pub fn gamma_ell(&self, i: usize, ell: usize) -> Result<(f64, f64)> {
        if !self.is_informative(i) {
            return Err(Error::NotInformative {
                index: i,
                tau: self.tau.get(i).copied().unwrap_or(f64::NAN),
            });
        }
        let g = gamma(self.q, self.d, self.mu[i], ell).ok_or(Error::SingularGamma { index: i })?;
        let mu = self.mu[i];
        let gu = (self.d * g + (self.q - 2) as f64 * mu) / ((self.q - 1) as f64 * mu * mu);
        Ok((g, gu))
    }

    /// `sqrt((1 - tau_i) / (1 + (q - 2) / ((q - 1) mu_i)))`.
    pub fn theoretical_overlap(&self, i: usize) -> Result<f64> {
        if !self.is_informative(i) {
            return Err(Error::NotInformative {
                index: i,
                tau: self.tau.get(i).copied().unwrap_or(f64::NAN),
            });
        }
        Ok(theoretical_overlap_value(self.q, self.d, self.mu[i]))
    }

    /// Indices whose eigenvalue equals `mu[i]` within `tol` (relative).
    pub fn eigenspace(&self, i: usize, tol: f64) -> Vec<usize> {
        let m = self.mu[i];
        (0..self.r())
            .filter(|&k| (self.mu[k] - m).abs() <= tol * m.abs().max(1.0))
            .collect()
    }

    /// Rows `(i, mu, tau, informative)`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["i", "mu", "tau", "informative"])
            .map_err(csv_err)?;
        for i in 0..self.r() {
            wr.write_record([
                i.to_string(),
                self.mu[i].to_string(),
                self.tau[i].to_string(),
                self.is_informative(i).to_string(),
            ])
            .map_err(csv_err)?;
        }
        wr.flush().map_err(|e| Error::Config(e.to_string()))
    }
}

pub(crate) fn csv_err(e: csv::Error) -> Error {
    Error::Config(format!("csv: {e}"))
}

/// `gamma^(l) = (1 - tau^(l+1))/(1 - tau) + (q-2)/((q-1) mu) (1 - tau^l)/(1 - tau)`.
/// `None` when `tau = 1` or `mu = 0`.
pub fn gamma(q: usize, d: f64, mu: f64, ell: usize) -> Option<f64> {
    if mu == 0.0 {
        return None;
    }
    let tau = d / ((q - 1) as f64 * mu * mu);
    if tau == 1.0 {
        return None;
    }
    let l = ell as i32;
    let a = (1.0 - tau.powi(l + 1)) / (1.0 - tau);
    let b = (q - 2) as f64 / ((q - 1) as f64 * mu) * (1.0 - tau.powi(l)) / (1.0 - tau);
    Some(a + b)
}

pub fn theoretical_overlap_value(q: usize, d: f64, mu: f64) -> f64 {
    let tau = d / ((q - 1) as f64 * mu * mu);
    ((1.0 - tau) / (1.0 + (q - 2) as f64 / ((q - 1) as f64 * mu))).sqrt()
}

/// Expected degree of the symmetric model with uniform proportions.
pub fn symmetric_degree(r: usize, q: usize, c_in: f64, c_out: f64) -> f64 {
    let rq = (r as f64).powi(q as i32 - 1);
    c_in / rq + (1.0 - 1.0 / rq) * c_out
}

/// Second eigenvalue of `Q` for the symmetric model (multiplicity `r - 1`).
pub fn symmetric_mu2(r: usize, q: usize, c_in: f64, c_out: f64) -> f64 {
    (c_in - c_out) / (r as f64).powi(q as i32 - 1)
}

/// Symmetric-model parameters `(c_in, c_out)` with expected degree `d` and
/// `(q - 1) mu_2^2 = (1 + rel_margin) d`.
pub fn symmetric_from_margin(r: usize, q: usize, d: f64, rel_margin: f64) -> Result<(f64, f64)> {
    if rel_margin < -1.0 {
        return Err(Error::InvalidParams(format!(
            "relative margin {rel_margin} < -1"
        )));
    }
    let mu2 = ((1.0 + rel_margin) * d / (q - 1) as f64).sqrt();
    let rq = (r as f64).powi(q as i32 - 1);
    let c_out = d - mu2;
    let c_in = c_out + rq * mu2;
    if c_out < 0.0 {
        return Err(Error::InvalidParams(format!(
            "margin {rel_margin} needs c_out = {c_out} < 0 at d = {d}"
        )));
    }
    Ok((c_in, c_out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n: usize, r: usize, q: usize, cin: f64, cout: f64) -> SignalSpectrum {
        signal_spectrum(&ModelParams::symmetric(n, r, q, cin, cout).unwrap()).unwrap()
    }

    #[test]
    fn two_type_symmetric_r2_q3() {
        let p = ModelParams::symmetric(10, 2, 3, 12.0, 4.0).unwrap();
        let d2 = two_type_matrix(&p);
        assert!((d2[(0, 0)] - 8.0).abs() < 1e-12);
        assert!((d2[(0, 1)] - 4.0).abs() < 1e-12);
    }

    #[test]
    fn two_type_is_tensor_for_q2() {
        let p = ModelParams::symmetric(10, 2, 2, 5.0, 1.0).unwrap();
        let d2 = two_type_matrix(&p);
        assert_eq!(d2[(0, 0)], 5.0);
        assert_eq!(d2[(0, 1)], 1.0);
    }

    #[test]
    fn spectrum_r2_q3() {
        let s = spec(10, 2, 3, 12.0, 4.0);
        assert!((s.mu[0] - 6.0).abs() < 1e-12);
        assert!((s.mu[1] - 2.0).abs() < 1e-12);
        assert!((s.tau[1] - 0.75).abs() < 1e-12);
        assert_eq!(s.r0, 2);
    }

    #[test]
    fn spectrum_figure_one_params() {
        let s = spec(10, 4, 4, 130.0, 2.0);
        assert!((s.d - 4.0).abs() < 1e-12);
        assert!((s.mu[0] - 4.0).abs() < 1e-10);
        for i in 1..4 {
            assert!((s.mu[i] - 2.0).abs() < 1e-10);
        }
        assert_eq!(s.r0, 4);
        assert_eq!(s.eigenspace(1, 1e-8), vec![1, 2, 3]);
        let ov = s.theoretical_overlap(1).unwrap();
        assert!((ov - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn constant_tensor_has_rank_one_signal() {
        let s = spec(10, 3, 3, 6.0, 6.0);
        assert!(s.mu[1].abs() < 1e-10 && s.mu[2].abs() < 1e-10);
        assert_eq!(s.r0, 1);
        assert!(s.theoretical_overlap(1).is_err());
    }

    #[test]
    fn gamma_values() {
        assert_eq!(gamma(4, 4.0, 2.0, 0), Some(1.0));
        let far = gamma(4, 4.0, 2.0, 200).unwrap();
        assert!((far - 2.0).abs() < 1e-12);
        for l in 1..30 {
            let g = gamma(3, 6.0, 2.0, l).unwrap();
            assert!((1.0..=2.0 / 0.25).contains(&g));
        }
    }

    #[test]
    fn q3_pi_contraction_and_y_moments() {
        let s = spec(10, 2, 3, 12.0, 4.0);
        for i in 0..2 {
            for j in 0..2 {
                let t = s.apply_q3(&s.phi[i], &s.phi[j]);
                let v: f64 = s.pi.iter().zip(&t).map(|(p, x)| p * x).sum();
                let want = if i == j { s.mu[i] } else { 0.0 };
                assert!((v - want).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn ks_equivalence_symmetric() {
        for r in 2..4 {
            for q in 2..5 {
                for a in 0..20 {
                    for b in 0..20 {
                        let (cin, cout) = (a as f64 * 3.7, b as f64 * 0.9);
                        let s = spec(50, r, q, cin, cout);
                        let rq = (r as f64).powi(q as i32 - 1);
                        let lhs = (q - 1) as f64 * (cin - cout).powi(2);
                        let rhs = rq * (cin + (rq - 1.0) * cout);
                        if (lhs - rhs).abs() > 1e-6 * rhs.max(1.0) {
                            let mu2 = symmetric_mu2(r, q, cin, cout);
                            let d = symmetric_degree(r, q, cin, cout);
                            assert_eq!((q - 1) as f64 * mu2 * mu2 > d, lhs > rhs);
                            assert_eq!(s.r0 > 1, lhs > rhs, "r={r} q={q} cin={cin} cout={cout}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn margin_parametrisation() {
        let (cin, cout) = symmetric_from_margin(2, 3, 6.0, 1.0).unwrap();
        let mu2 = symmetric_mu2(2, 3, cin, cout);
        assert!((symmetric_degree(2, 3, cin, cout) - 6.0).abs() < 1e-12);
        assert!((2.0 * mu2 * mu2 - 12.0).abs() < 1e-10);
    }
}
