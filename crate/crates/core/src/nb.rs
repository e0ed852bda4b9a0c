//! The non-backtracking operator `B` on oriented hyperedges, the edge
//! reversal `P`, the start/terminal matrices `S`, `T`, their exact algebraic
//! identities, lifted block vectors and pseudo-eigenvectors.

use rand::Rng as _;

use crate::eigen::dense::spectral_norm;
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::model::Labels;
use crate::rng::rng_from_seed;
use crate::signal::SignalSpectrum;
use crate::sparse::{CsrMatrix, DenseMatrix, MatVec};

/// `B_{(u->e),(v->f)} = 1` iff `v in e \ {u}`, `f != e` and `v in f`.
#[derive(Debug, Clone)]
pub struct NBOperator {
    q: usize,
    forward: CsrMatrix<f64>,
    adjoint: CsrMatrix<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Adjoint,
}

/// Per-row column lists of `B`.
fn b_pattern(g: &Hypergraph) -> Vec<Vec<usize>> {
    let q = g.q();
    (0..g.oriented_count())
        .map(|id| {
            let (u, e) = g.oriented_pair(id);
            let mut cols = Vec::new();
            for &v in g.edge(e) {
                if v == u {
                    continue;
                }
                cols.extend(
                    g.incident_oriented(v)
                        .iter()
                        .copied()
                        .filter(|&c| c / q != e),
                );
            }
            cols
        })
        .collect()
}

pub fn build_b_integer(g: &Hypergraph) -> CsrMatrix<i64> {
    CsrMatrix::from_pattern_rows(g.oriented_count(), &b_pattern(g), 1)
}

/// `P_{(u->e),(v->f)} = 1{e = f, u != v}`.
pub fn build_p(g: &Hypergraph) -> CsrMatrix<i64> {
    let q = g.q();
    let rows: Vec<Vec<usize>> = (0..g.oriented_count())
        .map(|id| {
            let base = id / q * q;
            (base..base + q).filter(|&c| c != id).collect()
        })
        .collect();
    CsrMatrix::from_pattern_rows(g.oriented_count(), &rows, 1)
}

/// `S_{i,(j->e)} = 1{i = j}`, an `n x qm` matrix.
pub fn build_s(g: &Hypergraph) -> CsrMatrix<i64> {
    let rows: Vec<Vec<usize>> = (0..g.n())
        .map(|v| g.incident_oriented(v).to_vec())
        .collect();
    CsrMatrix::from_pattern_rows(g.oriented_count(), &rows, 1)
}

/// `T_{i,(j->e)} = 1{i in e, i != j}`, an `n x qm` matrix.
pub fn build_t(g: &Hypergraph) -> CsrMatrix<i64> {
    let q = g.q();
    let rows: Vec<Vec<usize>> = (0..g.n())
        .map(|v| {
            g.incident_oriented(v)
                .iter()
                .flat_map(|&id| {
                    let base = id / q * q;
                    (base..base + q).filter(move |&c| c != id)
                })
                .collect()
        })
        .collect();
    CsrMatrix::from_pattern_rows(g.oriented_count(), &rows, 1)
}

impl NBOperator {
    pub fn new(g: &Hypergraph) -> Self {
        let forward = CsrMatrix::from_pattern_rows(g.oriented_count(), &b_pattern(g), 1.0);
        let adjoint = forward.transpose();
        NBOperator {
            q: g.q(),
            forward,
            adjoint,
        }
    }

    pub fn dim(&self) -> usize {
        self.forward.rows()
    }

    pub fn nnz(&self) -> usize {
        self.forward.nnz()
    }

    pub fn matrix(&self) -> &CsrMatrix<f64> {
        &self.forward
    }

    pub fn adjoint_matrix(&self) -> &CsrMatrix<f64> {
        &self.adjoint
    }

    /// `B^ell x` or `(B*)^ell x`, applied one step at a time.
    pub fn apply_pow(&self, x: &[f64], ell: usize, dir: Direction) -> Vec<f64> {
        self.apply_pow_scaled(x, ell, dir, 1.0)
    }

    /// `(B / scale)^ell x` or its adjoint counterpart.
    pub fn apply_pow_scaled(&self, x: &[f64], ell: usize, dir: Direction, scale: f64) -> Vec<f64> {
        let m = match dir {
            Direction::Forward => &self.forward,
            Direction::Adjoint => &self.adjoint,
        };
        let mut cur = x.to_vec();
        let mut next = vec![0.0; cur.len()];
        for _ in 0..ell {
            m.mul_vec_into(&cur, &mut next);
            if scale != 1.0 {
                next.iter_mut().for_each(|v| *v /= scale);
            }
            std::mem::swap(&mut cur, &mut next);
        }
        cur
    }

    /// `P x` with `(P x)(u->e) = sum_{v in e, v != u} x(v->e)`.
    pub fn apply_p(&self, x: &[f64]) -> Vec<f64> {
        let q = self.q;
        let mut out = vec![0.0; x.len()];
        for (chunk, o) in x.chunks_exact(q).zip(out.chunks_exact_mut(q)) {
            let s: f64 = chunk.iter().sum();
            for (oi, xi) in o.iter_mut().zip(chunk) {
                *oi = s - xi;
            }
        }
        out
    }
}

impl MatVec for NBOperator {
    fn dim(&self) -> usize {
        self.forward.rows()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.forward.mul_vec_into(x, y);
    }
}

/// `B^ell x` or `(B*)^ell x`.
pub fn nb_apply(op: &NBOperator, x: &[f64], ell: usize, dir: Direction) -> Vec<f64> {
    op.apply_pow(x, ell, dir)
}

/// Maximum absolute deviation of each identity, computed exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub deviations: Vec<(String, i128)>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.deviations.iter().all(|(_, d)| *d == 0)
    }

    pub fn worst(&self) -> Option<&(String, i128)> {
        self.deviations.iter().max_by_key(|(_, d)| *d)
    }
}

fn max_abs_diff(a: &CsrMatrix<i64>, b: &CsrMatrix<i64>) -> i128 {
    let d = a.linear_combination(1, b, -1);
    (0..d.rows())
        .flat_map(|i| d.row(i).map(|(_, v)| (v as i128).abs()).collect::<Vec<_>>())
        .max()
        .unwrap_or(0)
}

/// Evaluates, in integer arithmetic:
/// `P^2 = (q-2)P + (q-1)I`, `SS* = D`, `TT* = (q-2)A + (q-1)D`, `ST* = A`,
/// `SP = T`, `T*S = B + P`, and `B^k P x = P (B*)^k x` for `k = 1..=k_max` on
/// `probes` random integer vectors.
pub fn identity_deviations(
    g: &Hypergraph,
    k_max: usize,
    probes: usize,
    seed: u64,
) -> IdentityReport {
    let q = g.q() as i64;
    let qm = g.oriented_count();
    let b = build_b_integer(g);
    let p = build_p(g);
    let s = build_s(g);
    let t = build_t(g);
    let a = g.adjacency_matrix();
    let d = g.degree_matrix();
    let st = s.transpose();
    let tt = t.transpose();
    let id_e = CsrMatrix::identity(qm, 1i64);

    let mut dev = Vec::new();
    dev.push((
        "P^2 = (q-2)P + (q-1)I".to_string(),
        max_abs_diff(&p.matmul(&p), &p.linear_combination(q - 2, &id_e, q - 1)),
    ));
    dev.push(("SS* = D".to_string(), max_abs_diff(&s.matmul(&st), &d)));
    dev.push((
        "TT* = (q-2)A + (q-1)D".to_string(),
        max_abs_diff(&t.matmul(&tt), &a.linear_combination(q - 2, &d, q - 1)),
    ));
    dev.push(("ST* = A".to_string(), max_abs_diff(&s.matmul(&tt), &a)));
    dev.push(("SP = T".to_string(), max_abs_diff(&s.matmul(&p), &t)));
    dev.push((
        "T*S = B + P".to_string(),
        max_abs_diff(&tt.matmul(&s), &b.linear_combination(1, &p, 1)),
    ));

    let b128 = b.map(|v| v as i128);
    let bt128 = b.transpose().map(|v| v as i128);
    let p128 = p.map(|v| v as i128);
    let mut rng = rng_from_seed(seed);
    let mut worst = vec![0i128; k_max];
    for _ in 0..probes {
        let x: Vec<i128> = (0..qm).map(|_| rng.random_range(-5i128..=5)).collect();
        let mut lhs = p128.mul_vec(&x);
        let mut rhs = x.clone();
        for w in worst.iter_mut() {
            lhs = b128.mul_vec(&lhs);
            rhs = bt128.mul_vec(&rhs);
            let prhs = p128.mul_vec(&rhs);
            let m = lhs
                .iter()
                .zip(&prhs)
                .map(|(l, r)| (l - r).abs())
                .max()
                .unwrap_or(0);
            *w = (*w).max(m);
        }
    }
    for (k, w) in worst.into_iter().enumerate() {
        dev.push((format!("B^{} P = P (B*)^{}", k + 1, k + 1), w));
    }
    IdentityReport { deviations: dev }
}

/// Like [`identity_deviations`] but fails on the first nonzero deviation.
pub fn verify_identities(
    g: &Hypergraph,
    k_max: usize,
    probes: usize,
    seed: u64,
) -> Result<IdentityReport> {
    if k_max > 8 {
        return Err(Error::InvalidArgument(format!("k_max = {k_max} exceeds 8")));
    }
    let rep = identity_deviations(g, k_max, probes, seed);
    if let Some((name, d)) = rep.deviations.iter().find(|(_, d)| *d != 0) {
        return Err(Error::IdentityViolation {
            name: name.clone(),
            deviation: *d as f64,
        });
    }
    Ok(rep)
}

/// `chi(v->e) = phi(sigma(v))`.
pub fn lift_chi(phi: &[f64], labels: &Labels, g: &Hypergraph) -> Vec<f64> {
    (0..g.oriented_count())
        .map(|id| phi[labels.sigma[g.oriented_vertex(id)]])
        .collect()
}

/// `lift(phi)(v) = phi(sigma(v))` on vertices.
pub fn lift_vertices(phi: &[f64], labels: &Labels) -> Vec<f64> {
    labels.sigma.iter().map(|&s| phi[s]).collect()
}

/// Default power for pseudo-eigenvectors: `max(1, floor(ln n / (2 ln((q-1) d))))`,
/// so that `((q-1) d)^ell` is about `sqrt(n)`.
pub fn default_ell(n: usize, q: usize, d: f64) -> usize {
    let base = ((q - 1) as f64 * d).ln();
    if !(base > 0.0) {
        return 1;
    }
    ((n as f64).ln() / (2.0 * base)).floor().max(1.0) as usize
}

/// Pseudo-eigenvectors for the informative indices `0..r0`, as columns:
/// `u_i = B^ell P chi_i / ([(q-1) mu_i]^(ell+1) sqrt n)` and
/// `v_i = (B*)^ell chi_i / ([(q-1) mu_i]^ell sqrt n)`.
pub fn pseudo_eigenvectors(
    g: &Hypergraph,
    op: &NBOperator,
    spec: &SignalSpectrum,
    labels: &Labels,
    ell: usize,
) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    if spec.r0 == 0 {
        return Err(Error::InvalidArgument("no informative eigenvalues".into()));
    }
    if ell == 0 {
        return Err(Error::InvalidArgument("ell must be at least 1".into()));
    }
    let sqrt_n = (g.n() as f64).sqrt();
    let mut us = Vec::with_capacity(spec.r0);
    let mut vs = Vec::with_capacity(spec.r0);
    for i in 0..spec.r0 {
        let scale = (spec.q - 1) as f64 * spec.mu[i];
        let chi = lift_chi(&spec.phi[i], labels, g);
        let pchi: Vec<f64> = op.apply_p(&chi).into_iter().map(|x| x / scale).collect();
        let mut u = op.apply_pow_scaled(&pchi, ell, Direction::Forward, scale);
        let mut v = op.apply_pow_scaled(&chi, ell, Direction::Adjoint, scale);
        u.iter_mut().for_each(|x| *x /= sqrt_n);
        v.iter_mut().for_each(|x| *x /= sqrt_n);
        us.push(u);
        vs.push(v);
    }
    Ok((us, vs))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn gram(a: &[Vec<f64>], b: &[Vec<f64>]) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(a.len(), b.len());
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            m[(i, j)] = dot(x, y);
        }
    }
    m
}

/// Spectral-norm deviations of the pseudo-eigenvector Gram matrices from
/// their predicted values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GramDiagnostics {
    /// `|U*U - diag(gamma_{i,U})|`.
    pub uu: f64,
    /// `|V*V - diag(d gamma_i)|`.
    pub vv: f64,
    /// `|U*V - I|`.
    pub uv: f64,
    /// `|V* B^ell U - Sigma^ell|`, `Sigma = diag((q-1) mu_i)`.
    pub vbu: f64,
}

impl GramDiagnostics {
    pub fn as_array(&self) -> [f64; 4] {
        [self.uu, self.vv, self.uv, self.vbu]
    }
}

/// Gram matrices `U*U`, `V*V`, `U*V`, `V* B^ell U` and their deviations.
pub fn gram_diagnostics(
    u: &[Vec<f64>],
    v: &[Vec<f64>],
    op: &NBOperator,
    ell: usize,
    spec: &SignalSpectrum,
) -> Result<(GramDiagnostics, DenseMatrix)> {
    let k = u.len();
    let mut g_u = Vec::with_capacity(k);
    let mut g_v = Vec::with_capacity(k);
    let mut sig = Vec::with_capacity(k);
    for i in 0..k {
        let (g, gu) = spec.gamma_ell(i, ell)?;
        g_u.push(gu);
        g_v.push(spec.d * g);
        sig.push(((spec.q - 1) as f64 * spec.mu[i]).powi(ell as i32));
    }
    let uu = gram(u, u).sub(&DenseMatrix::diag(&g_u));
    let vv = gram(v, v).sub(&DenseMatrix::diag(&g_v));
    let uv_raw = gram(u, v);
    let uv = uv_raw.sub(&DenseMatrix::identity(k));
    let bu: Vec<Vec<f64>> = u
        .iter()
        .map(|x| op.apply_pow(x, ell, Direction::Forward))
        .collect();
    let vbu = gram(v, &bu).sub(&DenseMatrix::diag(&sig));
    Ok((
        GramDiagnostics {
            uu: spectral_norm(&uu),
            vv: spectral_norm(&vv),
            uv: spectral_norm(&uv),
            vbu: spectral_norm(&vbu),
        },
        uv_raw,
    ))
}
