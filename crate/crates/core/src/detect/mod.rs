//! Spectral reconstruction from the leading eigenvectors of the reduced
//! non-backtracking operator.

mod kmeans;
mod overlap;

pub use kmeans::{kmeans, KMeansOptions, KMeansResult};
pub use overlap::{best_matching_hits, overlap};

use num_complex::Complex64;
use rand::Rng as _;
use serde::Serialize;

use crate::eigen::{
    is_trivial, leading_outliers, topk, ArnoldiOptions, EigenReport, DEFAULT_MARGIN,
};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::ihara::ReducedOperator;
use crate::model::Labels;
use crate::rng::rng_from_seed;
use crate::signal::SignalSpectrum;

/// Imaginary parts up to this fraction of the real part are dropped.
const REAL_TOL: f64 = 1e-6;

/// Default truncation threshold for the randomized rounding of Algorithm 1.
pub const DEFAULT_K: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Partition {
    pub assignment: Vec<usize>,
    pub k: usize,
}

impl Partition {
    pub fn zeros(n: usize) -> Self {
        Partition {
            assignment: vec![0; n],
            k: 1,
        }
    }
}

/// Vertex coordinates taken from eigenvectors of the reduced operator.
#[derive(Debug, Clone, Default)]
pub struct Embedding {
    /// Each column has squared norm `n`.
    pub columns: Vec<Vec<f64>>,
    pub eigenvalues: Vec<Complex64>,
    /// Position of each column's eigenpair in the eigen report.
    pub source: Vec<usize>,
}

impl Embedding {
    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    /// One row per vertex.
    pub fn points(&self) -> Vec<Vec<f64>> {
        let n = self.columns.first().map_or(0, Vec::len);
        (0..n)
            .map(|v| self.columns.iter().map(|c| c[v]).collect())
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectOptions {
    /// Relative margin added to the bulk radius when selecting outliers.
    pub margin: f64,
    pub arnoldi: ArnoldiOptions,
    pub kmeans: KMeansOptions,
    /// Initial number of eigenpairs requested; doubled until the bulk is reached.
    pub k_start: usize,
    pub k_max: usize,
    /// Keep the Perron eigenvector as an embedding coordinate.
    pub include_perron: bool,
}

impl Default for DetectOptions {
    fn default() -> Self {
        DetectOptions {
            margin: DEFAULT_MARGIN,
            arnoldi: ArnoldiOptions::default(),
            kmeans: KMeansOptions::default(),
            k_start: 8,
            k_max: 64,
            include_perron: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Detection {
    pub partition: Partition,
    pub embedding: Embedding,
    pub report: EigenReport,
    /// No informative eigenvalue besides the Perron one was found.
    pub below_threshold: bool,
}

/// Vertex block of an eigenvector of the reduced operator, rotated to be as
/// real as possible and scaled to squared norm `n`. `None` when the imaginary
/// part cannot be neglected.
pub fn vertex_coordinates(vector: &[Complex64], n: usize) -> Option<Vec<f64>> {
    let tail = &vector[vector.len() - n..];
    let pivot = tail
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))?;
    if pivot.norm() == 0.0 {
        return None;
    }
    let phase = pivot.conj() / pivot.norm();
    let rotated: Vec<Complex64> = tail.iter().map(|z| z * phase).collect();
    let re: f64 = rotated.iter().map(|z| z.re * z.re).sum::<f64>().sqrt();
    let im: f64 = rotated.iter().map(|z| z.im * z.im).sum::<f64>().sqrt();
    if im > REAL_TOL * re {
        return None;
    }
    let scale = (n as f64).sqrt() / re;
    Some(rotated.iter().map(|z| z.re * scale).collect())
}

fn reduced_spectrum(g: &Hypergraph, opts: &DetectOptions) -> Result<(EigenReport, Vec<usize>)> {
    let op = ReducedOperator::new(g);
    let d = op.mean_degree();
    let k_start = opts.k_start.min(2 * g.n());
    let report = leading_outliers(
        &op,
        g.q(),
        d,
        opts.margin,
        k_start,
        opts.k_max,
        &opts.arnoldi,
    )?;
    let informative = report.informative.clone();
    Ok((report, informative))
}

/// Algorithm 2: embed vertices with the eigenvectors outside the bulk and
/// cluster them into `k_hint` groups, or as many groups as there are
/// informative eigenvalues.
pub fn detect_alg2(
    g: &Hypergraph,
    k_hint: Option<usize>,
    opts: &DetectOptions,
) -> Result<Detection> {
    let n = g.n();
    if n == 0 {
        return Err(Error::InvalidArgument("empty hypergraph".into()));
    }
    if k_hint == Some(0) {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    if g.m() == 0 {
        return Ok(Detection {
            partition: Partition::zeros(n),
            embedding: Embedding::default(),
            report: EigenReport::default(),
            below_threshold: true,
        });
    }
    let (report, informative) = reduced_spectrum(g, opts)?;
    if informative.len() <= 1 {
        return Ok(Detection {
            partition: Partition::zeros(n),
            embedding: Embedding::default(),
            report,
            below_threshold: true,
        });
    }
    let mut emb = Embedding::default();
    for (rank, &idx) in informative.iter().enumerate() {
        if rank == 0 && !opts.include_perron {
            continue;
        }
        match vertex_coordinates(&report.vectors[idx], n) {
            Some(x) => {
                emb.columns.push(x);
                emb.eigenvalues.push(report.ritz_values[idx]);
                emb.source.push(idx);
            }
            None => log::warn!(
                "dropping complex eigenvector for eigenvalue {} from the embedding",
                report.ritz_values[idx]
            ),
        }
    }
    let k = k_hint.unwrap_or(informative.len()).min(n);
    if emb.columns.is_empty() {
        return Ok(Detection {
            partition: Partition::zeros(n),
            embedding: emb,
            report,
            below_threshold: true,
        });
    }
    let km = kmeans(&emb.points(), k, &opts.kmeans)?;
    if km.degenerate {
        log::warn!("k-means left at least one of {k} clusters empty");
    }
    Ok(Detection {
        partition: Partition {
            assignment: km.assignment,
            k,
        },
        embedding: emb,
        report,
        below_threshold: false,
    })
}

#[derive(Debug, Clone)]
pub struct Alg1Output {
    pub partition: Partition,
    /// Vertex coordinates of the second eigenvector, squared norm `n`.
    pub x: Vec<f64>,
    pub lambda: Complex64,
}

/// Probability of putting a vertex with coordinate `x` in the first block.
pub fn rounding_probability(x: f64, k: f64) -> f64 {
    if x.abs() <= k {
        0.5 + x / (2.0 * k)
    } else {
        0.5
    }
}

/// Randomized two-block rounding of `x` with truncation threshold `k`.
pub fn round_two_blocks(x: &[f64], k: f64, seed: u64) -> Result<Partition> {
    if !(k > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "threshold K must be positive, got {k}"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let assignment = x
        .iter()
        .map(|&xv| usize::from(rng.random::<f64>() >= rounding_probability(xv, k)))
        .collect();
    Ok(Partition { assignment, k: 2 })
}

/// Algorithm 1: randomized rounding of the eigenvector of the second
/// largest nontrivial eigenvalue.
pub fn detect_alg1(g: &Hypergraph, k: f64, seed: u64, opts: &ArnoldiOptions) -> Result<Alg1Output> {
    if !(k > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "threshold K must be positive, got {k}"
        )));
    }
    let n = g.n();
    if g.m() == 0 {
        return Err(Error::InvalidArgument("hypergraph has no edges".into()));
    }
    let op = ReducedOperator::new(g);
    let report = topk(&op, 8.min(2 * n), opts)?;
    let idx = (0..report.ritz_values.len())
        .filter(|&i| !is_trivial(report.ritz_values[i], g.q()))
        .nth(1)
        .ok_or_else(|| Error::InvalidArgument("fewer than two nontrivial eigenvalues".into()))?;
    let lambda = report.ritz_values[idx];
    let x = match vertex_coordinates(&report.vectors[idx], n) {
        Some(x) => x,
        None => {
            log::warn!("second eigenvalue {lambda} is complex; rounding its real part");
            let tail = &report.vectors[idx][n..];
            let norm = tail
                .iter()
                .map(|z| z.re * z.re)
                .sum::<f64>()
                .sqrt()
                .max(f64::MIN_POSITIVE);
            tail.iter()
                .map(|z| z.re * (n as f64).sqrt() / norm)
                .collect()
        }
    };
    let partition = round_two_blocks(&x, k, seed)?;
    Ok(Alg1Output {
        partition,
        x,
        lambda,
    })
}

/// Overlap of the unit vertex block of the `i`-th informative eigenvector in
/// `report` with the lifted eigenspace of `mu_i`, next to its predicted value.
pub fn eigenspace_overlap(
    report: &EigenReport,
    spec: &SignalSpectrum,
    labels: &Labels,
    i: usize,
) -> Result<(f64, f64)> {
    let predicted = spec.theoretical_overlap(i)?;
    let idx = *report.informative.get(i).ok_or_else(|| {
        Error::InvalidArgument(format!(
            "only {} informative eigenvalues found, index {i} requested",
            report.informative.len()
        ))
    })?;
    let n = labels.n();
    let v = &report.vectors[idx];
    let tail = &v[v.len() - n..];
    let unorm = tail.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for k in spec.eigenspace(i, 1e-9) {
        let mut w: Vec<f64> = labels.sigma.iter().map(|&s| spec.phi[k][s]).collect();
        for b in &basis {
            let c: f64 = w.iter().zip(b).map(|(x, y)| x * y).sum();
            w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-9 * (n as f64).sqrt() {
            w.iter_mut().for_each(|x| *x /= norm);
            basis.push(w);
        }
    }
    let measured = basis
        .iter()
        .map(|b| {
            let c: Complex64 = tail.iter().zip(b).map(|(z, x)| z.conj() * x).sum();
            c.norm_sqr()
        })
        .sum::<f64>()
        .sqrt()
        / unorm;
    Ok((measured, predicted))
}

/// Computes the spectrum of the reduced operator of `g` and compares the
/// `i`-th informative eigenvector with the lifted eigenspace of `mu_i`.
pub fn empirical_overlap_vs_theory(
    g: &Hypergraph,
    spec: &SignalSpectrum,
    labels: &Labels,
    i: usize,
    opts: &DetectOptions,
) -> Result<(f64, f64)> {
    if i >= spec.r0 {
        return Err(Error::NotInformative {
            index: i,
            tau: spec.tau.get(i).copied().unwrap_or(f64::NAN),
        });
    }
    let (report, _) = reduced_spectrum(g, opts)?;
    eigenspace_overlap(&report, spec, labels, i)
}
