//! Experiment configuration and the command implementations behind the
//! `hynb` binary. Every command is deterministic given its config and seed.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::detect::{
    detect_alg1, detect_alg2, eigenspace_overlap, empirical_overlap_vs_theory, overlap,
    DetectOptions, KMeansOptions, DEFAULT_K,
};
use crate::eigen::{leading_outliers, ArnoldiOptions, DEFAULT_MARGIN};
use crate::error::{Error, Result};
use crate::gw::mc_moments;
use crate::hypergraph::Hypergraph;
use crate::ihara::{IharaBassCheck, ReducedOperator};
use crate::model::{assign_labels, sample, write_assignment, Labels, ModelConfig, ModelParams};
use crate::nb::{
    default_ell, gram_diagnostics, identity_deviations, pseudo_eigenvectors, NBOperator,
};
use crate::rng::{derive_seed, rng_from_seed};
use crate::signal::{csv_err, signal_spectrum, symmetric_from_margin, SignalSpectrum};

/// Exit code for a detection run that found no informative eigenvalue.
pub const EXIT_BELOW_THRESHOLD: u8 = 2;

fn default_seeds() -> Vec<u64> {
    vec![0]
}

fn default_out() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EigenConfig {
    /// Number of eigenpairs requested from the solver.
    pub k: usize,
    pub tol: f64,
    pub max_restarts: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subspace_dim: Option<usize>,
    /// Relative margin over the bulk radius for calling an eigenvalue informative.
    pub margin: f64,
}

impl Default for EigenConfig {
    fn default() -> Self {
        let a = ArnoldiOptions::default();
        EigenConfig {
            k: 10,
            tol: a.tol,
            max_restarts: a.max_restarts,
            subspace_dim: None,
            margin: DEFAULT_MARGIN,
        }
    }
}

impl EigenConfig {
    pub fn arnoldi(&self, seed: u64) -> ArnoldiOptions {
        ArnoldiOptions {
            tol: self.tol,
            max_restarts: self.max_restarts,
            subspace_dim: self.subspace_dim,
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DetectConfig {
    /// 1 for randomized rounding of the second eigenvector, 2 for k-means.
    pub alg: u8,
    /// Number of clusters; defaults to the informative count.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    /// Truncation threshold of the randomized rounding.
    pub rounding_threshold: f64,
    pub include_perron: bool,
    pub kmeans_restarts: usize,
    pub kmeans_iters: usize,
}

impl Default for DetectConfig {
    fn default() -> Self {
        let km = KMeansOptions::default();
        DetectConfig {
            alg: 2,
            k: None,
            rounding_threshold: DEFAULT_K,
            include_perron: true,
            kmeans_restarts: km.restarts,
            kmeans_iters: km.iters,
        }
    }
}

impl DetectConfig {
    pub fn options(&self, eigen: &EigenConfig, seed: u64) -> DetectOptions {
        DetectOptions {
            margin: eigen.margin,
            arnoldi: eigen.arnoldi(seed),
            kmeans: KMeansOptions {
                restarts: self.kmeans_restarts,
                iters: self.kmeans_iters,
                seed,
            },
            k_start: eigen.k.max(2),
            include_perron: self.include_perron,
            ..DetectOptions::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GwConfig {
    pub t_max: usize,
    pub trials: usize,
    /// Acceptance band on |z|.
    pub band: f64,
}

impl Default for GwConfig {
    fn default() -> Self {
        GwConfig {
            t_max: 4,
            trials: 100_000,
            band: 4.0,
        }
    }
}

/// Grid of Kesten-Stigum margins for a symmetric model with the model
/// section's `n`, `r`, `q` and mean degree `d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseConfig {
    pub d: f64,
    /// Relative margins `(q-1) mu_2^2 / d - 1`.
    pub margins: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell: Option<usize>,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default = "default_out")]
    pub out_dir: PathBuf,
    /// Largest relative deviation of `U*V` from the identity accepted by the
    /// gram suite.
    #[serde(default = "default_gram_tol")]
    pub gram_tol: f64,
    pub model: ModelConfig,
    #[serde(default)]
    pub eigen: EigenConfig,
    #[serde(default)]
    pub detect: DetectConfig,
    #[serde(default)]
    pub gw: GwConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase: Option<PhaseConfig>,
}

fn default_gram_tol() -> f64 {
    0.1
}

impl ExperimentConfig {
    pub fn new(model: ModelConfig) -> Self {
        ExperimentConfig {
            ell: None,
            seeds: default_seeds(),
            out_dir: default_out(),
            gram_tol: default_gram_tol(),
            model,
            eigen: EigenConfig::default(),
            detect: DetectConfig::default(),
            gw: GwConfig::default(),
            phase: None,
        }
    }

    pub fn from_toml(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let s = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&s).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_toml()?).map_err(|e| Error::io(path, e))
    }
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Config(e.to_string()))?;
    s.push('\n');
    fs::write(path, s).map_err(|e| Error::io(path, e))
}

fn csv_writer(path: &Path) -> Result<csv::Writer<BufWriter<fs::File>>> {
    let f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::Writer::from_writer(BufWriter::new(f)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenerateSummary {
    pub seed: u64,
    pub n: usize,
    pub q: usize,
    pub m: usize,
    /// `q m / n`.
    pub mean_degree: f64,
    /// Expected degree of the model.
    pub d: f64,
    pub hypergraph: PathBuf,
    pub labels: PathBuf,
}

pub fn hypergraph_path(out_dir: &Path, seed: u64) -> PathBuf {
    out_dir.join(format!("hypergraph-{seed}.txt"))
}

pub fn labels_path(out_dir: &Path, seed: u64) -> PathBuf {
    out_dir.join(format!("labels-{seed}.txt"))
}

/// Samples one instance and writes it with its labels to `out_dir`.
pub fn cmd_generate(model: &ModelConfig, seed: u64, out_dir: &Path) -> Result<GenerateSummary> {
    let params = model.to_params()?;
    let d = crate::model::validate_params(&params)?;
    let labels = assign_labels(&params, model.labels, seed)?;
    let g = sample(&params, &labels, seed)?;
    ensure_dir(out_dir)?;
    let hp = hypergraph_path(out_dir, seed);
    let lp = labels_path(out_dir, seed);
    g.save(&hp)?;
    labels.save(&lp)?;
    Ok(GenerateSummary {
        seed,
        n: g.n(),
        q: g.q(),
        m: g.m(),
        mean_degree: g.mean_degree(),
        d,
        hypergraph: hp,
        labels: lp,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumSummary {
    pub n: usize,
    pub q: usize,
    pub m: usize,
    pub mean_degree: f64,
    pub bulk_radius: f64,
    pub margin: f64,
    pub converged: bool,
    pub eigenvalues: usize,
    pub informative: usize,
    pub restarts: usize,
    pub matvecs: usize,
}

/// One row of the spectrum CSV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumRow {
    pub re: f64,
    pub im: f64,
    pub modulus: f64,
    pub residual: f64,
    pub informative: bool,
}

/// Leading eigenvalues of the reduced operator of `g`, written to
/// `spectrum.csv`, `spectrum.json` and optionally `spectrum.svg`.
pub fn cmd_spectrum(
    g: &Hypergraph,
    eigen: &EigenConfig,
    seed: u64,
    out_dir: &Path,
    svg: bool,
) -> Result<(SpectrumSummary, Vec<SpectrumRow>)> {
    let d = g.mean_degree();
    let radius = crate::eigen::bulk_radius(g.q(), d);
    let report = if g.m() == 0 || g.n() == 0 {
        Default::default()
    } else {
        let op = ReducedOperator::new(g);
        let k = eigen.k.min(2 * g.n());
        leading_outliers(&op, g.q(), d, eigen.margin, k, k, &eigen.arnoldi(seed))?
    };
    let rows: Vec<SpectrumRow> = report
        .ritz_values
        .iter()
        .enumerate()
        .map(|(i, z)| SpectrumRow {
            re: z.re,
            im: z.im,
            modulus: z.norm(),
            residual: report.residuals[i],
            informative: report.informative.contains(&i),
        })
        .collect();
    let summary = SpectrumSummary {
        n: g.n(),
        q: g.q(),
        m: g.m(),
        mean_degree: d,
        bulk_radius: radius,
        margin: eigen.margin,
        converged: report.converged || rows.is_empty(),
        eigenvalues: rows.len(),
        informative: report.informative.len(),
        restarts: report.restarts,
        matvecs: report.matvecs,
    };
    if !summary.converged {
        log::warn!("eigensolver did not converge; spectrum output is partial");
    }
    ensure_dir(out_dir)?;
    let csv_path = out_dir.join("spectrum.csv");
    let mut w = csv_writer(&csv_path)?;
    for r in &rows {
        w.serialize(r).map_err(csv_err)?;
    }
    if rows.is_empty() {
        w.write_record(["re", "im", "modulus", "residual", "informative"])
            .map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::io(&csv_path, e))?;
    write_json(&out_dir.join("spectrum.json"), &summary)?;
    if svg {
        let pts: Vec<(Complex64, bool)> = rows
            .iter()
            .map(|r| (Complex64::new(r.re, r.im), r.informative))
            .collect();
        let path = out_dir.join("spectrum.svg");
        let f = fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
        write_spectrum_svg(BufWriter::new(f), &pts, radius).map_err(|e| Error::io(&path, e))?;
    }
    Ok((summary, rows))
}

/// Scatter of eigenvalues in the complex plane with the bulk circle.
pub fn write_spectrum_svg<W: Write>(
    mut w: W,
    points: &[(Complex64, bool)],
    radius: f64,
) -> std::io::Result<()> {
    let size = 480.0;
    let extent = points
        .iter()
        .map(|(z, _)| z.re.abs().max(z.im.abs()))
        .fold(radius, f64::max)
        .max(1.0)
        * 1.1;
    let scale = size / (2.0 * extent);
    let px = |x: f64| size / 2.0 + x * scale;
    let py = |y: f64| size / 2.0 - y * scale;
    writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    )?;
    writeln!(w, r#"<rect width="100%" height="100%" fill="white"/>"#)?;
    writeln!(
        w,
        r##"<line x1="0" y1="{c}" x2="{size}" y2="{c}" stroke="#bbb"/><line x1="{c}" y1="0" x2="{c}" y2="{size}" stroke="#bbb"/>"##,
        c = size / 2.0
    )?;
    writeln!(
        w,
        r##"<circle cx="{c}" cy="{c}" r="{:.3}" fill="none" stroke="#d33" stroke-dasharray="4 3"/>"##,
        radius * scale,
        c = size / 2.0
    )?;
    for (z, informative) in points {
        let color = if *informative { "#1f4fd1" } else { "#555" };
        writeln!(
            w,
            r#"<circle cx="{:.3}" cy="{:.3}" r="3" fill="{color}"/>"#,
            px(z.re),
            py(z.im)
        )?;
    }
    writeln!(w, "</svg>")?;
    w.flush()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoryPair {
    pub i: usize,
    pub measured: f64,
    pub predicted: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectSummary {
    pub alg: u8,
    pub seed: u64,
    pub n: usize,
    pub k: usize,
    pub below_threshold: bool,
    /// Eigenvalues used for the embedding (or the second eigenvalue for alg 1).
    pub eigenvalues: Vec<[f64; 2]>,
    pub informative: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub overlap: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub theory: Vec<TheoryPair>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    pub partition: PathBuf,
}

/// Runs Algorithm 1 or 2 on `g`, writes `partition.txt` and `detect.json`.
/// With `labels` the summary carries the overlap; with `model` as well it
/// carries the measured and predicted eigenvector overlaps.
pub fn cmd_detect(
    g: &Hypergraph,
    labels: Option<&Labels>,
    model: Option<&ModelParams>,
    cfg: &DetectConfig,
    eigen: &EigenConfig,
    seed: u64,
    out_dir: &Path,
) -> Result<DetectSummary> {
    if let Some(l) = labels {
        if l.n() != g.n() {
            return Err(Error::InvalidArgument(format!(
                "labels cover {} vertices, hypergraph has {}",
                l.n(),
                g.n()
            )));
        }
    }
    let opts = cfg.options(eigen, seed);
    let mut warnings = Vec::new();
    let spec = model.map(signal_spectrum).transpose()?;
    let (partition, below, values, informative, report) = match cfg.alg {
        1 => {
            let r = spec.as_ref().map(|s| s.r()).or(labels.map(|l| l.r));
            if r.is_some_and(|r| r != 2) {
                let msg = "algorithm 1 targets two balanced blocks; running on the second eigenvector anyway".to_string();
                log::warn!("{msg}");
                warnings.push(msg);
            }
            let out = detect_alg1(g, cfg.rounding_threshold, seed, &opts.arnoldi)?;
            (out.partition, false, vec![out.lambda], 0, None)
        }
        2 => {
            let det = detect_alg2(g, cfg.k, &opts)?;
            let inf = det.report.informative.len();
            (
                det.partition,
                det.below_threshold,
                det.embedding.eigenvalues,
                inf,
                Some(det.report),
            )
        }
        a => return Err(Error::InvalidArgument(format!("unknown algorithm {a}"))),
    };
    let mut theory = Vec::new();
    let mut ov = None;
    if let Some(l) = labels {
        ov = Some(if below {
            0.0
        } else {
            overlap(&l.sigma, &partition.assignment, l.r)
        });
        if let Some(spec) = &spec {
            for i in 0..spec.r0 {
                let pair = match &report {
                    Some(rep) => eigenspace_overlap(rep, spec, l, i),
                    None => empirical_overlap_vs_theory(g, spec, l, i, &opts),
                };
                match pair {
                    Ok((measured, predicted)) => theory.push(TheoryPair {
                        i,
                        measured,
                        predicted,
                    }),
                    Err(e) => warnings.push(format!("overlap for eigenvalue {i}: {e}")),
                }
            }
        }
    }
    ensure_dir(out_dir)?;
    let ppath = out_dir.join("partition.txt");
    write_assignment(&ppath, &partition.assignment)?;
    let summary = DetectSummary {
        alg: cfg.alg,
        seed,
        n: g.n(),
        k: partition.k,
        below_threshold: below,
        eigenvalues: values.iter().map(|z| [z.re, z.im]).collect(),
        informative,
        overlap: ov,
        theory,
        warnings,
        partition: ppath,
    };
    write_json(&out_dir.join("detect.json"), &summary)?;
    Ok(summary)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Identities,
    IharaBass,
    Gw,
    Gram,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identities" => Ok(Suite::Identities),
            "ihara-bass" => Ok(Suite::IharaBass),
            "gw" => Ok(Suite::Gw),
            "gram" => Ok(Suite::Gram),
            _ => Err(Error::InvalidArgument(format!(
                "unknown suite {s:?}; expected identities, ihara-bass, gw or gram"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationCase {
    pub name: String,
    pub deviation: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidateReport {
    pub suite: Suite,
    pub passed: bool,
    pub max_deviation: f64,
    pub cases: Vec<ValidationCase>,
}

impl ValidateReport {
    fn from_cases(suite: Suite, cases: Vec<ValidationCase>) -> Self {
        ValidateReport {
            suite,
            passed: cases.iter().all(|c| c.passed),
            max_deviation: cases.iter().map(|c| c.deviation).fold(0.0, f64::max),
            cases,
        }
    }
}

/// What a validation suite runs on.
pub enum ValidateInput<'a> {
    /// A fixed hypergraph, with labels when the suite needs them.
    Graph(&'a Hypergraph, Option<&'a Labels>),
    /// Fresh instances sampled from the config, one per seed.
    Config,
}

/// Probes per instance for the determinant check.
const IHARA_PROBES: usize = 10;
/// Largest oriented-edge count for the exact identity suite.
const IDENTITY_MAX_QM: usize = 20_000;
const IHARA_TOL: f64 = 1e-6;

fn instances(
    cfg: &ExperimentConfig,
    input: &ValidateInput,
) -> Result<Vec<(String, Hypergraph, Option<Labels>)>> {
    match input {
        ValidateInput::Graph(g, l) => Ok(vec![("input".into(), (*g).clone(), l.cloned())]),
        ValidateInput::Config => {
            let params = cfg.model.to_params()?;
            cfg.seeds
                .iter()
                .map(|&s| {
                    let labels = assign_labels(&params, cfg.model.labels, s)?;
                    let g = sample(&params, &labels, s)?;
                    Ok((format!("seed {s}"), g, Some(labels)))
                })
                .collect()
        }
    }
}

/// Runs one validation suite and writes `validate-<suite>.json`.
pub fn cmd_validate(
    suite: Suite,
    input: ValidateInput,
    cfg: &ExperimentConfig,
    seed: u64,
) -> Result<ValidateReport> {
    let cases = match suite {
        Suite::Identities => {
            let mut cases = Vec::new();
            for (name, g, _) in instances(cfg, &input)? {
                if g.oriented_count() > IDENTITY_MAX_QM {
                    return Err(Error::TooLarge(format!(
                        "{name}: identity suite needs q m <= {IDENTITY_MAX_QM}, got {}",
                        g.oriented_count()
                    )));
                }
                let rep = identity_deviations(&g, 5, 3, seed);
                for (id, dev) in rep.deviations {
                    cases.push(ValidationCase {
                        name: format!("{name}: {id}"),
                        deviation: dev as f64,
                        passed: dev == 0,
                    });
                }
            }
            cases
        }
        Suite::IharaBass => {
            let mut cases = Vec::new();
            for (idx, (name, g, _)) in instances(cfg, &input)?.into_iter().enumerate() {
                let chk = IharaBassCheck::new(&g)?;
                let mut rng = rng_from_seed(derive_seed(seed, &[idx as u64]));
                let mut worst: f64 = 0.0;
                for _ in 0..IHARA_PROBES {
                    let z = Complex64::from_polar(
                        rng.random_range(0.1..1.0),
                        rng.random_range(0.0..std::f64::consts::TAU),
                    );
                    worst = worst.max(chk.residual(z)?);
                }
                cases.push(ValidationCase {
                    name: format!("{name}: log-det residual"),
                    deviation: worst,
                    passed: worst < IHARA_TOL,
                });
                cases.push(ValidationCase {
                    name: format!("{name}: sign matches (-1)^(q m)"),
                    deviation: 0.0,
                    passed: chk.offset_matches_parity(),
                });
            }
            cases
        }
        Suite::Gw => {
            let params = cfg.model.to_params()?;
            let spec = signal_spectrum(&params)?;
            let mut cases = Vec::new();
            for i in 0..spec.r() {
                for j in i..spec.r() {
                    if spec.mu[i] == 0.0 || spec.mu[j] == 0.0 {
                        continue;
                    }
                    let rep = mc_moments(
                        &spec,
                        &params,
                        i,
                        j,
                        cfg.gw.t_max,
                        cfg.gw.trials,
                        derive_seed(seed, &[i as u64, j as u64]),
                    )?;
                    cases.push(ValidationCase {
                        name: format!("moments ({i}, {j}): max |z|"),
                        deviation: rep.max_abs_z(),
                        passed: rep.passed(cfg.gw.band),
                    });
                }
            }
            cases
        }
        Suite::Gram => {
            let params = cfg.model.to_params()?;
            let spec = signal_spectrum(&params)?;
            let mut cases = Vec::new();
            for (name, g, labels) in instances(cfg, &input)? {
                let labels = labels
                    .ok_or_else(|| Error::InvalidArgument("gram suite needs labels".into()))?;
                let ell = cfg.ell.unwrap_or_else(|| default_ell(g.n(), g.q(), spec.d));
                let op = NBOperator::new(&g);
                let (u, v) = pseudo_eigenvectors(&g, &op, &spec, &labels, ell)?;
                let (diag, _) = gram_diagnostics(&u, &v, &op, ell, &spec)?;
                for (label, dev) in ["U*U", "V*V", "U*V", "V*B^l U"].iter().zip(diag.as_array()) {
                    cases.push(ValidationCase {
                        name: format!("{name}: {label}"),
                        deviation: dev,
                        passed: *label != "U*V" || dev < cfg.gram_tol,
                    });
                }
            }
            cases
        }
    };
    let report = ValidateReport::from_cases(suite, cases);
    ensure_dir(&cfg.out_dir)?;
    let name = serde_json::to_value(suite)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .unwrap_or_default();
    write_json(&cfg.out_dir.join(format!("validate-{name}.json")), &report)?;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseRow {
    pub point: usize,
    /// Relative margin `(q-1) mu_2^2 / d - 1`.
    pub rel_margin: f64,
    /// `(q-1) mu_2^2 - d`.
    pub ks_margin: f64,
    pub mu2: f64,
    /// `sqrt(d / (q-1))`, the value of `mu_2` on the threshold.
    pub mu2_threshold: f64,
    pub c_in: f64,
    pub c_out: f64,
    pub mean_overlap: f64,
    pub median_overlap: f64,
    /// Empty when fewer than two seeds succeeded.
    pub stderr: Option<f64>,
    pub runs: usize,
    pub failures: usize,
    pub error: String,
}

fn median(xs: &mut [f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.sort_by(f64::total_cmp);
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        0.5 * (xs[m - 1] + xs[m])
    }
}

/// Overlap of Algorithm 2 across a grid of Kesten-Stigum margins, written to
/// `phase.csv`. Failing grid points are recorded and the sweep continues.
pub fn cmd_phase_diagram(cfg: &ExperimentConfig) -> Result<Vec<PhaseRow>> {
    let phase = cfg
        .phase
        .as_ref()
        .ok_or_else(|| Error::Config("phase-diagram needs a [phase] section".into()))?;
    let (n, r, q) = (cfg.model.n, cfg.model.r, cfg.model.q);
    if q < 2 {
        return Err(Error::Config("q must be at least 2".into()));
    }
    let thr = (phase.d / (q - 1) as f64).sqrt();
    let tasks: Vec<(usize, u64)> = (0..phase.margins.len())
        .flat_map(|p| cfg.seeds.iter().map(move |&s| (p, s)))
        .collect();
    let point_params: Vec<Result<(f64, f64, ModelParams)>> = phase
        .margins
        .iter()
        .map(|&m| {
            let (c_in, c_out) = symmetric_from_margin(r, q, phase.d, m)?;
            Ok((c_in, c_out, ModelParams::symmetric(n, r, q, c_in, c_out)?))
        })
        .collect();
    let outcomes: Vec<Result<f64>> = tasks
        .par_iter()
        .map(|&(p, s)| {
            let (_, _, params) = point_params[p]
                .as_ref()
                .map_err(|e| Error::Config(e.to_string()))?;
            let labels = assign_labels(params, cfg.model.labels, s)?;
            let g = sample(params, &labels, s)?;
            let det = detect_alg2(&g, cfg.detect.k, &cfg.detect.options(&cfg.eigen, s))?;
            Ok(if det.below_threshold {
                0.0
            } else {
                overlap(&labels.sigma, &det.partition.assignment, r)
            })
        })
        .collect();
    let mut rows = Vec::with_capacity(phase.margins.len());
    for (p, &m) in phase.margins.iter().enumerate() {
        let mut vals = Vec::new();
        let mut errors = Vec::new();
        for ((tp, _), out) in tasks.iter().zip(&outcomes) {
            if *tp != p {
                continue;
            }
            match out {
                Ok(v) => vals.push(*v),
                Err(e) => errors.push(e.to_string()),
            }
        }
        let k = vals.len();
        let mean = if k > 0 {
            vals.iter().sum::<f64>() / k as f64
        } else {
            f64::NAN
        };
        let stderr = (k >= 2).then(|| {
            let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1) as f64;
            (var / k as f64).sqrt()
        });
        let (c_in, c_out) = point_params[p]
            .as_ref()
            .map(|(a, b, _)| (*a, *b))
            .unwrap_or((f64::NAN, f64::NAN));
        let mu2 = ((1.0 + m) * phase.d / (q - 1) as f64).sqrt();
        errors.dedup();
        rows.push(PhaseRow {
            point: p,
            rel_margin: m,
            ks_margin: m * phase.d,
            mu2,
            mu2_threshold: thr,
            c_in,
            c_out,
            mean_overlap: mean,
            median_overlap: median(&mut vals),
            stderr,
            runs: k,
            failures: errors.len(),
            error: errors.join("; "),
        });
    }
    ensure_dir(&cfg.out_dir)?;
    let path = cfg.out_dir.join("phase.csv");
    let mut w = csv_writer(&path)?;
    for row in &rows {
        w.serialize(row).map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::io(&path, e))?;
    Ok(rows)
}

/// Signal spectrum of the config's model, for reporting.
pub fn model_spectrum(cfg: &ExperimentConfig) -> Result<SignalSpectrum> {
    signal_spectrum(&cfg.model.to_params()?)
}

/// Sizes the global thread pool from `HYNB_THREADS` if set.
pub fn init_threads() -> Result<()> {
    if let Ok(v) = std::env::var("HYNB_THREADS") {
        let t: usize = v.parse().map_err(|_| {
            Error::Config(format!(
                "HYNB_THREADS must be a positive integer, got {v:?}"
            ))
        })?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build_global()
            .map_err(|e| Error::Config(e.to_string()))?;
    }
    Ok(())
}
