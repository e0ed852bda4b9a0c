//! Galton-Watson hypertrees: sampling, tree functionals, Monte Carlo moment
//! checks, and the non-backtracking path functional on finite hypergraphs.

use std::collections::{HashSet, VecDeque};
use std::io::Write;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::SliceRandom;
use rand_distr::{Binomial, Poisson};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::model::{multiplicity, multisets, validate_params, ModelParams};
use crate::rng::{derive_seed, rng_from_seed, Rng};
use crate::signal::{csv_err, gamma, SignalSpectrum};

pub const DEFAULT_NODE_CAP: usize = 1_000_000;

/// Trials per deterministic work unit in [`mc_moments`].
const CHUNK: usize = 1000;

/// Law of the child types attached to one hyperedge, per parent type.
#[derive(Debug, Clone)]
pub struct OffspringLaw {
    pub q: usize,
    pub r: usize,
    pub d: f64,
    /// Sorted `(q - 1)`-multisets of child types.
    pub profiles: Vec<Vec<usize>>,
    /// `probs[i][k]`: probability that an edge hanging off a type-`i` node
    /// carries children with profile `profiles[k]`.
    pub probs: Vec<Vec<f64>>,
    samplers: Vec<Option<WeightedIndex<f64>>>,
}

impl OffspringLaw {
    pub fn new(params: &ModelParams) -> Result<Self> {
        let d = validate_params(params)?;
        let (q, r) = (params.q(), params.r());
        let profiles = multisets(r, q - 1);
        let mut probs = Vec::with_capacity(r);
        let mut samplers = Vec::with_capacity(r);
        for i in 0..r {
            let row: Vec<f64> = profiles
                .iter()
                .map(|j| {
                    let mut key = j.clone();
                    key.push(i);
                    key.sort_unstable();
                    let prod: f64 = j.iter().map(|&l| params.pi[l]).product();
                    if d > 0.0 {
                        multiplicity(j) * params.tensor.get_sorted(&key) * prod / d
                    } else {
                        0.0
                    }
                })
                .collect();
            let total: f64 = row.iter().sum();
            if d > 0.0 && (total - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidParams(format!(
                    "child-type law of type {i} sums to {total}, not 1"
                )));
            }
            samplers.push(if d > 0.0 {
                Some(WeightedIndex::new(&row).map_err(|e| Error::InvalidParams(e.to_string()))?)
            } else {
                None
            });
            probs.push(row);
        }
        Ok(OffspringLaw {
            q,
            r,
            d,
            profiles,
            probs,
            samplers,
        })
    }

    fn poisson(&self, mean: f64, rng: &mut Rng) -> u64 {
        if mean <= 0.0 {
            return 0;
        }
        Poisson::new(mean).expect("positive mean").sample(rng) as u64
    }

    /// Child-type counts of the next generation given per-type counts.
    pub fn next_generation(&self, counts: &[u64], rng: &mut Rng) -> Vec<u64> {
        let mut next = vec![0u64; self.r];
        for (i, &c) in counts.iter().enumerate() {
            if c == 0 || self.d <= 0.0 {
                continue;
            }
            let mut left = self.poisson(c as f64 * self.d, rng);
            let mut mass = 1.0;
            for (k, profile) in self.profiles.iter().enumerate() {
                if left == 0 {
                    break;
                }
                let p = self.probs[i][k];
                let take = if p >= mass {
                    left
                } else if p <= 0.0 {
                    0
                } else {
                    Binomial::new(left, (p / mass).min(1.0))
                        .expect("valid probability")
                        .sample(rng)
                };
                for &t in profile {
                    next[t] += take;
                }
                left -= take;
                mass -= p;
            }
        }
        next
    }
}

/// Explicit hypertree. Node 0 is the root; nodes are stored generation by
/// generation.
#[derive(Debug, Clone, PartialEq)]
pub struct GWTree {
    pub q: usize,
    pub r: usize,
    pub depth: usize,
    pub types: Vec<usize>,
    pub depths: Vec<usize>,
    pub parent_edge: Vec<Option<usize>>,
    /// `(parent, children)`, children in their sampled order.
    pub edges: Vec<(usize, Vec<usize>)>,
}

impl GWTree {
    pub fn root_type(&self) -> usize {
        self.types[0]
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    /// Per-generation, per-type node counts.
    pub fn generation_counts(&self) -> Vec<Vec<u64>> {
        let mut out = vec![vec![0u64; self.r]; self.depth + 1];
        for (&t, &dp) in self.types.iter().zip(&self.depths) {
            out[dp][t] += 1;
        }
        out
    }

    /// The tree as a hypergraph on its nodes, so finite-graph functionals
    /// can be evaluated on it.
    pub fn to_hypergraph(&self) -> Result<Hypergraph> {
        let edges = self
            .edges
            .iter()
            .map(|(p, c)| {
                let mut e = c.clone();
                e.push(*p);
                e
            })
            .collect();
        Hypergraph::new(self.len(), self.q, edges)
    }
}

/// Samples an explicit hypertree down to `depth`.
pub fn sample_tree(
    law: &OffspringLaw,
    root_type: usize,
    depth: usize,
    node_cap: usize,
    seed: u64,
) -> Result<GWTree> {
    if node_cap == 0 {
        return Err(Error::InvalidArgument("node_cap must be at least 1".into()));
    }
    if root_type >= law.r {
        return Err(Error::InvalidArgument(format!(
            "root type {root_type} >= r = {}",
            law.r
        )));
    }
    let mut rng = rng_from_seed(seed);
    let mut tree = GWTree {
        q: law.q,
        r: law.r,
        depth,
        types: vec![root_type],
        depths: vec![0],
        parent_edge: vec![None],
        edges: Vec::new(),
    };
    let mut frontier = 0..1;
    for gen in 1..=depth {
        let start = tree.len();
        for u in frontier.clone() {
            let Some(sampler) = &law.samplers[tree.types[u]] else {
                continue;
            };
            let k = law.poisson(law.d, &mut rng);
            for _ in 0..k {
                let mut kids = law.profiles[sampler.sample(&mut rng)].clone();
                kids.shuffle(&mut rng);
                let e = tree.edges.len();
                let mut ids = Vec::with_capacity(kids.len());
                for t in kids {
                    ids.push(tree.len());
                    tree.types.push(t);
                    tree.depths.push(gen);
                    tree.parent_edge.push(Some(e));
                }
                tree.edges.push((u, ids));
            }
            if tree.len() > node_cap {
                return Err(Error::NodeCapExceeded {
                    cap: node_cap,
                    generation: gen,
                    nodes: tree.len(),
                });
            }
        }
        frontier = start..tree.len();
    }
    Ok(tree)
}

/// Per-type counts of generations `0..=depth`, without building the tree.
/// `None` when the total count exceeds `node_cap`.
pub fn sample_generation_counts(
    law: &OffspringLaw,
    root_type: usize,
    depth: usize,
    node_cap: usize,
    rng: &mut Rng,
) -> Option<Vec<Vec<u64>>> {
    let mut gens = Vec::with_capacity(depth + 1);
    let mut cur = vec![0u64; law.r];
    cur[root_type] = 1;
    let mut total = 1u64;
    for _ in 0..depth {
        let next = law.next_generation(&cur, rng);
        total += next.iter().sum::<u64>();
        gens.push(cur);
        cur = next;
        if total > node_cap as u64 {
            return None;
        }
    }
    gens.push(cur);
    Some(gens)
}

fn dot_counts(counts: &[u64], xi: &[f64]) -> f64 {
    counts.iter().zip(xi).map(|(&c, x)| c as f64 * x).sum()
}

/// `f_{xi,t}`: sum of `xi` over the types of the depth-`t` nodes.
pub fn tree_functional(tree: &GWTree, xi: &[f64], t: usize) -> Result<f64> {
    if t > tree.depth {
        return Err(Error::InvalidArgument(format!(
            "t = {t} exceeds the sampled depth {}",
            tree.depth
        )));
    }
    Ok(tree
        .types
        .iter()
        .zip(&tree.depths)
        .filter(|&(_, &dp)| dp == t)
        .map(|(&ty, _)| xi[ty])
        .sum())
}

/// `Z_s = [(q-1) mu_i]^{-s} f_{phi_i,s}` for `s = 0..=t_max`.
pub fn martingale_path(
    tree: &GWTree,
    spec: &SignalSpectrum,
    i: usize,
    t_max: usize,
) -> Result<Vec<f64>> {
    let mu = spec.mu[i];
    if mu == 0.0 {
        return Err(Error::InvalidArgument(format!("mu_{i} = 0")));
    }
    let growth = (spec.q - 1) as f64 * mu;
    (0..=t_max)
        .map(|s| Ok(tree_functional(tree, &spec.phi[i], s)? / growth.powi(s as i32)))
        .collect()
}

/// Both candidate prefactors for the second moment of the martingale
/// increment at step `t`: `(q-1)^{t+1}` and
/// `[(q-1) mu]^{2t+2} [(q-1) mu^2]^{-(t+1)}`.
pub fn increment_prefactors(q: usize, mu: f64, t: usize) -> (f64, f64) {
    let q1 = (q - 1) as f64;
    let e = t as i32 + 1;
    (q1.powi(e), (q1 * mu).powi(2 * e) / (q1 * mu * mu).powi(e))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Moment {
    /// `E f_{phi_i,t}`.
    Mean,
    /// `E f_{phi_i,t} f_{phi_j,t}`.
    Cross,
    /// `E (f_{phi_i,t+1} - (q-1) mu_i f_{phi_i,t})^2`.
    Increment,
    /// `E Z_t Z'_{t2}` for `t <= t2`.
    Martingale,
    /// `E Delta_t Delta'_{t2}` for `t < t2`.
    IncrementCov,
    /// `sum_k pi_k E_k f_{phi_i,t} f_{phi_j,t}`.
    PiCross,
}

#[derive(Debug, Clone, Serialize)]
pub struct MomentRow {
    pub moment: Moment,
    pub i: usize,
    pub j: usize,
    pub t: usize,
    pub t2: usize,
    /// `None` for π-averaged rows.
    pub root_type: Option<usize>,
    pub mc_mean: f64,
    pub stderr: f64,
    pub theory: f64,
    pub z: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MomentReport {
    pub rows: Vec<MomentRow>,
    /// Trials per root type.
    pub trials: usize,
    /// Trials dropped because the node cap was hit, per root type.
    pub discarded: Vec<usize>,
}

impl MomentReport {
    pub fn max_abs_z(&self) -> f64 {
        self.rows.iter().map(|r| r.z.abs()).fold(0.0, f64::max)
    }

    pub fn passed(&self, band: f64) -> bool {
        self.rows.iter().all(|r| r.z.abs() < band)
    }

    /// Largest fraction of discarded trials over root types.
    pub fn discard_rate(&self) -> f64 {
        let worst = self.discarded.iter().copied().max().unwrap_or(0);
        worst as f64 / (self.trials + worst).max(1) as f64
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record([
            "moment",
            "i",
            "j",
            "t",
            "t2",
            "root_type",
            "mc_mean",
            "stderr",
            "theory",
            "z",
        ])
        .map_err(csv_err)?;
        for r in &self.rows {
            let moment = serde_json::to_value(r.moment)
                .ok()
                .and_then(|v| v.as_str().map(str::to_owned))
                .unwrap_or_default();
            wr.write_record([
                moment,
                r.i.to_string(),
                r.j.to_string(),
                r.t.to_string(),
                r.t2.to_string(),
                r.root_type.map_or(String::new(), |k| k.to_string()),
                r.mc_mean.to_string(),
                r.stderr.to_string(),
                r.theory.to_string(),
                r.z.to_string(),
            ])
            .map_err(csv_err)?;
        }
        wr.flush().map_err(|e| Error::Config(e.to_string()))?;
        Ok(())
    }
}

fn z_score(mean: f64, se: f64, theory: f64) -> f64 {
    let diff = mean - theory;
    if se > 0.0 {
        diff / se
    } else if diff.abs() <= 1e-9 * theory.abs().max(1.0) {
        0.0
    } else {
        f64::INFINITY * diff.signum()
    }
}

/// Statistics recorded per trial, in a fixed order.
struct Layout {
    t_max: usize,
}

impl Layout {
    fn len(&self) -> usize {
        let t = self.t_max + 1;
        // mean_i, mean_j, cross, increment per t; martingale pairs; increment pairs.
        4 * t + t * (t + 1) / 2 + t * (t - 1) / 2
    }
}

fn trial_stats(
    gens: &[Vec<u64>],
    spec: &SignalSpectrum,
    i: usize,
    j: usize,
    t_max: usize,
    out: &mut Vec<f64>,
) {
    let q1 = (spec.q - 1) as f64;
    let (gi, gj) = (q1 * spec.mu[i], q1 * spec.mu[j]);
    let fi: Vec<f64> = gens.iter().map(|c| dot_counts(c, &spec.phi[i])).collect();
    let fj: Vec<f64> = gens.iter().map(|c| dot_counts(c, &spec.phi[j])).collect();
    let zi: Vec<f64> = (0..=t_max + 1).map(|s| fi[s] / gi.powi(s as i32)).collect();
    let zj: Vec<f64> = (0..=t_max + 1).map(|s| fj[s] / gj.powi(s as i32)).collect();
    out.clear();
    for t in 0..=t_max {
        out.push(fi[t]);
        out.push(fj[t]);
        out.push(fi[t] * fj[t]);
        let inc = fi[t + 1] - gi * fi[t];
        out.push(inc * inc);
    }
    for t in 0..=t_max {
        for t2 in t..=t_max {
            out.push(zi[t] * zj[t2]);
        }
    }
    for t in 0..=t_max {
        for t2 in t + 1..=t_max {
            out.push((zi[t + 1] - zi[t]) * (zj[t2 + 1] - zj[t2]));
        }
    }
}

/// Running means and centred sums of squares (Welford), mergeable across chunks.
#[derive(Clone)]
struct Running {
    n: f64,
    mean: Vec<f64>,
    m2: Vec<f64>,
}

impl Running {
    fn new(width: usize) -> Self {
        Self {
            n: 0.0,
            mean: vec![0.0; width],
            m2: vec![0.0; width],
        }
    }

    fn push(&mut self, xs: &[f64]) {
        self.n += 1.0;
        for ((x, m), s) in xs.iter().zip(self.mean.iter_mut()).zip(self.m2.iter_mut()) {
            let d = x - *m;
            *m += d / self.n;
            *s += d * (x - *m);
        }
    }

    fn merge(&mut self, o: &Running) {
        if o.n == 0.0 {
            return;
        }
        let n = self.n + o.n;
        for idx in 0..self.mean.len() {
            let d = o.mean[idx] - self.mean[idx];
            self.mean[idx] += d * o.n / n;
            self.m2[idx] += o.m2[idx] + d * d * self.n * o.n / n;
        }
        self.n = n;
    }

    /// Mean and standard error of column `idx`.
    fn estimate(&self, idx: usize) -> (f64, f64) {
        let var = if self.n > 1.0 {
            self.m2[idx] / (self.n - 1.0)
        } else {
            0.0
        };
        (self.mean[idx], (var.max(0.0) / self.n).sqrt())
    }
}

/// Running statistics over `trials` kept trials rooted at type `k`.
fn accumulate(
    law: &OffspringLaw,
    spec: &SignalSpectrum,
    i: usize,
    j: usize,
    t_max: usize,
    k: usize,
    trials: usize,
    node_cap: usize,
    seed: u64,
) -> (Running, usize) {
    let width = Layout { t_max }.len();
    let chunks = trials.div_ceil(CHUNK);
    let parts: Vec<(Running, usize)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = rng_from_seed(derive_seed(seed, &[k as u64, c as u64]));
            let want = CHUNK.min(trials - c * CHUNK);
            let mut acc = Running::new(width);
            let mut stats = Vec::with_capacity(width);
            let (mut kept, mut dropped) = (0, 0);
            while kept < want {
                match sample_generation_counts(law, k, t_max + 1, node_cap, &mut rng) {
                    Some(gens) => {
                        trial_stats(&gens, spec, i, j, t_max, &mut stats);
                        acc.push(&stats);
                        kept += 1;
                    }
                    None => dropped += 1,
                }
            }
            (acc, dropped)
        })
        .collect();
    let mut acc = Running::new(width);
    let mut dropped = 0;
    for (a, d) in &parts {
        acc.merge(a);
        dropped += d;
    }
    (acc, dropped)
}

/// Monte Carlo estimates of the tree-functional moments for eigenpairs `i`
/// and `j` of the signal matrix at depths `0..=t_max`, with `trials` kept
/// trials per root type, next to their closed forms.
pub fn mc_moments(
    spec: &SignalSpectrum,
    params: &ModelParams,
    i: usize,
    j: usize,
    t_max: usize,
    trials: usize,
    seed: u64,
) -> Result<MomentReport> {
    mc_moments_capped(spec, params, i, j, t_max, trials, DEFAULT_NODE_CAP, seed)
}

#[allow(clippy::too_many_arguments)]
pub fn mc_moments_capped(
    spec: &SignalSpectrum,
    params: &ModelParams,
    i: usize,
    j: usize,
    t_max: usize,
    trials: usize,
    node_cap: usize,
    seed: u64,
) -> Result<MomentReport> {
    let r = spec.r();
    if i >= r || j >= r {
        return Err(Error::InvalidArgument(format!(
            "eigen index out of range 0..{r}"
        )));
    }
    if spec.mu[i] == 0.0 || spec.mu[j] == 0.0 {
        return Err(Error::InvalidArgument(
            "zero eigenvalue has no martingale".into(),
        ));
    }
    if trials < 2 {
        return Err(Error::InvalidArgument("need at least two trials".into()));
    }
    let law = OffspringLaw::new(params)?;
    let q1 = (spec.q - 1) as f64;
    let (mi, mj) = (spec.mu[i], spec.mu[j]);
    let mij = q1 * mi * mj;
    // qsy[s] = Q^s y^{(phi_i, phi_j)}, qsyy[s] = Q^s y^{(phi_i, phi_i)}.
    let powers = |mut y: Vec<f64>| {
        let mut out = Vec::with_capacity(t_max + 1);
        for _ in 0..=t_max {
            let next = spec.apply_q(&y);
            out.push(y);
            y = next;
        }
        out
    };
    let qsy = powers(spec.y_vector(i, j));
    let qsyy = powers(spec.y_vector(i, i));
    let zz_theory = |k: usize, t: usize| -> f64 {
        spec.phi[i][k] * spec.phi[j][k]
            + (0..t)
                .map(|s| qsy[s][k] / mij.powi(s as i32 + 1))
                .sum::<f64>()
    };

    let mut rows = Vec::new();
    let mut discarded = Vec::with_capacity(r);
    let mut cross_by_type = vec![vec![(0.0, 0.0); t_max + 1]; r];
    for k in 0..r {
        let (acc, dropped) = accumulate(&law, spec, i, j, t_max, k, trials, node_cap, seed);
        discarded.push(dropped);
        let est = |idx: usize| acc.estimate(idx);
        let mut push = |moment, t, t2, (m, se): (f64, f64), theory: f64, ii, jj| {
            rows.push(MomentRow {
                moment,
                i: ii,
                j: jj,
                t,
                t2,
                root_type: Some(k),
                mc_mean: m,
                stderr: se,
                theory,
                z: z_score(m, se, theory),
            })
        };
        for t in 0..=t_max {
            let base = 4 * t;
            let ti = t as i32;
            push(
                Moment::Mean,
                t,
                t,
                est(base),
                (q1 * mi).powi(ti) * spec.phi[i][k],
                i,
                i,
            );
            if j != i {
                push(
                    Moment::Mean,
                    t,
                    t,
                    est(base + 1),
                    (q1 * mj).powi(ti) * spec.phi[j][k],
                    j,
                    j,
                );
            }
            let cross = est(base + 2);
            cross_by_type[k][t] = cross;
            push(
                Moment::Cross,
                t,
                t,
                cross,
                (q1 * q1 * mi * mj).powi(ti) * zz_theory(k, t),
                i,
                j,
            );
            let (pref, _) = increment_prefactors(spec.q, mi, t);
            push(
                Moment::Increment,
                t,
                t,
                est(base + 3),
                pref * qsyy[t][k],
                i,
                i,
            );
        }
        let mut idx = 4 * (t_max + 1);
        for t in 0..=t_max {
            for t2 in t..=t_max {
                push(Moment::Martingale, t, t2, est(idx), zz_theory(k, t), i, j);
                idx += 1;
            }
        }
        for t in 0..=t_max {
            for t2 in t + 1..=t_max {
                push(Moment::IncrementCov, t, t2, est(idx), 0.0, i, j);
                idx += 1;
            }
        }
    }
    for t in 0..=t_max {
        let m: f64 = (0..r).map(|k| spec.pi[k] * cross_by_type[k][t].0).sum();
        let se = (0..r)
            .map(|k| (spec.pi[k] * cross_by_type[k][t].1).powi(2))
            .sum::<f64>()
            .sqrt();
        let theory = if i == j {
            let g = gamma(spec.q, spec.d, mi, t).unwrap_or(f64::NAN);
            (q1 * mi).powi(2 * t as i32) * g
        } else {
            0.0
        };
        rows.push(MomentRow {
            moment: Moment::PiCross,
            i,
            j,
            t,
            t2: t,
            root_type: None,
            mc_mean: m,
            stderr: se,
            theory,
            z: z_score(m, se, theory),
        });
    }
    let rep = MomentReport {
        rows,
        trials,
        discarded,
    };
    if rep.discard_rate() > 1e-3 {
        log::warn!(
            "{:.3}% of trials hit the node cap; estimates are biased",
            100.0 * rep.discard_rate()
        );
    }
    Ok(rep)
}

/// Vertex and edge counts of the radius-`t` ball around `o` in `g` with every
/// edge through `removed` deleted.
fn ball_size(g: &Hypergraph, o: usize, t: usize, removed: Option<usize>) -> (usize, usize) {
    let skip = |e: usize| removed.is_some_and(|x| g.edge(e).contains(&x));
    let mut dist = std::collections::HashMap::from([(o, 0usize)]);
    let mut edges = HashSet::new();
    let mut queue = VecDeque::from([o]);
    while let Some(u) = queue.pop_front() {
        let du = dist[&u];
        if du >= t {
            continue;
        }
        for e in g.incident_edges(u) {
            if skip(e) || !edges.insert(e) {
                continue;
            }
            for &w in g.edge(e) {
                dist.entry(w).or_insert_with(|| {
                    queue.push_back(w);
                    du + 1
                });
            }
        }
    }
    (dist.len(), edges.len())
}

fn tangle_free(g: &Hypergraph, o: usize, t: usize, removed: Option<usize>) -> bool {
    let (v, e) = ball_size(g, o, t, removed);
    e * g.q() + 1 - v - e <= 1
}

/// Sum of `xi(sigma(x_t))` over non-backtracking paths of length `t` from
/// `o` whose first edge differs from `banned` and avoids edges through
/// `removed`.
fn nb_path_sum(
    g: &Hypergraph,
    sigma: &[usize],
    xi: &[f64],
    o: usize,
    t: usize,
    banned: Option<usize>,
    removed: Option<usize>,
) -> f64 {
    if t == 0 {
        return xi[sigma[o]];
    }
    let mut total = 0.0;
    for e in g.incident_edges(o) {
        if Some(e) == banned || removed.is_some_and(|x| g.edge(e).contains(&x)) {
            continue;
        }
        for &w in g.edge(e) {
            if w != o {
                total += nb_path_sum(g, sigma, xi, w, t - 1, Some(e), removed);
            }
        }
    }
    total
}

/// `h_{xi,t}(G, o)`: zero unless the radius-`t` ball around `o` has at most
/// one cycle, else the sum of `xi(sigma(x_t))` over non-backtracking paths
/// `o = x_0, ..., x_t`.
pub fn h_functional(g: &Hypergraph, sigma: &[usize], o: usize, xi: &[f64], t: usize) -> f64 {
    if !tangle_free(g, o, t, None) {
        return 0.0;
    }
    nb_path_sum(g, sigma, xi, o, t, None, None)
}

/// `sum over neighbours o' of x of h_{xi,t}(G - x, o')`, where `G - x` drops
/// every edge through `x`. A neighbour sharing several edges with `x` is
/// counted once per edge.
pub fn partial_h(g: &Hypergraph, sigma: &[usize], x: usize, xi: &[f64], t: usize) -> f64 {
    let mut total = 0.0;
    for e in g.incident_edges(x) {
        for &o in g.edge(e) {
            if o != x && tangle_free(g, o, t, Some(x)) {
                total += nb_path_sum(g, sigma, xi, o, t, None, Some(x));
            }
        }
    }
    total
}
