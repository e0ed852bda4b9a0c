//! Hypergraph stochastic block model: parameters, labels and sampling.

use std::collections::{BTreeMap, HashSet};
use std::io::{BufRead, Write};
use std::path::Path;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::{index, SliceRandom};
use rand_distr::Binomial;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::rng::{derive_seed, rng_from_seed};

/// Profiles with at most this many candidate subsets are sampled by
/// enumerating every subset and flipping a coin for each.
const ENUMERATE_LIMIT: u128 = 1 << 16;

/// A symmetric tensor over `[r]^q`, stored by sorted multiset keys.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityTensor {
    r: usize,
    q: usize,
    values: BTreeMap<Vec<usize>, f64>,
}

impl ProbabilityTensor {
    /// Builds a tensor from entries keyed by any ordering of the index tuple.
    /// Missing entries are zero.
    pub fn new(
        r: usize,
        q: usize,
        entries: impl IntoIterator<Item = (Vec<usize>, f64)>,
    ) -> Result<Self> {
        if r == 0 || q < 2 {
            return Err(Error::InvalidParams(format!(
                "need r >= 1 and q >= 2, got r = {r}, q = {q}"
            )));
        }
        let mut values = BTreeMap::new();
        for (mut key, v) in entries {
            if key.len() != q || key.iter().any(|&k| k >= r) {
                return Err(Error::InvalidParams(format!(
                    "tensor key {key:?} is not in [{r}]^{q}"
                )));
            }
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidParams(format!(
                    "tensor entry {key:?} = {v} must be finite and >= 0"
                )));
            }
            key.sort_unstable();
            if let Some(old) = values.insert(key.clone(), v) {
                if old != v {
                    return Err(Error::InvalidParams(format!(
                        "conflicting values {old} and {v} for tensor entry {key:?}"
                    )));
                }
            }
        }
        Ok(ProbabilityTensor { r, q, values })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Entry lookup; the index order does not matter.
    pub fn get(&self, idx: &[usize]) -> f64 {
        let mut key = idx.to_vec();
        key.sort_unstable();
        self.values.get(&key).copied().unwrap_or(0.0)
    }

    /// Entry lookup by an already sorted key.
    pub fn get_sorted(&self, key: &[usize]) -> f64 {
        self.values.get(key).copied().unwrap_or(0.0)
    }

    /// Nonzero entries as `(sorted key, value)`.
    pub fn entries(&self) -> impl Iterator<Item = (&[usize], f64)> + '_ {
        self.values.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    pub fn max_entry(&self) -> f64 {
        self.values.values().fold(0.0, |m, &v| m.max(v))
    }

    /// `sum_{j in [r]^free} p(fixed, j) prod_l pi[j_l]`.
    pub fn contract(&self, pi: &[f64], fixed: &[usize], free: usize) -> f64 {
        let mut key = Vec::with_capacity(self.q);
        multisets(self.r, free)
            .into_iter()
            .map(|ms| {
                key.clear();
                key.extend_from_slice(fixed);
                key.extend_from_slice(&ms);
                key.sort_unstable();
                let w: f64 = ms.iter().map(|&k| pi[k]).product();
                multiplicity(&ms) * w * self.get_sorted(&key)
            })
            .sum()
    }
}

/// All nondecreasing sequences of length `k` over `0..r`.
pub fn multisets(r: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(r: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..r {
            cur.push(v);
            rec(r, k, v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(r, k, 0, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Number of distinct orderings of a sorted multiset.
pub fn multiplicity(sorted: &[usize]) -> f64 {
    let mut m = factorial(sorted.len());
    let mut i = 0;
    while i < sorted.len() {
        let j = sorted[i..].iter().take_while(|&&v| v == sorted[i]).count();
        m /= factorial(j);
        i += j;
    }
    m
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// Binomial coefficient as a float.
pub fn binomial_f64(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn binomial_u128(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Tensor entries `c_in` on the diagonal and `c_out` elsewhere.
pub fn symmetric_tensor(r: usize, q: usize, c_in: f64, c_out: f64) -> Result<ProbabilityTensor> {
    if r < 2 || q < 2 {
        return Err(Error::InvalidParams(format!(
            "need r >= 2 and q >= 2, got r = {r}, q = {q}"
        )));
    }
    if !(c_in >= 0.0 && c_out >= 0.0) {
        return Err(Error::InvalidParams(format!(
            "c_in = {c_in} and c_out = {c_out} must be non-negative"
        )));
    }
    let entries = multisets(r, q).into_iter().map(|ms| {
        let v = if ms.iter().all(|&k| k == ms[0]) {
            c_in
        } else {
            c_out
        };
        (ms, v)
    });
    ProbabilityTensor::new(r, q, entries)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub tensor: ProbabilityTensor,
    pub pi: Vec<f64>,
    pub n: usize,
}

impl ModelParams {
    pub fn new(tensor: ProbabilityTensor, pi: Vec<f64>, n: usize) -> Result<Self> {
        let p = ModelParams { tensor, pi, n };
        p.check_shape()?;
        Ok(p)
    }

    /// Symmetric model with uniform block proportions.
    pub fn symmetric(n: usize, r: usize, q: usize, c_in: f64, c_out: f64) -> Result<Self> {
        Self::new(
            symmetric_tensor(r, q, c_in, c_out)?,
            vec![1.0 / r as f64; r],
            n,
        )
    }

    pub fn r(&self) -> usize {
        self.tensor.r
    }

    pub fn q(&self) -> usize {
        self.tensor.q
    }

    fn check_shape(&self) -> Result<()> {
        if self.pi.len() != self.tensor.r {
            return Err(Error::InvalidParams(format!(
                "pi has length {}, expected r = {}",
                self.pi.len(),
                self.tensor.r
            )));
        }
        if self.pi.iter().any(|&p| !(p > 0.0) || !p.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "pi entries must be positive: {:?}",
                self.pi
            )));
        }
        let s: f64 = self.pi.iter().sum();
        if (s - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParams(format!("pi sums to {s}, expected 1")));
        }
        if self.n < self.tensor.q {
            return Err(Error::InvalidParams(format!(
                "n = {} is smaller than q = {}",
                self.n, self.tensor.q
            )));
        }
        Ok(())
    }

    /// Expected degree of a vertex of each type.
    pub fn block_degrees(&self) -> Vec<f64> {
        (0..self.r())
            .map(|i| self.tensor.contract(&self.pi, &[i], self.q() - 1))
            .collect()
    }
}

/// Checks that every block has the same expected degree and returns it.
pub fn validate_params(params: &ModelParams) -> Result<f64> {
    params.check_shape()?;
    let ds = params.block_degrees();
    let d0 = ds[0];
    for (i, &di) in ds.iter().enumerate().skip(1) {
        let scale = d0.abs().max(di.abs()).max(f64::MIN_POSITIVE);
        if (di - d0).abs() > 1e-9 * scale {
            return Err(Error::DegreeMismatch {
                block_a: 0,
                block_b: i,
                d_a: d0,
                d_b: di,
            });
        }
    }
    Ok(d0)
}

/// Vertex types `sigma(v)` in `0..r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labels {
    pub sigma: Vec<usize>,
    pub r: usize,
}

impl Labels {
    pub fn new(sigma: Vec<usize>, r: usize) -> Result<Self> {
        if let Some(&bad) = sigma.iter().find(|&&s| s >= r) {
            return Err(Error::InvalidArgument(format!(
                "label {bad} out of range for r = {r}"
            )));
        }
        Ok(Labels { sigma, r })
    }

    pub fn n(&self) -> usize {
        self.sigma.len()
    }

    pub fn counts(&self) -> Vec<usize> {
        let mut c = vec![0; self.r];
        for &s in &self.sigma {
            c[s] += 1;
        }
        c
    }

    /// Vertices grouped by type.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut b = vec![Vec::new(); self.r];
        for (v, &s) in self.sigma.iter().enumerate() {
            b[s].push(v);
        }
        b
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_assignment(path, &self.sigma)
    }

    /// Reads a labels file. `r` defaults to `max + 1`.
    pub fn load(path: &Path, r: Option<usize>) -> Result<Self> {
        let sigma = read_assignment(path)?;
        let r = r.unwrap_or_else(|| sigma.iter().max().map_or(1, |&m| m + 1));
        Labels::new(sigma, r)
    }
}

/// Writes one integer per line.
pub fn write_assignment(path: &Path, values: &[usize]) -> Result<()> {
    let f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = std::io::BufWriter::new(f);
    for v in values {
        writeln!(w, "{v}").map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_assignment(path: &Path) -> Result<Vec<usize>> {
    let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (i, line) in std::io::BufReader::new(f).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        out.push(t.parse().map_err(|_| Error::Parse {
            line: i + 1,
            msg: format!("not a non-negative integer: {t:?}"),
        })?);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelMode {
    #[default]
    Deterministic,
    Iid,
}

/// Block sizes `round(n pi_i)` with largest-remainder rounding so they sum to `n`.
pub fn block_sizes(n: usize, pi: &[f64]) -> Vec<usize> {
    let exact: Vec<f64> = pi.iter().map(|&p| p * n as f64).collect();
    let mut sizes: Vec<usize> = exact.iter().map(|&x| x.floor() as usize).collect();
    let assigned: usize = sizes.iter().sum();
    let mut order: Vec<usize> = (0..pi.len()).collect();
    order.sort_by(|&a, &b| {
        let fa = exact[a] - exact[a].floor();
        let fb = exact[b] - exact[b].floor();
        fb.total_cmp(&fa).then(a.cmp(&b))
    });
    for &k in order.iter().take(n.saturating_sub(assigned)) {
        sizes[k] += 1;
    }
    sizes
}

pub fn assign_labels(params: &ModelParams, mode: LabelMode, seed: u64) -> Result<Labels> {
    let n = params.n;
    let r = params.r();
    if n < r {
        return Err(Error::InvalidParams(format!(
            "n = {n} is smaller than r = {r}"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let sigma = match mode {
        LabelMode::Deterministic => {
            let sizes = block_sizes(n, &params.pi);
            if let Some(k) = sizes.iter().position(|&s| s == 0) {
                return Err(Error::EmptyBlock {
                    block: k,
                    expected: params.pi[k] * n as f64,
                });
            }
            let mut sigma: Vec<usize> = sizes
                .iter()
                .enumerate()
                .flat_map(|(k, &s)| std::iter::repeat_n(k, s))
                .collect();
            sigma.shuffle(&mut rng);
            sigma
        }
        LabelMode::Iid => {
            let w = WeightedIndex::new(&params.pi)
                .map_err(|e| Error::InvalidParams(format!("bad proportions: {e}")))?;
            (0..n).map(|_| w.sample(&mut rng)).collect()
        }
    };
    Labels::new(sigma, r)
}

/// Samples a hypergraph: each q-subset `e` is present independently with
/// probability `p(sigma(e)) / C(n, q-1)`, clamped to `[0, 1]`.
///
/// Subsets are grouped by type profile. Each profile draws its edge count
/// from a binomial and then picks that many distinct subsets uniformly, using
/// a seed derived from `seed` and the profile index, so the output does not
/// depend on the thread count.
pub fn sample(params: &ModelParams, labels: &Labels, seed: u64) -> Result<Hypergraph> {
    let (n, q, r) = (params.n, params.q(), params.r());
    if labels.n() != n || labels.r != r {
        return Err(Error::InvalidArgument(format!(
            "labels have n = {}, r = {}; model has n = {n}, r = {r}",
            labels.n(),
            labels.r
        )));
    }
    let blocks = labels.blocks();
    let norm = binomial_f64(n, q - 1);
    let profiles = multisets(r, q);
    let mut jobs = Vec::new();
    for (pidx, profile) in profiles.iter().enumerate() {
        let raw = params.tensor.get_sorted(profile) / norm;
        if raw <= 0.0 {
            continue;
        }
        if raw > 1.0 {
            log::warn!("edge probability {raw} for profile {profile:?} clamped to 1");
        }
        let counts = profile_counts(profile, r);
        let total: u128 = counts
            .iter()
            .enumerate()
            .map(|(k, &c)| binomial_u128(blocks[k].len(), c))
            .product();
        if total == 0 {
            continue;
        }
        if total > u64::MAX as u128 {
            return Err(Error::TooLarge(format!(
                "{total} candidate subsets for profile {profile:?}"
            )));
        }
        jobs.push((pidx, counts, total as u64, raw.min(1.0)));
    }

    let parts: Vec<Vec<Vec<usize>>> = jobs
        .par_iter()
        .map(|(pidx, counts, total, p)| {
            let mut rng = rng_from_seed(derive_seed(seed, &[*pidx as u64]));
            sample_profile(&blocks, counts, *total, *p, &mut rng)
        })
        .collect::<Result<_>>()?;
    let mut edges: Vec<Vec<usize>> = parts.into_iter().flatten().collect();
    edges.sort_unstable();
    Ok(Hypergraph::from_canonical(n, q, edges.concat()))
}

fn profile_counts(profile: &[usize], r: usize) -> Vec<usize> {
    let mut c = vec![0; r];
    for &k in profile {
        c[k] += 1;
    }
    c
}

fn sample_profile(
    blocks: &[Vec<usize>],
    counts: &[usize],
    total: u64,
    p: f64,
    rng: &mut crate::rng::Rng,
) -> Result<Vec<Vec<usize>>> {
    let binom = Binomial::new(total, p).map_err(|e| Error::InvalidParams(e.to_string()))?;
    let m = binom.sample(rng);
    if m == 0 {
        return Ok(Vec::new());
    }
    if (total as u128) <= ENUMERATE_LIMIT || m > total / 2 {
        // Exact Bernoulli sweep over every subset of the profile.
        let mut out = Vec::new();
        let coin =
            rand::distr::Bernoulli::new(p).map_err(|e| Error::InvalidParams(e.to_string()))?;
        for_each_profile_subset(blocks, counts, &mut |e| {
            if coin.sample(rng) {
                let mut e = e.to_vec();
                e.sort_unstable();
                out.push(e);
            }
        });
        return Ok(out);
    }
    let mut seen = HashSet::with_capacity(m as usize);
    let mut out = Vec::with_capacity(m as usize);
    while (out.len() as u64) < m {
        let mut e = Vec::with_capacity(counts.iter().sum());
        for (k, &c) in counts.iter().enumerate() {
            if c > 0 {
                e.extend(
                    index::sample(rng, blocks[k].len(), c)
                        .iter()
                        .map(|i| blocks[k][i]),
                );
            }
        }
        e.sort_unstable();
        if seen.insert(e.clone()) {
            out.push(e);
        }
    }
    Ok(out)
}

fn for_each_profile_subset(blocks: &[Vec<usize>], counts: &[usize], f: &mut dyn FnMut(&[usize])) {
    fn rec(
        blocks: &[Vec<usize>],
        counts: &[usize],
        k: usize,
        start: usize,
        left: usize,
        cur: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]),
    ) {
        if k == counts.len() {
            f(cur);
            return;
        }
        if left == 0 {
            let next = k + 1;
            let c = counts.get(next).copied().unwrap_or(0);
            rec(blocks, counts, next, 0, c, cur, f);
            return;
        }
        let b = &blocks[k];
        for i in start..b.len() {
            if b.len() - i < left {
                break;
            }
            cur.push(b[i]);
            rec(blocks, counts, k, i + 1, left - 1, cur, f);
            cur.pop();
        }
    }
    let mut cur = Vec::new();
    rec(blocks, counts, 0, 0, counts[0], &mut cur, f);
}

/// Model section of an experiment config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub n: usize,
    pub r: usize,
    pub q: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pi: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symmetric: Option<SymmetricConfig>,
    /// Entries keyed by comma-separated indices, e.g. `"0,0,1"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tensor: Option<BTreeMap<String, f64>>,
    #[serde(default)]
    pub labels: LabelMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymmetricConfig {
    pub c_in: f64,
    pub c_out: f64,
}

impl ModelConfig {
    pub fn symmetric(n: usize, r: usize, q: usize, c_in: f64, c_out: f64) -> Self {
        ModelConfig {
            n,
            r,
            q,
            pi: None,
            symmetric: Some(SymmetricConfig { c_in, c_out }),
            tensor: None,
            labels: LabelMode::Deterministic,
        }
    }

    pub fn to_params(&self) -> Result<ModelParams> {
        let tensor = match (&self.symmetric, &self.tensor) {
            (Some(s), None) => symmetric_tensor(self.r, self.q, s.c_in, s.c_out)?,
            (None, Some(t)) => {
                let entries = t
                    .iter()
                    .map(|(k, &v)| {
                        let key = k
                            .split(',')
                            .map(|s| s.trim().parse::<usize>())
                            .collect::<std::result::Result<Vec<_>, _>>()
                            .map_err(|_| Error::Config(format!("bad tensor key {k:?}")))?;
                        Ok((key, v))
                    })
                    .collect::<Result<Vec<_>>>()?;
                ProbabilityTensor::new(self.r, self.q, entries)?
            }
            _ => {
                return Err(Error::Config(
                    "model needs exactly one of `symmetric` or `tensor`".into(),
                ))
            }
        };
        let pi = self
            .pi
            .clone()
            .unwrap_or_else(|| vec![1.0 / self.r as f64; self.r]);
        ModelParams::new(tensor, pi, self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_entries() {
        let t = symmetric_tensor(2, 3, 12.0, 4.0).unwrap();
        assert_eq!(t.get(&[0, 0, 0]), 12.0);
        assert_eq!(t.get(&[0, 0, 1]), 4.0);
        assert_eq!(t.get(&[1, 0, 1]), 4.0);
        assert!(symmetric_tensor(2, 3, -1.0, 4.0).is_err());
    }

    #[test]
    fn degree_of_symmetric_models() {
        let p = ModelParams::symmetric(100, 2, 3, 12.0, 4.0).unwrap();
        assert!((validate_params(&p).unwrap() - 6.0).abs() < 1e-12);
        let p = ModelParams::symmetric(100, 4, 4, 130.0, 2.0).unwrap();
        assert!((validate_params(&p).unwrap() - 4.0).abs() < 1e-12);
        let er = ModelParams::symmetric(100, 3, 3, 5.0, 5.0).unwrap();
        assert!((validate_params(&er).unwrap() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn perturbed_tensor_fails_validation() {
        let mut entries: Vec<_> = symmetric_tensor(2, 3, 12.0, 4.0)
            .unwrap()
            .values
            .into_iter()
            .collect();
        entries[0].1 = 13.0;
        let t = ProbabilityTensor::new(2, 3, entries).unwrap();
        let p = ModelParams::new(t, vec![0.5, 0.5], 100).unwrap();
        match validate_params(&p) {
            Err(Error::DegreeMismatch {
                block_a, block_b, ..
            }) => assert_eq!((block_a, block_b), (0, 1)),
            other => panic!("expected mismatch, got {other:?}"),
        }
    }

    #[test]
    fn multiset_helpers() {
        assert_eq!(multisets(3, 2).len(), 6);
        assert_eq!(multisets(2, 0), vec![Vec::<usize>::new()]);
        assert_eq!(multiplicity(&[0, 0, 1]), 3.0);
        assert_eq!(binomial_f64(10, 3), 120.0);
        assert_eq!(binomial_u128(10, 3), 120);
    }

    #[test]
    fn largest_remainder_sizes() {
        assert_eq!(block_sizes(4, &[0.5, 0.5]), vec![2, 2]);
        assert_eq!(block_sizes(5, &[0.5, 0.5]), vec![3, 2]);
        assert_eq!(block_sizes(10, &[0.25, 0.25, 0.5]), vec![3, 2, 5]);
    }

    #[test]
    fn deterministic_labels_have_exact_counts() {
        let p = ModelParams::symmetric(4, 2, 3, 1.0, 1.0).unwrap();
        let l = assign_labels(&p, LabelMode::Deterministic, 1).unwrap();
        assert_eq!(l.counts(), vec![2, 2]);
        let p5 = ModelParams::symmetric(5, 2, 3, 1.0, 1.0).unwrap();
        let a = assign_labels(&p5, LabelMode::Deterministic, 3).unwrap();
        assert_eq!(a, assign_labels(&p5, LabelMode::Deterministic, 3).unwrap());
        let mut c = a.counts();
        c.sort_unstable();
        assert_eq!(c, vec![2, 3]);
    }

    #[test]
    fn empty_block_is_an_error() {
        let t = symmetric_tensor(3, 3, 1.0, 1.0).unwrap();
        let p = ModelParams::new(t, vec![0.98, 0.01, 0.01], 10).unwrap();
        assert!(matches!(
            assign_labels(&p, LabelMode::Deterministic, 0),
            Err(Error::EmptyBlock { .. })
        ));
    }

    #[test]
    fn iid_labels_concentrate() {
        let p = ModelParams::symmetric(100_000, 2, 3, 1.0, 1.0).unwrap();
        let l = assign_labels(&p, LabelMode::Iid, 9).unwrap();
        let frac = l.counts()[0] as f64 / 1e5;
        assert!((frac - 0.5).abs() < 0.01);
    }

    #[test]
    fn zero_tensor_gives_empty_graph() {
        let p = ModelParams::symmetric(50, 2, 3, 0.0, 0.0).unwrap();
        let l = assign_labels(&p, LabelMode::Deterministic, 0).unwrap();
        assert_eq!(sample(&p, &l, 0).unwrap().m(), 0);
    }

    #[test]
    fn sampler_is_seed_deterministic_and_simple() {
        let p = ModelParams::symmetric(300, 3, 3, 9.0, 3.0).unwrap();
        let l = assign_labels(&p, LabelMode::Deterministic, 5).unwrap();
        let g1 = sample(&p, &l, 11).unwrap();
        let g2 = sample(&p, &l, 11).unwrap();
        assert_eq!(g1, g2);
        // Re-validating through the checked constructor catches duplicates or
        // repeated vertices.
        let edges = g1.edges().map(<[usize]>::to_vec).collect();
        assert_eq!(Hypergraph::new(300, 3, edges).unwrap(), g1);
    }

    #[test]
    fn profile_enumeration_counts() {
        let blocks = vec![vec![0, 1, 2], vec![3, 4]];
        let mut seen = Vec::new();
        for_each_profile_subset(&blocks, &[2, 1], &mut |e| seen.push(e.to_vec()));
        assert_eq!(seen.len(), 6);
        assert!(seen.contains(&vec![1, 2, 4]));
    }

    #[test]
    fn config_parses_tensor_keys() {
        let mut t = BTreeMap::new();
        t.insert("0,0".to_string(), 3.0);
        t.insert("1,1".to_string(), 3.0);
        t.insert("0,1".to_string(), 1.0);
        let cfg = ModelConfig {
            n: 10,
            r: 2,
            q: 2,
            pi: None,
            symmetric: None,
            tensor: Some(t),
            labels: LabelMode::Deterministic,
        };
        let p = cfg.to_params().unwrap();
        assert_eq!(p.tensor.get(&[1, 0]), 1.0);
        assert!((validate_params(&p).unwrap() - 2.0).abs() < 1e-12);
    }
}
