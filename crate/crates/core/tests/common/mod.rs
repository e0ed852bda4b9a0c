#![allow(dead_code)]

use hynb::model::{assign_labels, sample, LabelMode, Labels, ModelParams};
use hynb::rng::rng_from_seed;
use hynb::Hypergraph;
use rand::Rng;

pub const FIG1: (usize, usize, f64, f64) = (4, 4, 130.0, 2.0);

/// Instance of the symmetric model with deterministic block sizes.
pub fn symmetric_instance(
    n: usize,
    r: usize,
    q: usize,
    c_in: f64,
    c_out: f64,
    seed: u64,
) -> (Hypergraph, Labels, ModelParams) {
    let params = ModelParams::symmetric(n, r, q, c_in, c_out).unwrap();
    let labels = assign_labels(&params, LabelMode::Deterministic, seed).unwrap();
    let g = sample(&params, &labels, seed).unwrap();
    (g, labels, params)
}

pub fn fig1_instance(n: usize, seed: u64) -> (Hypergraph, Labels, ModelParams) {
    let (r, q, c_in, c_out) = FIG1;
    symmetric_instance(n, r, q, c_in, c_out, seed)
}

/// Random symmetric model with `n` in `n_range`, `q` in `qs`, `r` in 1..=3 (1 meaning no community structure) and
/// mean degree around `degree`.
pub fn random_instance(
    seed: u64,
    n_range: std::ops::RangeInclusive<usize>,
    qs: &[usize],
    degree: f64,
) -> Hypergraph {
    let mut rng = rng_from_seed(seed ^ 0x5eed);
    let n = rng.random_range(n_range);
    let q = qs[rng.random_range(0..qs.len())];
    let r = rng.random_range(1..=3usize);
    let d = degree * rng.random_range(0.6..1.4);
    let rq = (r as f64).powi(q as i32 - 1);
    // Split d between in- and out-block intensities.
    let share = rng.random_range(0.0..1.0);
    let c_in = d * (1.0 + share * (rq - 1.0));
    let c_out = (d - c_in / rq) / (1.0 - 1.0 / rq);
    // r = 1 stands for the uniform model, written as two identical blocks.
    let (r, c_in, c_out) = if r == 1 {
        (2, d, d)
    } else {
        (r, c_in, c_out.max(0.0))
    };
    symmetric_instance(n, r, q, c_in, c_out, seed).0
}

pub fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}
