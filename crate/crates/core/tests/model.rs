mod common;

use hynb::model::{
    assign_labels, sample, symmetric_tensor, validate_params, LabelMode, ModelParams,
};
use hynb::signal::symmetric_degree;
use proptest::prelude::*;

use common::symmetric_instance;

#[test]
fn sampler_is_reproducible() {
    let (a, la, _) = symmetric_instance(800, 3, 3, 20.0, 3.0, 11);
    let (b, lb, _) = symmetric_instance(800, 3, 3, 20.0, 3.0, 11);
    let (c, _, _) = symmetric_instance(800, 3, 3, 20.0, 3.0, 12);
    assert_eq!(a, b);
    assert_eq!(la, lb);
    assert_ne!(a, c);
}

#[test]
fn mean_degree_concentrates() {
    for (r, q, c_in, c_out) in [
        (2, 2, 9.0, 1.0),
        (2, 3, 12.0, 4.0),
        (4, 4, 130.0, 2.0),
        (3, 5, 200.0, 3.0),
    ] {
        let d = symmetric_degree(r, q, c_in, c_out);
        let (g, _, _) = symmetric_instance(20_000, r, q, c_in, c_out, 5);
        // qm / n has standard deviation about sqrt(q d / n).
        let sd = (q as f64 * d / 20_000.0).sqrt();
        assert!(
            (g.mean_degree() - d).abs() < 5.0 * sd,
            "r={r} q={q}: mean degree {} vs {d}",
            g.mean_degree()
        );
    }
}

#[test]
fn block_degrees_match_per_block_means() {
    let (g, labels, params) = symmetric_instance(20_000, 2, 3, 12.0, 4.0, 8);
    let expected = params.block_degrees();
    let degs = g.degrees();
    for (b, block) in labels.blocks().iter().enumerate() {
        let mean = block.iter().map(|&v| degs[v] as f64).sum::<f64>() / block.len() as f64;
        assert!(
            (mean - expected[b]).abs() < 0.15,
            "block {b}: {mean} vs {}",
            expected[b]
        );
    }
}

#[test]
fn non_constant_degree_is_rejected() {
    // Unequal proportions break the constant expected degree condition.
    let t = symmetric_tensor(2, 3, 12.0, 4.0).unwrap();
    let p = ModelParams::new(t, vec![0.7, 0.3], 100).unwrap();
    assert!(validate_params(&p).is_err());
}

#[test]
fn iid_labels_are_reproducible() {
    let p = ModelParams::symmetric(500, 3, 3, 20.0, 3.0).unwrap();
    let a = assign_labels(&p, LabelMode::Iid, 3).unwrap();
    let b = assign_labels(&p, LabelMode::Iid, 3).unwrap();
    assert_eq!(a, b);
    let g1 = sample(&p, &a, 9).unwrap();
    let g2 = sample(&p, &b, 9).unwrap();
    assert_eq!(g1, g2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sampled_graphs_are_simple(seed in any::<u64>(), q in 2usize..=4, n in 20usize..120) {
        let (g, labels, _) = symmetric_instance(n, 2, q, 10.0, 2.0, seed);
        prop_assert_eq!(labels.n(), n);
        let mut edges: Vec<Vec<usize>> = g.edges().map(|e| e.to_vec()).collect();
        for e in &edges {
            prop_assert!(e.windows(2).all(|w| w[0] < w[1]));
        }
        let m = edges.len();
        edges.dedup();
        prop_assert_eq!(edges.len(), m);
    }

    #[test]
    fn deterministic_labels_follow_proportions(n in 10usize..2000, r in 2usize..6) {
        let p = ModelParams::symmetric(n.max(r * 2), r, 3, 10.0, 2.0).unwrap();
        let labels = assign_labels(&p, LabelMode::Deterministic, 0).unwrap();
        let counts = labels.counts();
        let lo = counts.iter().min().unwrap();
        let hi = counts.iter().max().unwrap();
        prop_assert!(hi - lo <= 1);
    }
}
