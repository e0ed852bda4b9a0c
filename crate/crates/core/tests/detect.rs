mod common;

use hynb::detect::{
    best_matching_hits, detect_alg1, detect_alg2, kmeans, overlap, round_two_blocks,
    rounding_probability, vertex_coordinates, DetectOptions, KMeansOptions,
};
use hynb::eigen::ArnoldiOptions;
use hynb::rng::rng_from_seed;
use hynb::Hypergraph;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

use common::{fig1_instance, symmetric_instance};

fn labels(n: usize, r: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..r, n)
}

proptest! {
    #[test]
    fn overlap_ignores_block_names(truth in labels(60, 4), pred in labels(60, 4), seed in any::<u64>()) {
        let mut perm: Vec<usize> = (0..4).collect();
        perm.shuffle(&mut rng_from_seed(seed));
        let renamed: Vec<usize> = pred.iter().map(|&b| perm[b]).collect();
        prop_assert_eq!(overlap(&truth, &pred, 4), overlap(&truth, &renamed, 4));
        prop_assert_eq!(best_matching_hits(&truth, &pred), best_matching_hits(&truth, &renamed));
    }

    #[test]
    fn overlap_ignores_vertex_order(truth in labels(50, 3), pred in labels(50, 3), seed in any::<u64>()) {
        let mut order: Vec<usize> = (0..50).collect();
        order.shuffle(&mut rng_from_seed(seed));
        let t2: Vec<usize> = order.iter().map(|&v| truth[v]).collect();
        let p2: Vec<usize> = order.iter().map(|&v| pred[v]).collect();
        prop_assert_eq!(overlap(&truth, &pred, 3), overlap(&t2, &p2, 3));
        prop_assert!(overlap(&truth, &pred, 3) <= 1.0);
        prop_assert!((overlap(&truth, &truth, 3) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coordinates_ignore_global_phase(
        re in prop::collection::vec(-1.0f64..1.0, 12),
        theta in 0.0f64..std::f64::consts::TAU,
    ) {
        prop_assume!(re.iter().skip(6).any(|x| x.abs() > 0.05));
        let v: Vec<Complex64> = re.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let c = Complex64::from_polar(1.0, theta);
        let a = vertex_coordinates(&v, 6).unwrap();
        let b = vertex_coordinates(&v.iter().map(|z| z * c).collect::<Vec<_>>(), 6).unwrap();
        let flipped = vertex_coordinates(&v.iter().map(|z| -z).collect::<Vec<_>>(), 6).unwrap();
        let sq: f64 = a.iter().map(|x| x * x).sum();
        prop_assert!((sq - 6.0).abs() < 1e-9);
        for k in 0..6 {
            prop_assert!((a[k] - b[k]).abs() < 1e-9);
            prop_assert!((a[k] - flipped[k]).abs() < 1e-9);
        }
    }

    #[test]
    fn rounding_probability_is_a_probability(x in -100.0f64..100.0, k in 0.01f64..50.0) {
        let p = rounding_probability(x, k);
        prop_assert!((0.0..=1.0).contains(&p));
        prop_assert!((p + rounding_probability(-x, k) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn random_predictions_have_no_overlap() {
    let n = 10_000;
    let mut rng = rng_from_seed(1);
    for r in [2, 3, 5] {
        let truth: Vec<usize> = (0..n).map(|v| v % r).collect();
        let pred: Vec<usize> = (0..n).map(|_| rng.random_range(0..r)).collect();
        let ov = overlap(&truth, &pred, r);
        assert!(ov.abs() < 0.03, "r = {r}: {ov}");
    }
}

#[test]
fn large_threshold_makes_rounding_uninformative() {
    let n = 10_000;
    let truth: Vec<usize> = (0..n).map(|v| v % 2).collect();
    let x: Vec<f64> = truth
        .iter()
        .map(|&b| if b == 0 { 1.0 } else { -1.0 })
        .collect();
    let sharp = round_two_blocks(&x, 1.0, 3).unwrap();
    assert_eq!(overlap(&truth, &sharp.assignment, 2), 1.0);
    let blunt = round_two_blocks(&x, 1e6, 3).unwrap();
    assert!(overlap(&truth, &blunt.assignment, 2) < 0.03);
    // With |x| = 1 the expected overlap is 1 / K.
    let mid = round_two_blocks(&x, 4.0, 3).unwrap();
    assert!((overlap(&truth, &mid.assignment, 2) - 0.25).abs() < 0.03);
    assert!(round_two_blocks(&x, 0.0, 3).is_err());
}

#[test]
fn kmeans_recovers_planted_blocks() {
    let mut rng = rng_from_seed(2);
    let truth: Vec<usize> = (0..600).map(|v| v % 3).collect();
    let pts: Vec<Vec<f64>> = truth
        .iter()
        .map(|&b| {
            vec![
                3.0 * b as f64 + rng.random_range(-0.5..0.5),
                rng.random_range(-0.5..0.5),
            ]
        })
        .collect();
    let km = kmeans(&pts, 3, &KMeansOptions::default()).unwrap();
    assert_eq!(overlap(&truth, &km.assignment, 3), 1.0);
    assert!(kmeans(&pts, 0, &KMeansOptions::default()).is_err());
}

#[test]
fn algorithm_two_on_the_four_block_example() {
    let (g, labels, _) = fig1_instance(2000, 3);
    let det = detect_alg2(&g, None, &DetectOptions::default()).unwrap();
    assert!(!det.below_threshold);
    assert_eq!(det.partition.k, 4);
    assert_eq!(det.report.informative.len(), 4);
    let ov = overlap(&labels.sigma, &det.partition.assignment, 4);
    assert!(ov > 0.4, "overlap {ov}");
    let again = detect_alg2(&g, None, &DetectOptions::default()).unwrap();
    assert_eq!(det.partition, again.partition);
}

#[test]
fn algorithm_two_without_structure_reports_below_threshold() {
    let (g, _, _) = symmetric_instance(2000, 2, 3, 6.0, 6.0, 4);
    let det = detect_alg2(&g, None, &DetectOptions::default()).unwrap();
    assert!(det.below_threshold);
    assert!(det.partition.assignment.iter().all(|&b| b == 0));
}

#[test]
fn algorithm_one_beats_chance_with_a_small_threshold() {
    let (g, labels, _) = symmetric_instance(4000, 2, 3, 16.0, 2.0, 5);
    let out = detect_alg1(&g, 2.0, 5, &ArnoldiOptions::default()).unwrap();
    let sq: f64 = out.x.iter().map(|x| x * x).sum();
    assert!((sq - 4000.0).abs() < 1e-6);
    assert!(overlap(&labels.sigma, &out.partition.assignment, 2) > 0.1);
}

#[test]
fn degenerate_inputs() {
    if let Ok(empty) = Hypergraph::new(0, 3, vec![]) {
        assert!(detect_alg2(&empty, None, &DetectOptions::default()).is_err());
    }
    let edgeless = Hypergraph::new(5, 3, vec![]).unwrap();
    assert!(
        detect_alg2(&edgeless, None, &DetectOptions::default())
            .unwrap()
            .below_threshold
    );
    assert!(detect_alg2(&edgeless, Some(0), &DetectOptions::default()).is_err());
    assert!(detect_alg1(&edgeless, 10.0, 0, &ArnoldiOptions::default()).is_err());
}
