use hynb::gw::{
    h_functional, mc_moments, partial_h, sample_generation_counts, sample_tree, tree_functional,
    OffspringLaw,
};
use hynb::model::{Labels, ModelParams};
use hynb::nb::{lift_chi, Direction, NBOperator};
use hynb::rng::rng_from_seed;
use hynb::signal::signal_spectrum;
use proptest::prelude::*;

fn params() -> ModelParams {
    ModelParams::symmetric(1000, 2, 3, 12.0, 4.0).unwrap()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn vertex_derivative_sums_to_nb_inner_product(seed in any::<u64>(), root in 0usize..2, t in 0usize..3) {
        let p = ModelParams::symmetric(1000, 2, 3, 3.0, 1.0).unwrap();
        let spec = signal_spectrum(&p).unwrap();
        let law = OffspringLaw::new(&p).unwrap();
        let tree = sample_tree(&law, root, 5, 100_000, seed).unwrap();
        prop_assume!(!tree.edges.is_empty());
        let g = tree.to_hypergraph().unwrap();
        let labels = Labels::new(tree.types.clone(), 2).unwrap();
        let op = NBOperator::new(&g);
        for i in 0..2 {
            let chi_i = lift_chi(&spec.phi[i], &labels, &g);
            let bp = op.apply_pow(&op.apply_p(&chi_i), t, Direction::Forward);
            for j in 0..2 {
                let chi_j = lift_chi(&spec.phi[j], &labels, &g);
                let lhs: f64 = (0..g.n())
                    .map(|x| spec.phi[j][tree.types[x]] * partial_h(&g, &tree.types, x, &spec.phi[i], t))
                    .sum();
                let rhs = dot(&chi_j, &bp);
                prop_assert!((lhs - rhs).abs() < 1e-9 * rhs.abs().max(1.0), "i={} j={} t={}: {} vs {}", i, j, t, lhs, rhs);
            }
        }
    }

    #[test]
    fn h_at_the_root_is_the_tree_functional(seed in any::<u64>(), t in 0usize..4) {
        let p = params();
        let spec = signal_spectrum(&p).unwrap();
        let law = OffspringLaw::new(&p).unwrap();
        let tree = sample_tree(&law, 0, 4, 1_000_000, seed).unwrap();
        let g = tree.to_hypergraph().unwrap();
        let h = h_functional(&g, &tree.types, 0, &spec.phi[1], t);
        let f = tree_functional(&tree, &spec.phi[1], t).unwrap();
        prop_assert!((h - f).abs() < 1e-9 * f.abs().max(1.0));
    }

    #[test]
    fn extinct_lines_stay_extinct(seed in any::<u64>()) {
        let law = OffspringLaw::new(&ModelParams::symmetric(1000, 2, 3, 1.2, 0.4).unwrap()).unwrap();
        let mut rng = rng_from_seed(seed);
        let gens = sample_generation_counts(&law, 1, 8, 1_000_000, &mut rng).unwrap();
        let sizes: Vec<u64> = gens.iter().map(|g| g.iter().sum()).collect();
        prop_assert_eq!(sizes[0], 1);
        for w in sizes.windows(2) {
            prop_assert!(w[0] > 0 || w[1] == 0);
            // Each node has (q - 1) children per hyperedge.
            prop_assert_eq!(w[1] % 2, 0);
        }
    }
}

#[test]
fn generation_sizes_grow_geometrically() {
    let p = params();
    let law = OffspringLaw::new(&p).unwrap();
    let trials = 20_000;
    let mut rng = rng_from_seed(11);
    let mut sums = [0.0f64; 4];
    let mut sq = [0.0f64; 4];
    for _ in 0..trials {
        let gens = sample_generation_counts(&law, 0, 3, 1_000_000, &mut rng).unwrap();
        for (t, g) in gens.iter().enumerate() {
            let s = g.iter().sum::<u64>() as f64;
            sums[t] += s;
            sq[t] += s * s;
        }
    }
    for t in 0..4 {
        let mean = sums[t] / trials as f64;
        let se = ((sq[t] / trials as f64 - mean * mean) / trials as f64).sqrt();
        let expect = 12f64.powi(t as i32);
        assert!(
            (mean - expect).abs() < 4.0 * se.max(1e-12),
            "t={t}: {mean} vs {expect}"
        );
    }
}

#[test]
fn sampled_tree_and_counts_agree() {
    let p = params();
    let law = OffspringLaw::new(&p).unwrap();
    let tree = sample_tree(&law, 1, 3, 1_000_000, 4).unwrap();
    let counts = tree.generation_counts();
    for (t, c) in counts.iter().enumerate() {
        let ones = tree_functional(&tree, &[1.0, 1.0], t).unwrap();
        assert_eq!(ones, c.iter().sum::<u64>() as f64);
    }
    assert_eq!(tree.root_type(), 1);
    assert!(sample_tree(&law, 2, 3, 1000, 0).is_err());
    assert!(tree_functional(&tree, &[1.0, 1.0], 4).is_err());
}

#[test]
fn moment_reports_are_reproducible() {
    let p = params();
    let spec = signal_spectrum(&p).unwrap();
    let a = mc_moments(&spec, &p, 0, 1, 2, 3000, 5).unwrap();
    let b = mc_moments(&spec, &p, 0, 1, 2, 3000, 5).unwrap();
    assert_eq!(a.rows.len(), b.rows.len());
    for (x, y) in a.rows.iter().zip(&b.rows) {
        assert_eq!(x.mc_mean, y.mc_mean);
        assert_eq!(x.theory, y.theory);
    }
    assert!(a.passed(5.0), "max |z| {}", a.max_abs_z());
    let mut csv = Vec::new();
    a.write_csv(&mut csv).unwrap();
    let text = String::from_utf8(csv).unwrap();
    assert!(
        text.starts_with("moment,i,j,t"),
        "{}",
        text.lines().next().unwrap()
    );
}
