use hynb::eigen::{bulk_radius, dense_spectrum, leading_outliers, topk, ArnoldiOptions};
use hynb::rng::rng_from_seed;
use hynb::sparse::{CsrMatrix, DenseMatrix, MatVec};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

fn random_sparse(n: usize, per_row: usize, seed: u64) -> CsrMatrix<f64> {
    let mut rng = rng_from_seed(seed);
    let mut trip = Vec::new();
    for i in 0..n {
        for _ in 0..per_row {
            trip.push((i, rng.random_range(0..n), rng.random_range(-1.0..1.0)));
        }
    }
    CsrMatrix::from_triplets(n, n, &trip)
}

/// Fully dense, so its eigenvalues are simple with probability one.
fn random_dense(n: usize, seed: u64) -> DenseMatrix {
    let mut rng = rng_from_seed(seed);
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..n).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    DenseMatrix::from_rows(&rows)
}

fn nalgebra_eigenvalues(a: &DenseMatrix) -> Vec<Complex64> {
    let n = a.rows();
    let m = DMatrix::from_fn(n, n, |i, j| a[(i, j)]);
    m.complex_eigenvalues()
        .iter()
        .map(|z| Complex64::new(z.re, z.im))
        .collect()
}

fn sorted_by_modulus(mut v: Vec<Complex64>) -> Vec<Complex64> {
    v.sort_by(|a, b| {
        b.norm()
            .total_cmp(&a.norm())
            .then(b.re.total_cmp(&a.re))
            .then(b.im.total_cmp(&a.im))
    });
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn dense_spectrum_matches_nalgebra(n in 1usize..40, seed in any::<u64>()) {
        let a = random_dense(n, seed);
        let ours = sorted_by_modulus(dense_spectrum(&a, false).unwrap().values);
        let theirs = sorted_by_modulus(nalgebra_eigenvalues(&a));
        prop_assert_eq!(ours.len(), n);
        for z in &ours {
            let nearest = theirs.iter().map(|w| (w - z).norm()).fold(f64::INFINITY, f64::min);
            prop_assert!(nearest < 1e-7, "{z} not found");
        }
        // Conjugate pairs come together.
        for z in ours.iter().filter(|z| z.im.abs() > 1e-9) {
            prop_assert!(ours.iter().any(|w| (w - z.conj()).norm() < 1e-7));
        }
    }

    #[test]
    fn dense_eigenvectors_satisfy_the_equation(n in 1usize..30, seed in any::<u64>()) {
        let a = random_dense(n, seed);
        let eig = dense_spectrum(&a, true).unwrap();
        for (lambda, v) in eig.values.iter().zip(eig.vectors.unwrap()) {
            let norm: f64 = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            prop_assert!((norm - 1.0).abs() < 1e-8);
            for i in 0..n {
                let av: Complex64 = (0..n).map(|j| v[j] * a[(i, j)]).sum();
                prop_assert!((av - lambda * v[i]).norm() < 1e-6 * lambda.norm().max(1.0));
            }
        }
    }
}

#[test]
fn arnoldi_matches_dense_on_larger_matrices() {
    for seed in 0..5 {
        let a = random_sparse(400, 5, seed);
        let dense = sorted_by_modulus(dense_spectrum(&a.to_dense(), false).unwrap().values);
        // Every reported pair is a true eigenpair, even with the default
        // subspace.
        let rep = topk(
            &a,
            6,
            &ArnoldiOptions {
                seed,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(rep.converged);
        for (k, z) in rep.ritz_values.iter().enumerate() {
            let nearest = dense
                .iter()
                .map(|w| (w - z).norm())
                .fold(f64::INFINITY, f64::min);
            assert!(nearest < 1e-6, "seed {seed}: {z} is not an eigenvalue");
            assert!(rep.residuals[k] < 1e-6 * z.norm().max(1.0));
        }
        assert!((rep.ritz_values[0].norm() - dense[0].norm()).abs() < 1e-6);
        // The bulk of a random matrix is crowded near its edge; a wider
        // subspace resolves the ordering.
        let wide = ArnoldiOptions {
            seed,
            subspace_dim: Some(80),
            ..Default::default()
        };
        let rep = topk(&a, 6, &wide).unwrap();
        for (k, z) in rep.ritz_values.iter().enumerate() {
            assert!(
                (z.norm() - dense[k].norm()).abs() < 1e-6,
                "seed {seed}, k {k}: {z} vs {}",
                dense[k]
            );
        }
    }
}

#[test]
fn arnoldi_is_reproducible() {
    let a = random_sparse(500, 4, 3);
    let opts = ArnoldiOptions {
        seed: 9,
        ..Default::default()
    };
    let r1 = topk(&a, 5, &opts).unwrap();
    let r2 = topk(&a, 5, &opts).unwrap();
    assert_eq!(r1.ritz_values, r2.ritz_values);
}

#[test]
fn outliers_of_a_planted_spectrum() {
    // Diagonal 10, 8, then a bulk of modulus < 2.
    let n = 300;
    let mut trip = vec![(0, 0, 10.0), (1, 1, 8.0)];
    let mut rng = rng_from_seed(4);
    for i in 2..n {
        trip.push((i, i, rng.random_range(-1.9..1.9)));
    }
    let a = CsrMatrix::from_triplets(n, n, &trip);
    // bulk_radius(q = 2, d = 4) = 2.
    assert_eq!(bulk_radius(2, 4.0), 2.0);
    let rep = leading_outliers(&a, 2, 4.0, 0.1, 2, 32, &ArnoldiOptions::default()).unwrap();
    assert_eq!(rep.informative, vec![0, 1]);
    assert_eq!(a.dim(), n);
}
