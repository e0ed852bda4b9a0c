//! k-means++ with restarts and the permutation-invariant overlap score.
//!
//! cargo run --example kmeans

use hynb::detect::{kmeans, overlap, KMeansOptions};
use hynb::rng::rng_from_seed;
use rand::Rng;

fn main() -> hynb::Result<()> {
    let mut rng = rng_from_seed(3);
    let centers = [[0.0, 0.0], [4.0, 0.0], [2.0, 3.0]];
    let truth: Vec<usize> = (0..900).map(|v| v % 3).collect();
    for spread in [0.5, 1.5, 3.0] {
        let pts: Vec<Vec<f64>> = truth
            .iter()
            .map(|&b| {
                centers[b]
                    .iter()
                    .map(|c| c + spread * (rng.random::<f64>() - 0.5) * 2.0)
                    .collect()
            })
            .collect();
        let km = kmeans(&pts, 3, &KMeansOptions::default())?;
        println!(
            "spread {spread}: inertia {:.1}, overlap {:.3}",
            km.inertia,
            overlap(&truth, &km.assignment, 3)
        );
    }
    Ok(())
}
