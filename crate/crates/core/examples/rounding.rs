//! Algorithm 1: randomized rounding of the second eigenvector for two
//! blocks, across truncation thresholds K.
//!
//! cargo run --release --example rounding -- [n] [seed]

use hynb::detect::{detect_alg1, overlap, round_two_blocks};
use hynb::eigen::ArnoldiOptions;
use hynb::model::{assign_labels, sample, LabelMode, ModelParams};
use hynb::signal::symmetric_from_margin;

fn main() -> hynb::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(5000, |s| s.parse().expect("n"));
    let seed: u64 = args.next().map_or(0, |s| s.parse().expect("seed"));

    // Twice the Kesten-Stigum threshold at degree 6.
    let (c_in, c_out) = symmetric_from_margin(2, 3, 6.0, 1.0)?;
    let params = ModelParams::symmetric(n, 2, 3, c_in, c_out)?;
    let labels = assign_labels(&params, LabelMode::Deterministic, seed)?;
    let g = sample(&params, &labels, seed)?;

    let out = detect_alg1(
        &g,
        10.0,
        seed,
        &ArnoldiOptions {
            seed,
            ..Default::default()
        },
    )?;
    println!("second eigenvalue {:.4}", out.lambda);
    let mean_abs = out.x.iter().map(|x| x.abs()).sum::<f64>() / n as f64;
    println!("mean |x(v)| = {mean_abs:.3} (squared norm n)");
    for k in [1.0, 2.5, 5.0, 10.0, 100.0] {
        let part = round_two_blocks(&out.x, k, seed)?;
        println!(
            "K = {k:>5}: overlap {:.4}",
            overlap(&labels.sigma, &part.assignment, 2)
        );
    }
    Ok(())
}
