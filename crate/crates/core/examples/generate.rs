//! Sample a hypergraph from the symmetric block model and print its basic
//! statistics.
//!
//! cargo run --example generate -- [n] [seed]

use hynb::model::{assign_labels, sample, LabelMode, ModelParams};
use hynb::signal::signal_spectrum;

fn main() -> hynb::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(2000, |s| s.parse().expect("n"));
    let seed: u64 = args.next().map_or(0, |s| s.parse().expect("seed"));

    let params = ModelParams::symmetric(n, 4, 4, 130.0, 2.0)?;
    let labels = assign_labels(&params, LabelMode::Deterministic, seed)?;
    let g = sample(&params, &labels, seed)?;
    let spec = signal_spectrum(&params)?;

    println!("n = {}, q = {}, m = {}", g.n(), g.q(), g.m());
    println!("mean degree {:.3} (model d = {})", g.mean_degree(), spec.d);
    println!("block sizes {:?}", labels.counts());
    let isolated = g.degrees().iter().filter(|&&d| d == 0).count();
    println!("isolated vertices {isolated}");
    let mut text = Vec::new();
    g.write_text(&mut text).expect("write to memory");
    let head: Vec<&str> = std::str::from_utf8(&text)
        .unwrap()
        .lines()
        .take(4)
        .collect();
    println!("first lines of the text format:\n{}", head.join("\n"));
    Ok(())
}
