//! Exact integer checks of the algebraic relations between B, P, S, T, A
//! and D.
//!
//! cargo run --example identities

use hynb::model::{assign_labels, sample, LabelMode, ModelParams};
use hynb::nb::identity_deviations;

fn main() -> hynb::Result<()> {
    for q in 2..=5 {
        let params = ModelParams::symmetric(150, 3, q, 12.0, 2.0)?;
        let labels = assign_labels(&params, LabelMode::Deterministic, 7)?;
        let g = sample(&params, &labels, 7)?;
        let rep = identity_deviations(&g, 5, 3, 7);
        println!(
            "q = {q}, m = {}: {}",
            g.m(),
            if rep.passed() {
                "all exact"
            } else {
                "VIOLATED"
            }
        );
        for (name, dev) in &rep.deviations {
            println!("  {name:<28} {dev}");
        }
    }
    Ok(())
}
