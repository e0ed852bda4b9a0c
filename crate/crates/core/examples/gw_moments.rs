//! Monte-Carlo check of the first and second moments of Galton-Watson
//! hypertree functionals against their closed forms.
//!
//! cargo run --release --example gw_moments -- [trials]

use hynb::gw::{increment_prefactors, mc_moments};
use hynb::model::ModelParams;
use hynb::signal::signal_spectrum;

fn main() -> hynb::Result<()> {
    let trials: usize = std::env::args()
        .nth(1)
        .map_or(20_000, |s| s.parse().expect("trials"));
    let params = ModelParams::symmetric(1000, 2, 3, 12.0, 4.0)?;
    let spec = signal_spectrum(&params)?;
    println!("mu = {:?}, d = {}", spec.mu, spec.d);

    for (i, j) in [(0, 0), (0, 1), (1, 1)] {
        let rep = mc_moments(&spec, &params, i, j, 3, trials, 1)?;
        println!(
            "(i, j) = ({i}, {j}): {} moments, max |z| = {:.2}",
            rep.rows.len(),
            rep.max_abs_z()
        );
        let worst = rep
            .rows
            .iter()
            .max_by(|a, b| a.z.abs().total_cmp(&b.z.abs()))
            .expect("rows");
        println!(
            "  worst: {:?} t = {} root {:?}: mc {:.4} +- {:.4}, theory {:.4}",
            worst.moment, worst.t, worst.root_type, worst.mc_mean, worst.stderr, worst.theory
        );
    }
    let (printed, derived) = increment_prefactors(3, spec.mu[1], 3);
    println!(
        "increment prefactor at t = 3: (q-1)^(t+1) = {printed}, via the growth rates {derived}"
    );
    Ok(())
}
