//! No forcing, initial data `u₀ = θ x(1−x)^{γ−1/2} + (1−θ) sin πx`. Runs the
//! `θ = 0` preset and one `θ = 1` case.
//!
//! `cargo run --release --example example52 -- [h_exponent]`

use tfspec::experiment::{run, Checks, ExperimentConfig, Kind};

fn main() -> tfspec::Result<()> {
    let h = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(8);

    let mut flat = ExperimentConfig::preset(Kind::Example52);
    flat.h_exponent = h;

    let mut rough = ExperimentConfig::new(Kind::Example52);
    rough.alpha = vec![0.5];
    rough.theta = 1.0;
    rough.gamma = vec![1.5];
    rough.h_exponent = h;
    rough.checks = Checks { e1: true, e2: false };
    rough.tolerance = 0.2;

    for config in [flat, rough] {
        let outcome = run(&config)?;
        print!("{}{}", outcome.summary(), outcome.csv());
    }
    Ok(())
}
