//! Zero initial data and time-independent sources of Sobolev order `γ`.
//! The first rate saturates at `−(1+2α)` once `γ ≥ 1`.
//!
//! `cargo run --release --example example53 -- [h_exponent]`

use tfspec::experiment::{run, ExperimentConfig, Kind};

fn main() -> tfspec::Result<()> {
    let mut config = ExperimentConfig::preset(Kind::Example53);
    config.gamma = vec![-0.2, 0.5, 1.2];
    config.checks.e2 = true;
    config.h_exponent = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(8);
    let outcome = run(&config)?;
    print!("{}{}", outcome.summary(), outcome.csv());
    Ok(())
}
