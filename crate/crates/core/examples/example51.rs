//! Manufactured solution `u = t^β sin πx`: temporal error rates of the
//! space-time method against a high-degree reference on the same mesh.
//!
//! `cargo run --release --example example51 -- [h_exponent]`

use tfspec::experiment::{run, ExperimentConfig, Kind};

fn main() -> tfspec::Result<()> {
    let mut config = ExperimentConfig::preset(Kind::Example51);
    if let Some(h) = std::env::args().nth(1).and_then(|s| s.parse().ok()) {
        config.h_exponent = h;
    }
    eprint!("{}", config.validate()?);
    let outcome = run(&config)?;
    print!("{}{}", outcome.summary(), outcome.csv());
    Ok(())
}
