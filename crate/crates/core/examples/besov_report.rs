//! Jacobi-pairing decay of `E_{α,1}(−t^α)` and truncated Besov norms just
//! below and above the critical index `1 + 2α`.

use tfspec::experiment::{run, ExperimentConfig, Kind};

fn main() -> tfspec::Result<()> {
    let outcome = run(&ExperimentConfig::preset(Kind::BesovReport))?;
    print!("{}", outcome.summary());
    Ok(())
}
