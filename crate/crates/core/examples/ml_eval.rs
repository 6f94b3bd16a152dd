//! Mittag-Leffler values `E_{α,β}(−t)` on a log grid, with both evaluation
//! routes side by side where each is available.
//!
//! `cargo run --release --example ml_eval -- 0.5 0.8`

use tfspec::special::{ml, ml_integral, ml_series, MlArgs};

fn main() -> tfspec::Result<()> {
    let args: Vec<f64> = std::env::args().skip(1).filter_map(|s| s.parse().ok()).collect();
    let alpha = args.first().copied().unwrap_or(0.5);
    let beta = args.get(1).copied().unwrap_or(1.0);

    println!("{:>10} {:>24} {:>24} {:>24}", "t", "E(-t)", "series", "integral");
    for j in 0..=16 {
        let t = 0.01 * 10f64.powf(j as f64 / 4.0);
        let a = MlArgs::new(alpha, beta, t)?;
        let series = ml_series(a, 1e-17).map(|v| format!("{v:.16e}")).unwrap_or_else(|_| "-".into());
        let integral = ml_integral(a).map(|v| format!("{v:.16e}")).unwrap_or_else(|_| "-".into());
        println!("{t:>10.4} {:>24.16e} {series:>24} {integral:>24}", ml(a)?);
    }
    Ok(())
}
