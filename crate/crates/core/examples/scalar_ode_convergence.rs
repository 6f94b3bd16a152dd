//! Spectral Galerkin solution of `D^α(y − 1) + y = 0` against the
//! Mittag-Leffler solution, with the fitted L² rate.

use tfspec::frac_ode::{solve, FracOdeProblem};
use tfspec::norms::{rate_fit, scalar_l2_error};
use tfspec::special::exact_homogeneous;

fn main() -> tfspec::Result<()> {
    for alpha in [0.3, 0.5, 0.7] {
        let problem = FracOdeProblem::homogeneous(alpha, 1.0, 1.0, 1.0)?;
        let mut pairs = Vec::new();
        println!("alpha = {alpha}");
        for m in 8..=64 {
            let s = solve(&problem, m)?;
            let e = scalar_l2_error(&s, |t| exact_homogeneous(&problem.data, t).unwrap())?;
            if m % 8 == 0 {
                println!("  M={m:3}  L2 error {e:.4e}");
            }
            pairs.push((m, e));
        }
        let fit = rate_fit(&pairs)?;
        println!("  slope {:.3}, predicted {:.3}", fit.slope, -(1.0 + 2.0 * alpha));
    }
    Ok(())
}
