//! Gauss–Jacobi rules on `(0, T)` and the orthogonality of `S_k^{a,b}`.

use tfspec::jacobi::{eval, gauss_rule, xi, JacobiWeight};

fn main() -> tfspec::Result<()> {
    let weight = JacobiWeight::new(-0.5, 0.25, 2.0)?;
    let rule = gauss_rule(&weight, 8)?;
    println!("8-point rule for (T-t)^(-1/2) t^(1/4) on (0, 2)");
    for (x, w) in rule.nodes().iter().zip(rule.weights()) {
        println!("  {x:.15}  {w:.15}");
    }

    // Exact on polynomials of degree < 16.
    for m in [0, 5, 15] {
        let got = rule.integrate(|t| t.powi(m as i32));
        println!("moment {m:2}: quadrature {got:.15e}  exact {:.15e}", weight.moment(m));
    }

    let n = 6;
    let big = gauss_rule(&weight, n + 1)?;
    println!("Gram matrix diagonal vs xi_k:");
    for k in 0..=n {
        let g = big.integrate(|t| eval(&weight, k, t).powi(2));
        println!("  k={k}: {g:.15e}  {:.15e}", xi(&weight, k));
    }
    Ok(())
}
