//! Riemann–Liouville maps of weighted Jacobi polynomials and the diagonal
//! fractional pairing `⟨D^{α/2}_{0+} p, D^{α/2}_{T−} q⟩`.

use tfspec::jacobi::{frac_deriv_map, frac_pairing, Expansion, JacobiWeight, PairingOperator, Side};

fn main() -> tfspec::Result<()> {
    let alpha = 0.6;
    let t_end = 1.0;

    // D^θ_{0+} maps t^0 (T-t)^a S_k^{a,0} onto a multiple of S_k^{a+θ,-θ}.
    let left = JacobiWeight::new(-alpha, 0.0, t_end)?;
    let image = frac_deriv_map(&Expansion::basis(left, 3), alpha, Side::Left)?;
    println!("D^{alpha} of S_3^(-a,0): image weight {:?}", image.weight);
    for t in [0.1, 0.5, 0.9] {
        println!("  t={t}: {:.12}", image.eval(t));
    }

    let op = PairingOperator::new(alpha, t_end, 6)?;
    println!("pairing diagonal d_k: {:?}", op.diagonal());
    let leg = JacobiWeight::legendre(t_end)?;
    let p = Expansion::new(leg, vec![1.0, -0.5, 0.25])?;
    let q = Expansion::new(leg, vec![0.3, 0.0, 0.0, 1.0])?;
    println!("<D p, D q> = {:.15}", frac_pairing(&p, &q, alpha)?);
    println!("<D p, D p> = {:.15} (positive)", frac_pairing(&p, &p, alpha)?);
    Ok(())
}
