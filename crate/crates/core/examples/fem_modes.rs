//! P1 eigenbasis of the Dirichlet Laplacian on a uniform and a graded mesh.

use tfspec::fem1d::{eig, uniform_eigenvalue, Mesh1D};

fn main() -> tfspec::Result<()> {
    let mesh = Mesh1D::uniform(16)?;
    let basis = eig(&mesh)?;
    println!("uniform mesh, h = 1/16");
    for n in 0..5 {
        let exact = ((n + 1) as f64 * std::f64::consts::PI).powi(2);
        println!(
            "  lambda_{n} = {:.10}  closed form {:.10}  continuous {exact:.6}",
            basis.eigenvalues()[n],
            uniform_eigenvalue(mesh.h(), n + 1)
        );
    }

    let nodes: Vec<f64> = (0..=16).map(|i| (i as f64 / 16.0).powi(2)).collect();
    let graded = eig(&Mesh1D::from_nodes(nodes)?)?;
    let phi = graded.mode(0);
    let m_norm = graded.mass().form(&phi, &phi);
    let k_norm = graded.stiffness().form(&phi, &phi);
    println!("graded mesh: lambda_0 = {:.8}, (M phi, phi) = {m_norm:.3e}, (K phi, phi) = {k_norm:.8}", graded.eigenvalues()[0]);
    Ok(())
}
