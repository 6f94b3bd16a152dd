//! Shifted Jacobi polynomials `S_k^{a,b}` on `(0, T)`.

pub mod expansion;
pub mod fractional;
pub mod poly;
pub mod quadrature;
mod weight;

pub use expansion::{basis_change_matrix, change_basis, project, project_gauss, project_graded, Expansion};
pub use fractional::{
    frac_deriv_map, frac_integral_map, frac_pairing, pairing_diagonal, PairingOperator, Side,
    WeightedFracImage,
};
pub use poly::{eval, vandermonde};
pub use quadrature::{gauss_rule, graded_rule, QuadratureRule};
pub use weight::JacobiWeight;

/// `ξ_k^{a,b}`; same as [`JacobiWeight::xi`].
pub fn xi(weight: &JacobiWeight, k: usize) -> f64 {
    weight.xi(k)
}
