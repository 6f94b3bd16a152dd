//! Gamma and Mittag-Leffler functions, and the closed-form scalar solutions
//! built from them.

pub mod gamma;
pub mod mittag_leffler;
pub mod scalar_ode;

pub use gamma::{gamma, ln_gamma, rgamma};
pub use mittag_leffler::{ml, ml_integral, ml_series, MlArgs, T_SWITCH};
pub use scalar_ode::{
    exact_constant_forcing, exact_homogeneous, exact_homogeneous_deriv, ScalarOdeData, K_MAX,
};
