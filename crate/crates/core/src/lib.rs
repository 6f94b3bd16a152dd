//! # tfspec
//!
//! Time-spectral Galerkin solver for the time-fractional diffusion problem
//!
//! ```text
//!   D^α_{0+}(u − u₀) − u_xx = f   in (0,1) × (0,T),   u = 0 on the boundary,
//! ```
//!
//! with `0 < α < 1` and `D^α_{0+}` the Riemann–Liouville derivative. Time is
//! discretised with Legendre polynomials of degree `M` (a Galerkin method whose
//! fractional bilinear form is evaluated exactly through shifted Jacobi
//! expansions), space with conforming linear finite elements. The space-time
//! system is diagonalised by the discrete Laplacian eigenbasis, so the full
//! method reduces to one scalar fractional ODE per eigenmode.
//!
//! Module map:
//!
//! - [`special`]: Gamma function, Mittag-Leffler `E_{α,β}(−t)` (power series and
//!   integral representation) and the closed-form solutions of the scalar ODE.
//! - [`jacobi`]: shifted Jacobi polynomials `S_k^{a,b}` on `(0,T)`, Gauss–Jacobi
//!   rules, projections, basis changes and the closed-form Riemann–Liouville
//!   maps of weighted Jacobi polynomials.
//! - [`frac_ode`]: spectral Galerkin solver for `D^α(y − y₀) + λy = g`.
//! - [`fem1d`]: P1 mass/stiffness matrices and the generalised eigenbasis.
//! - [`spacetime`]: the full method and the semidiscrete exact reference.
//! - [`norms`]: error norms, Besov norms, coefficient decay and rate fits.
//! - [`experiment`]: declarative convergence studies (used by the `tfspec` binary).
//!
//! Runnable walkthroughs live in `examples/`; `cargo run --release --example <name>`.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiment;
pub mod fem1d;
pub mod frac_ode;
pub mod jacobi;
pub mod norms;
pub mod spacetime;
pub mod special;

pub use error::{Error, Result};
