//! The full space-time method: P1 elements in space, Legendre Galerkin in time.
//!
//! Expanding `U(x,t) = Σ_n y_n(t) φ_n^h(x)` in the mass-orthonormal discrete
//! eigenbasis decouples the Galerkin system into scalar problems
//! `D^α(y_n − y_{n,0}) + λ_n^h y_n = f_n` that are solved independently.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{domain, Result};
use crate::fem1d::{eig, load_vector, EndpointSingularity, Mesh1D, ModalBasis};
use crate::frac_ode::{self, FracOdeProblem, Forcing, ScalarSpectralSolution};
use crate::jacobi::{project_graded, Expansion, JacobiWeight};
use crate::special::gamma::rgamma;
use crate::special::scalar_ode::{exact_constant_forcing, exact_homogeneous};
use crate::special::ScalarOdeData;

type SpaceFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A function of `x ∈ (0,1)` with its endpoint behaviour.
#[derive(Clone)]
pub struct SpatialProfile {
    f: Option<SpaceFn>,
    singular: EndpointSingularity,
    label: String,
}

impl fmt::Debug for SpatialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SpatialProfile({})", self.label)
    }
}

impl SpatialProfile {
    pub fn zero() -> Self {
        Self {
            f: None,
            singular: EndpointSingularity::NONE,
            label: "0".into(),
        }
    }

    pub fn sin_pi() -> Self {
        Self::custom("sin(pi x)", EndpointSingularity::NONE, |x| {
            (std::f64::consts::PI * x).sin()
        })
    }

    /// `x(1−x)^{γ−1/2}`.
    pub fn right_power(gamma: f64) -> Self {
        let p = gamma - 0.5;
        Self::custom(
            format!("x(1-x)^{p}"),
            EndpointSingularity::RIGHT,
            move |x| x * pow_or_zero(1.0 - x, p),
        )
    }

    /// `x^{γ−1/2}(1−x)`.
    pub fn left_power(gamma: f64) -> Self {
        let p = gamma - 0.5;
        Self::custom(
            format!("x^{p}(1-x)"),
            EndpointSingularity::LEFT,
            move |x| pow_or_zero(x, p) * (1.0 - x),
        )
    }

    pub fn custom<F>(label: impl Into<String>, singular: EndpointSingularity, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            f: Some(Arc::new(f)),
            singular,
            label: label.into(),
        }
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &SpatialProfile, b: f64) -> Self {
        let singular = EndpointSingularity {
            left: (a != 0.0 && self.singular.left) || (b != 0.0 && other.singular.left),
            right: (a != 0.0 && self.singular.right) || (b != 0.0 && other.singular.right),
        };
        let (p, q) = (self.clone(), other.clone());
        Self::custom(
            format!("{a}*{} + {b}*{}", self.label, other.label),
            singular,
            move |x| a * p.eval(x) + b * q.eval(x),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.f.is_none()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.f.as_ref().map_or(0.0, |f| f(x))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Load vector `⟨v, ψ_j⟩` on the interior hats.
    pub fn load(&self, mesh: &Mesh1D) -> Result<Vec<f64>> {
        match &self.f {
            None => Ok(vec![0.0; mesh.dofs()]),
            Some(f) => load_vector(mesh, |x| f(x), self.singular),
        }
    }

    /// Modal coefficients of the `L²` projection onto the P1 space.
    pub fn modal(&self, basis: &ModalBasis) -> Result<Vec<f64>> {
        Ok(basis.project_load(&self.load(basis.mesh())?))
    }
}

/// `x^p`, with value 0 at `x = 0` for `p > 0`; `x = 0` itself is never a
/// quadrature node when `p ≤ 0`.
fn pow_or_zero(x: f64, p: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x.powf(p)
    }
}

/// One term `v(x) g(t)` of a separable forcing.
#[derive(Debug, Clone)]
pub struct SeparableTerm {
    pub space: SpatialProfile,
    pub time: Forcing,
}

/// `D^α_{0+}(u − u₀) − u_xx = f` on `(0,1) × (0,T)`.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub alpha: f64,
    pub horizon: f64,
    pub u0: SpatialProfile,
    pub forcing: Vec<SeparableTerm>,
}

impl ProblemSpec {
    pub fn new(alpha: f64, horizon: f64, u0: SpatialProfile, forcing: Vec<SeparableTerm>) -> Result<Self> {
        let spec = Self {
            alpha,
            horizon,
            u0,
            forcing,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return domain(format!(
                "the space-time solver needs 0 < alpha < 1, got {}",
                self.alpha
            ));
        }
        if !(self.horizon > 0.0) || !self.horizon.is_finite() {
            return domain("horizon must be positive");
        }
        Ok(())
    }

    /// Exact solution `t^β sin πx`; `f = (Γ(β+1)/Γ(β+1−α) t^{β−α} + π² t^β) sin πx`, `u₀ = 0`.
    pub fn manufactured_power(alpha: f64, beta: f64) -> Result<Self> {
        if !(beta > (alpha - 1.0) / 2.0) {
            return domain(format!("beta must exceed (alpha-1)/2, got {beta}"));
        }
        let pi2 = std::f64::consts::PI.powi(2);
        let c = crate::special::gamma::gamma(beta + 1.0)? * rgamma(beta + 1.0 - alpha);
        let time = Forcing::Sum(vec![
            Forcing::Power {
                coef: c,
                exponent: beta - alpha,
            },
            Forcing::Power {
                coef: pi2,
                exponent: beta,
            },
        ]);
        Self::new(
            alpha,
            1.0,
            SpatialProfile::zero(),
            vec![SeparableTerm {
                space: SpatialProfile::sin_pi(),
                time,
            }],
        )
    }

    /// `f = 0`, `u₀ = θ x(1−x)^{γ−1/2} + (1−θ) sin πx`.
    pub fn rough_initial(alpha: f64, theta: f64, gamma: f64) -> Result<Self> {
        let u0 = if theta == 0.0 {
            SpatialProfile::sin_pi()
        } else if theta == 1.0 {
            SpatialProfile::right_power(gamma)
        } else {
            SpatialProfile::right_power(gamma).combine(theta, &SpatialProfile::sin_pi(), 1.0 - theta)
        };
        Self::new(alpha, 1.0, u0, Vec::new())
    }

    /// `u₀ = 0`, `f = x^{γ−1/2}(1−x)` constant in time.
    pub fn rough_source(alpha: f64, gamma: f64) -> Result<Self> {
        Self::new(
            alpha,
            1.0,
            SpatialProfile::zero(),
            vec![SeparableTerm {
                space: SpatialProfile::left_power(gamma),
                time: Forcing::Constant(1.0),
            }],
        )
    }

    /// `(y_{n,0}, s_j)`: modal coefficients of `u₀` and of each spatial forcing profile.
    pub fn modal_data(&self, basis: &ModalBasis) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
        let y0 = self.u0.modal(basis)?;
        let s = self
            .forcing
            .iter()
            .map(|term| term.space.modal(basis))
            .collect::<Result<Vec<_>>>()?;
        Ok((y0, s))
    }
}

/// `U(x,t) = Σ_n y_n(t) φ_n^h(x)`.
#[derive(Debug, Clone)]
pub struct SpaceTimeSolution {
    pub basis: Arc<ModalBasis>,
    pub modes: Vec<ScalarSpectralSolution>,
    pub alpha: f64,
}

impl SpaceTimeSolution {
    pub fn horizon(&self) -> f64 {
        self.modes[0].horizon()
    }

    pub fn degree(&self) -> usize {
        self.modes[0].degree()
    }

    pub fn mesh(&self) -> &Mesh1D {
        self.basis.mesh()
    }

    /// `(y_n(t))_n`.
    pub fn modal_at(&self, t: f64) -> Result<Vec<f64>> {
        check_time(t, self.horizon())?;
        Ok(self.modes.iter().map(|m| m.eval(t)).collect())
    }

    /// Nodal values `Φ y(t)`.
    pub fn nodal_at(&self, t: f64) -> Result<Vec<f64>> {
        self.basis.from_modal(&self.modal_at(t)?)
    }

    /// `Σ_n y_n(t) φ_n^h(x)`.
    pub fn evaluate(&self, x: f64, t: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) {
            return domain(format!("x = {x} outside [0, 1]"));
        }
        let y = self.modal_at(t)?;
        let mesh = self.mesh();
        let mut acc = 0.0;
        let mut col = vec![0.0; self.basis.len()];
        for (n, yn) in y.iter().enumerate() {
            if *yn == 0.0 {
                continue;
            }
            for (c, v) in col.iter_mut().zip(self.basis.vectors().column(n).iter()) {
                *c = *v;
            }
            acc += yn * mesh.interpolate(&col, x)?;
        }
        Ok(acc)
    }
}

fn check_time(t: f64, horizon: f64) -> Result<()> {
    if !(t >= 0.0 && t <= horizon * (1.0 + 1e-14)) {
        return domain(format!("t = {t} outside [0, {horizon}]"));
    }
    Ok(())
}

/// Solves the space-time Galerkin problem with temporal degree `m` on `mesh`.
pub fn solve(spec: &ProblemSpec, m: usize, mesh: &Mesh1D) -> Result<SpaceTimeSolution> {
    spec.validate()?;
    let basis = eig(mesh)?;
    solve_with_basis(spec, m, basis)
}

/// As [`solve`], reusing an eigenbasis.
pub fn solve_with_basis(spec: &ProblemSpec, m: usize, basis: Arc<ModalBasis>) -> Result<SpaceTimeSolution> {
    spec.validate()?;
    let (y0, s) = spec.modal_data(&basis)?;
    let time_moments = spec
        .forcing
        .iter()
        .map(|term| term.time.moments(m, spec.horizon))
        .collect::<Result<Vec<_>>>()?;
    let modes = (0..basis.len())
        .into_par_iter()
        .map(|n| {
            let mut moments = vec![0.0; m + 1];
            for (sj, gj) in s.iter().zip(&time_moments) {
                for (b, g) in moments.iter_mut().zip(gj) {
                    *b += sj[n] * g;
                }
            }
            let data = ScalarOdeData::new(spec.alpha, basis.eigenvalues()[n], y0[n], spec.horizon)?;
            frac_ode::solve(&FracOdeProblem::new(data, Forcing::Moments(moments))?, m)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SpaceTimeSolution {
        basis,
        modes,
        alpha: spec.alpha,
    })
}

/// The spatially discrete, temporally exact solution
/// `y_n(t) = y_{n,0} E_{α,1}(−λ_n t^α) + f_n t^α E_{α,α+1}(−λ_n t^α)`.
#[derive(Debug, Clone)]
pub struct SemidiscreteExact {
    pub basis: Arc<ModalBasis>,
    pub alpha: f64,
    pub horizon: f64,
    pub y0: Vec<f64>,
    pub f: Vec<f64>,
}

/// Builds the semidiscrete reference; `f` must be zero or constant in time.
pub fn semidiscrete_exact(spec: &ProblemSpec, mesh: &Mesh1D) -> Result<SemidiscreteExact> {
    spec.validate()?;
    let basis = eig(mesh)?;
    let (y0, s) = spec.modal_data(&basis)?;
    let mut f = vec![0.0; basis.len()];
    for (term, sj) in spec.forcing.iter().zip(&s) {
        let c = match term.time {
            Forcing::Zero => 0.0,
            Forcing::Constant(c) => c,
            ref other => {
                return domain(format!(
                    "semidiscrete reference needs time-independent forcing, got {other:?}"
                ))
            }
        };
        for (fi, si) in f.iter_mut().zip(sj) {
            *fi += c * si;
        }
    }
    Ok(SemidiscreteExact {
        basis,
        alpha: spec.alpha,
        horizon: spec.horizon,
        y0,
        f,
    })
}

impl SemidiscreteExact {
    /// `y_n(t)`.
    pub fn mode(&self, n: usize, t: f64) -> Result<f64> {
        check_time(t, self.horizon)?;
        let lambda = self.basis.eigenvalues()[n];
        let mut y = 0.0;
        if self.y0[n] != 0.0 {
            let d = ScalarOdeData::new(self.alpha, lambda, self.y0[n], self.horizon)?;
            y += exact_homogeneous(&d, t)?;
        }
        if self.f[n] != 0.0 {
            let d = ScalarOdeData::new(self.alpha, lambda, 0.0, self.horizon)?;
            y += self.f[n] * exact_constant_forcing(&d, t)?;
        }
        Ok(y)
    }

    pub fn modal_at(&self, t: f64) -> Result<Vec<f64>> {
        (0..self.basis.len()).map(|n| self.mode(n, t)).collect()
    }

    pub fn nodal_at(&self, t: f64) -> Result<Vec<f64>> {
        self.basis.from_modal(&self.modal_at(t)?)
    }

    pub fn evaluate(&self, x: f64, t: f64) -> Result<f64> {
        let nodal = self.nodal_at(t)?;
        self.basis.mesh().interpolate(&nodal, x)
    }

    /// Legendre projection of every mode onto `P_degree`, packaged like a
    /// discrete solution so the error norms apply unchanged.
    pub fn to_solution(&self, degree: usize) -> Result<SpaceTimeSolution> {
        let legendre = JacobiWeight::legendre(self.horizon)?;
        let modes = (0..self.basis.len())
            .into_par_iter()
            .map(|n| {
                let y0 = self.y0[n];
                let poly = if y0 == 0.0 && self.f[n] == 0.0 {
                    Expansion::zero(legendre, degree)
                } else {
                    project_graded(|t| self.mode(n, t).expect("t in range") - y0, &legendre, degree)?
                };
                Ok(ScalarSpectralSolution { offset: y0, poly })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SpaceTimeSolution {
            basis: self.basis.clone(),
            modes,
            alpha: self.alpha,
        })
    }
}
