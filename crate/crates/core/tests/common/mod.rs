//! Independent oracles shared by the integration suites: monomial arithmetic
//! for Riemann–Liouville operators, a product-weight quadrature for the
//! fractional pairing, the Kronecker-assembled space-time system, and a
//! least-squares slope.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use tfspec::fem1d::{assemble_matrices, Mesh1D};
use tfspec::frac_ode::{fractional_block, Forcing};
use tfspec::jacobi::{gauss_rule, Expansion, JacobiWeight};
use tfspec::special::gamma;
use tfspec::spacetime::ProblemSpec;

/// Small deterministic generator for reproducible "random" data.
pub struct Lcg(u64);

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Self(seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407))
    }

    /// Uniform on `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let u = (self.0 >> 11) as f64 / (1u64 << 53) as f64;
        lo + (hi - lo) * u
    }

    pub fn vec(&mut self, n: usize, lo: f64, hi: f64) -> Vec<f64> {
        (0..n).map(|_| self.uniform(lo, hi)).collect()
    }
}

/// Power-series coefficients of `e` about `t = 0`, from a Vandermonde solve
/// at Chebyshev points of `(0, T)`.
pub fn monomials(e: &Expansion) -> Vec<f64> {
    let n = e.degree() + 1;
    let horizon = e.horizon();
    let pts: Vec<f64> = (0..n)
        .map(|i| {
            let c = ((2 * i + 1) as f64 * std::f64::consts::PI / (2 * n) as f64).cos();
            0.5 * horizon * (1.0 + c)
        })
        .collect();
    let v = DMatrix::from_fn(n, n, |i, j| pts[i].powi(j as i32));
    let rhs = DVector::from_iterator(n, pts.iter().map(|&t| e.eval(t)));
    v.lu().solve(&rhs).expect("Vandermonde solve").as_slice().to_vec()
}

/// Coefficients of `e` in powers of `T − t`.
pub fn reflected_monomials(e: &Expansion) -> Vec<f64> {
    monomials(&e.reflected())
}

/// `Γ(j+1)/Γ(j+1−θ)`.
pub fn power_factor(j: usize, theta: f64) -> f64 {
    gamma(j as f64 + 1.0).unwrap() / gamma(j as f64 + 1.0 - theta).unwrap()
}

/// `D^θ_{0+} Σ c_j t^j` at `t`; `θ < 0` is a fractional integral.
pub fn rl_left_monomial(c: &[f64], theta: f64, t: f64) -> f64 {
    c.iter()
        .enumerate()
        .map(|(j, cj)| cj * power_factor(j, theta) * t.powf(j as f64 - theta))
        .sum()
}

/// `(1/Γ(1−θ)) ∫₀ᵗ (t−s)^{−θ} p(s) ds`, by a Gauss–Jacobi rule on `(0, t)`.
pub fn rl_integral_quadrature(p: &dyn Fn(f64) -> f64, order: f64, t: f64) -> f64 {
    // D^{−order} p(t) = (1/Γ(order)) ∫₀ᵗ (t − s)^{order − 1} p(s) ds.
    let w = JacobiWeight::new(order - 1.0, 0.0, t).unwrap();
    let rule = gauss_rule(&w, 24).unwrap();
    rule.integrate(p) / gamma(order).unwrap()
}

/// `D^θ_{0+} p(t) = d/dt D^{θ−1} p(t)`, differentiated by a central difference.
pub fn rl_derivative_quadrature(p: &dyn Fn(f64) -> f64, theta: f64, t: f64) -> f64 {
    let h = 1e-4 * t.min(1.0);
    let f = |s: f64| rl_integral_quadrature(p, 1.0 - theta, s);
    (f(t + h) - f(t - h)) / (2.0 * h)
}

/// `∫₀ᵀ D^{α/2}_{0+}p · D^{α/2}_{T−}q dt` for polynomials. Both derivatives are
/// `t^{−α/2}P̃(t)` and `(T−t)^{−α/2}Q̃(t)` with `P̃`, `Q̃` polynomials, so a
/// Gauss–Jacobi rule with weight `μ^{−α/2,−α/2}` integrates the product exactly.
pub fn brute_pairing(p: &Expansion, q: &Expansion, alpha: f64) -> f64 {
    let theta = 0.5 * alpha;
    let horizon = p.horizon();
    let a = monomials(p);
    let b = reflected_monomials(q);
    let w = JacobiWeight::new(-theta, -theta, horizon).unwrap();
    let rule = gauss_rule(&w, a.len() + b.len() + 2).unwrap();
    rule.integrate(|t| {
        let left: f64 = a
            .iter()
            .enumerate()
            .map(|(j, c)| c * power_factor(j, theta) * t.powi(j as i32))
            .sum();
        let right: f64 = b
            .iter()
            .enumerate()
            .map(|(i, c)| c * power_factor(i, theta) * (horizon - t).powi(i as i32))
            .sum();
        left * right
    })
}

/// The fully coupled space-time Galerkin system for `spec`, assembled as
/// `(F ⊗ M_h + D_T ⊗ K_h) c = b` with Legendre-in-time, hat-in-space unknowns,
/// and solved densely. Returns nodal coefficient vectors of `u − u₀,h` for each
/// Legendre degree, together with the nodal `u₀,h`.
pub struct Coupled {
    pub horizon: f64,
    /// `c[i]`: nodal values of the coefficient of `L_i`.
    pub c: Vec<Vec<f64>>,
    pub u0: Vec<f64>,
}

impl Coupled {
    /// Nodal values of `u_h(·, t)`.
    pub fn nodal_at(&self, t: f64) -> Vec<f64> {
        let legendre = JacobiWeight::legendre(self.horizon).unwrap();
        let mut out = self.u0.clone();
        for (i, ci) in self.c.iter().enumerate() {
            let l = tfspec::jacobi::eval(&legendre, i, t);
            for (o, v) in out.iter_mut().zip(ci) {
                *o += l * v;
            }
        }
        out
    }
}

/// `(A, b, u₀,h)` of the coupled system; unknown `i·N + r` is the coefficient of
/// `L_i(t) ψ_r(x)`.
pub fn coupled_system(spec: &ProblemSpec, m: usize, mesh: &Mesh1D) -> (DMatrix<f64>, DVector<f64>, Vec<f64>) {
    let (mass, stiff) = assemble_matrices(mesh);
    let n = mesh.dofs();
    let horizon = spec.horizon;
    let mh = mass.to_dense();
    let kh = stiff.to_dense();
    let f = fractional_block(spec.alpha, m, horizon).unwrap();
    let size = (m + 1) * n;
    let idx = |i: usize, r: usize| i * n + r;
    let mut a = DMatrix::zeros(size, size);
    for i in 0..=m {
        for j in 0..=m {
            for r in 0..n {
                for s in 0..n {
                    let mut v = f[(i, j)] * mh[(r, s)];
                    if i == j {
                        v += horizon / (2.0 * i as f64 + 1.0) * kh[(r, s)];
                    }
                    a[(idx(i, r), idx(j, s))] = v;
                }
            }
        }
    }
    // u₀,h is the L² projection of u₀; its stiffness action is moved to the right.
    let load0 = spec.u0.load(mesh).unwrap();
    let u0 = mass.solve(&load0).unwrap();
    let ku0 = stiff.mul(&u0);
    let mut b = DVector::zeros(size);
    for term in &spec.forcing {
        let space = term.space.load(mesh).unwrap();
        let time = term.time.moments(m, horizon).unwrap();
        for i in 0..=m {
            for r in 0..n {
                b[idx(i, r)] += time[i] * space[r];
            }
        }
    }
    for r in 0..n {
        b[idx(0, r)] -= horizon * ku0[r];
    }
    (a, b, u0)
}

pub fn coupled_solve(spec: &ProblemSpec, m: usize, mesh: &Mesh1D) -> Coupled {
    let n = mesh.dofs();
    let (a, b, u0) = coupled_system(spec, m, mesh);
    let x = a.lu().solve(&b).expect("coupled system");
    let c = (0..=m).map(|i| x.as_slice()[i * n..(i + 1) * n].to_vec()).collect();
    Coupled { horizon: spec.horizon, c, u0 }
}

/// L1 scheme for `D^α(y − y₀) + λy = g` (constant `g`) on `(0, 1)` with the
/// graded mesh `t_j = (j/N)^r`; returns `y(1)`.
pub fn l1_scalar(alpha: f64, lambda: f64, y0: f64, g: f64, n: usize, r: f64) -> f64 {
    let t: Vec<f64> = (0..=n).map(|j| (j as f64 / n as f64).powf(r)).collect();
    let gm = gamma(2.0 - alpha).unwrap();
    let mut y = vec![y0; n + 1];
    let mut w = vec![0.0; n + 1];
    for k in 1..=n {
        // D^α y(t_k) ≈ Σ_j w_j (y_j − y_{j−1}),
        // w_j = [(t_k − t_{j−1})^{1−α} − (t_k − t_j)^{1−α}] / (τ_j Γ(2−α)).
        for j in 1..=k {
            w[j] = ((t[k] - t[j - 1]).powf(1.0 - alpha) - (t[k] - t[j]).powf(1.0 - alpha))
                / ((t[j] - t[j - 1]) * gm);
        }
        let hist: f64 = (1..k).map(|j| w[j] * (y[j] - y[j - 1])).sum();
        y[k] = (g - hist + w[k] * y[k - 1]) / (w[k] + lambda);
    }
    y[n]
}

/// Time-dependent forcing helper: `coef·t^p`.
pub fn power(coef: f64, exponent: f64) -> Forcing {
    Forcing::Power { coef, exponent }
}

/// Least-squares slope of `log y` against `log x`.
pub fn slope(pairs: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = pairs.iter().map(|(x, y)| (x.ln(), y.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>()
}
