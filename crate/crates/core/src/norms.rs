//! Error norms, Besov norms, coefficient decay and log-log rate fits.
//!
//! For a per-mode difference `e(x,t) = Σ_n Δy_n(t) φ_n^h(x)`:
//!
//! ```text
//! E1² = Σ_n λ_n ‖Δy_n‖²_{L²(0,T)}
//! E2² = Σ_n ‖Δy_n‖²_{L²(0,T)} + sec(απ/2) ⟨D^{α/2}_{0+} Δy_n, D^{α/2}_{T−} Δy_n⟩
//! ```
//!
//! Both are exact for the polynomial differences produced by the solver.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{domain, Error, Result};
use crate::fem1d::ModalBasis;
use crate::frac_ode::ScalarSpectralSolution;
use crate::jacobi::quadrature::graded_rule_for_degree;
use crate::jacobi::{
    change_basis, pairing_diagonal, project_graded, Expansion, JacobiWeight, PairingOperator,
};
use crate::spacetime::SpaceTimeSolution;

/// Points at or below this error are treated as reference contamination.
pub const ERROR_FLOOR: f64 = 1e-11;

/// Mode-wise Legendre coefficients of `a − b`.
#[derive(Debug, Clone)]
pub struct ModalDifference {
    pub basis: Arc<ModalBasis>,
    pub horizon: f64,
    /// `coeffs[n][k]`: Legendre coefficient `k` of `Δy_n`, offsets folded in.
    pub coeffs: Vec<Vec<f64>>,
}

impl ModalDifference {
    pub fn degree(&self) -> usize {
        self.coeffs.first().map_or(0, |c| c.len() - 1)
    }

    /// `‖Δy_n‖²_{L²(0,T)}` for every mode.
    pub fn l2_sq(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| legendre_norm_sq(c, self.horizon)).collect()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            basis: self.basis.clone(),
            horizon: self.horizon,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.iter().map(|v| s * v).collect())
                .collect(),
        }
    }

    pub fn add(&self, other: &ModalDifference) -> Result<Self> {
        check_same_basis(&self.basis, &other.basis)?;
        let deg = self.degree().max(other.degree());
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| {
                (0..=deg)
                    .map(|k| a.get(k).copied().unwrap_or(0.0) + b.get(k).copied().unwrap_or(0.0))
                    .collect()
            })
            .collect();
        Ok(Self {
            basis: self.basis.clone(),
            horizon: self.horizon,
            coeffs,
        })
    }
}

fn legendre_norm_sq(c: &[f64], horizon: f64) -> f64 {
    c.iter()
        .enumerate()
        .map(|(k, v)| v * v * horizon / (2.0 * k as f64 + 1.0))
        .sum()
}

fn check_same_basis(a: &Arc<ModalBasis>, b: &Arc<ModalBasis>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a.mesh() == b.mesh() {
        Ok(())
    } else {
        domain("solutions live on different meshes")
    }
}

/// `a − b`, mode by mode.
pub fn difference(a: &SpaceTimeSolution, b: &SpaceTimeSolution) -> Result<ModalDifference> {
    check_same_basis(&a.basis, &b.basis)?;
    if (a.horizon() - b.horizon()).abs() > 1e-14 * a.horizon() {
        return domain("solutions have different horizons");
    }
    let deg = a.degree().max(b.degree());
    let coeffs = a
        .modes
        .iter()
        .zip(&b.modes)
        .map(|(p, q)| {
            let (p, q) = (p.total_coeffs(deg), q.total_coeffs(deg));
            p.iter().zip(&q).map(|(x, y)| x - y).collect()
        })
        .collect();
    Ok(ModalDifference {
        basis: a.basis.clone(),
        horizon: a.horizon(),
        coeffs,
    })
}

/// `‖e‖_{L²(0,T;Ḣ¹)}`.
pub fn err_l2h1(diff: &ModalDifference) -> f64 {
    diff.l2_sq()
        .iter()
        .zip(diff.basis.eigenvalues())
        .map(|(e, l)| l * e)
        .sum::<f64>()
        .sqrt()
}

/// `‖e‖_{L²(0,T;L²)}`.
pub fn err_l2l2(diff: &ModalDifference) -> f64 {
    diff.l2_sq().iter().sum::<f64>().sqrt()
}

fn seminorm_sq_total(diff: &ModalDifference, alpha: f64) -> Result<f64> {
    let op = PairingOperator::new(alpha, diff.horizon, diff.degree())?;
    let sec = 1.0 / (0.5 * alpha * std::f64::consts::PI).cos();
    Ok(diff.coeffs.iter().map(|c| sec * op.pair(c, c)).sum())
}

/// `|e|_{H^{α/2}(0,T;L²)}` through the fractional pairing identity.
pub fn seminorm_halpha_l2(diff: &ModalDifference, alpha: f64) -> Result<f64> {
    Ok(seminorm_sq_total(diff, alpha)?.max(0.0).sqrt())
}

/// `‖e‖_{H^{α/2}(0,T;L²)}`, the full norm (`L²` part plus seminorm).
pub fn err_halpha_l2(diff: &ModalDifference, alpha: f64) -> Result<f64> {
    let l2: f64 = diff.l2_sq().iter().sum();
    Ok((l2 + seminorm_sq_total(diff, alpha)?).max(0.0).sqrt())
}

/// `‖e‖_𝓧 = (|e|²_{H^{α/2}(0,T;L²)} + ‖e‖²_{L²(0,T;Ḣ¹)})^{1/2}`.
pub fn x_norm(diff: &ModalDifference, alpha: f64) -> Result<f64> {
    let semi = seminorm_sq_total(diff, alpha)?;
    let e1 = err_l2h1(diff);
    Ok((semi + e1 * e1).max(0.0).sqrt())
}

/// Smoothness index for [`besov_norm`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesovSpec {
    pub gamma: f64,
    pub weight: JacobiWeight,
}

impl BesovSpec {
    pub fn new(gamma: f64, alpha: f64, horizon: f64) -> Result<Self> {
        if !(gamma >= 0.0) {
            return domain(format!("Besov index must be nonnegative, got {gamma}"));
        }
        Ok(Self {
            gamma,
            weight: JacobiWeight::new(-alpha, 0.0, horizon)?,
        })
    }
}

/// `(Σ_k (1 + k^{2γ}) ξ_k v_k²)^{1/2}` in the basis of `e`.
pub fn besov_norm(e: &Expansion, gamma: f64) -> Result<f64> {
    if !(gamma >= 0.0) {
        return domain(format!("Besov index must be nonnegative, got {gamma}"));
    }
    let w = e.weight();
    Ok(e.coeffs()
        .iter()
        .enumerate()
        .map(|(k, v)| (1.0 + (k as f64).powf(2.0 * gamma)) * w.xi(k) * v * v)
        .sum::<f64>()
        .sqrt())
}

/// Least-squares fit `log y ≈ intercept + slope·log x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual in log space.
    pub residual: f64,
    pub points: usize,
}

fn least_squares(pts: &[(f64, f64)]) -> PowerFit {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = pts
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    PowerFit {
        slope,
        intercept,
        residual: (rss / n).sqrt(),
        points: pts.len(),
    }
}

/// Slope of `log|v_k|` against `log k` over `k_min..=k_max`, skipping zeros.
pub fn decay_fit_values(values: &[f64], k_min: usize, k_max: usize) -> Result<PowerFit> {
    if k_min == 0 || k_max < k_min + 8 {
        return domain(format!("decay fit needs 1 ≤ k_min and k_max ≥ k_min + 8, got [{k_min}, {k_max}]"));
    }
    if k_max >= values.len() {
        return domain(format!("k_max = {k_max} beyond the {} available values", values.len()));
    }
    let pts: Vec<(f64, f64)> = (k_min..=k_max)
        .filter(|&k| values[k] != 0.0)
        .map(|k| ((k as f64).ln(), values[k].abs().ln()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::DegenerateFit("coefficient tail is identically zero".into()));
    }
    Ok(least_squares(&pts))
}

/// [`decay_fit_values`] on the expansion coefficients `v_k`.
pub fn decay_fit(e: &Expansion, k_min: usize, k_max: usize) -> Result<PowerFit> {
    decay_fit_values(e.coeffs(), k_min, k_max)
}

/// Raw pairings `⟨f, S_k⟩_μ = ξ_k v_k`, `k ≤ k_max`, for `f` singular at `t = 0`.
pub fn jacobi_pairings<F: Fn(f64) -> f64>(f: F, weight: &JacobiWeight, k_max: usize) -> Result<Vec<f64>> {
    let e = project_graded(f, weight, k_max)?;
    Ok(e.coeffs()
        .iter()
        .enumerate()
        .map(|(k, v)| weight.xi(k) * v)
        .collect())
}

/// Fit of `log error` against `log M`, excluding errors at or below [`ERROR_FLOOR`].
pub fn rate_fit(pairs: &[(usize, f64)]) -> Result<PowerFit> {
    if let Some((m, e)) = pairs.iter().find(|(m, e)| *m == 0 || !(*e >= 0.0)) {
        return domain(format!("invalid rate point (M = {m}, error = {e})"));
    }
    let pts: Vec<(f64, f64)> = pairs
        .iter()
        .filter(|(_, e)| *e > ERROR_FLOOR)
        .map(|(m, e)| ((*m as f64).ln(), e.ln()))
        .collect();
    if pts.len() < 4 {
        return Err(Error::DegenerateFit(format!(
            "{} usable points above the floor {ERROR_FLOOR}, need 4",
            pts.len()
        )));
    }
    Ok(least_squares(&pts))
}

/// One row of a convergence table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorRow {
    pub m: usize,
    pub e1: f64,
    pub e2: f64,
    pub l2l2: Option<f64>,
}

/// Convergence table for one `(α, parameter)` pair.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub alpha: f64,
    pub param: f64,
    pub h: f64,
    pub rows: Vec<ErrorRow>,
}

impl ErrorReport {
    pub fn e1_pairs(&self) -> Vec<(usize, f64)> {
        self.rows.iter().map(|r| (r.m, r.e1)).collect()
    }

    pub fn e2_pairs(&self) -> Vec<(usize, f64)> {
        self.rows.iter().map(|r| (r.m, r.e2)).collect()
    }

    pub fn e1_fit(&self) -> Result<PowerFit> {
        rate_fit(&self.e1_pairs())
    }

    pub fn e2_fit(&self) -> Result<PowerFit> {
        rate_fit(&self.e2_pairs())
    }

    /// CSV rows under the header `M,h,alpha,param,E1,E2`.
    pub fn csv_rows(&self, out: &mut String) {
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{:.6e},{},{},{:.10e},{:.10e}",
                r.m, self.h, self.alpha, self.param, r.e1, r.e2
            );
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        self.csv_rows(&mut out);
        out
    }

    /// Whitespace-separated columns for gnuplot.
    pub fn to_dat(&self) -> String {
        let mut out = format!("# alpha = {}, param = {}, h = {:e}\n", self.alpha, self.param, self.h);
        let with_l2 = self.rows.iter().all(|r| r.l2l2.is_some());
        out.push_str(if with_l2 { "# M E1 E2 L2L2\n" } else { "# M E1 E2\n" });
        for r in &self.rows {
            let _ = write!(out, "{} {:.10e} {:.10e}", r.m, r.e1, r.e2);
            if let (true, Some(l)) = (with_l2, r.l2l2) {
                let _ = write!(out, " {l:.10e}");
            }
            out.push('\n');
        }
        out
    }
}

pub const CSV_HEADER: &str = "M,h,alpha,param,E1,E2";

/// `‖s − y‖_{L²(0,T)}` for `y` with an algebraic singularity at `t = 0`.
pub fn scalar_l2_error<F: Fn(f64) -> f64>(s: &ScalarSpectralSolution, y: F) -> Result<f64> {
    let legendre = JacobiWeight::legendre(s.horizon())?;
    let rule = graded_rule_for_degree(&legendre, (2 * s.degree()).max(140))?;
    Ok(rule.integrate(|t| (s.eval(t) - y(t)).powi(2)).max(0.0).sqrt())
}

/// Truncation errors of `Φ_M^{−α,0} y` for each `M`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionTail {
    pub m: usize,
    /// `‖(I − Φ_M)y‖_{L²_{μ^{−α,0}}}`.
    pub weighted_l2: f64,
    /// `|(I − Φ_M)y|_{H^{α/2}(0,T)}`.
    pub seminorm: f64,
}

/// `Σ_{k>K} a_k` for `a_k ≈ c k^{−p}`, fitted on the last 64 terms.
fn power_tail(terms: &[f64]) -> f64 {
    let n = terms.len();
    let lo = n.saturating_sub(64).max(1);
    let sign = terms[n - 1].signum();
    if terms[lo..].iter().any(|t| t.signum() != sign) {
        // Alternating or sign-changing: the remainder is below the last term.
        return 0.0;
    }
    let pts: Vec<(f64, f64)> = (lo..n)
        .filter(|&k| terms[k] != 0.0)
        .map(|k| ((k as f64).ln(), terms[k].abs().ln()))
        .collect();
    if pts.len() < 8 {
        return 0.0;
    }
    let fit = least_squares(&pts);
    let p = -fit.slope;
    if p <= 1.0 {
        return f64::INFINITY;
    }
    let k = (n - 1) as f64;
    // ∫_{K+1/2}^∞ c r^{−p} dr
    sign * fit.intercept.exp() * (k + 0.5).powf(1.0 - p) / (p - 1.0)
}

/// Projection tails of `y` onto `P_M` in the `(−α,0)` Jacobi basis.
///
/// The series `Σ_{k>M} ξ_k v_k²` and `sec(απ/2) Σ_{k>M} d_k v_k w_k`
/// (with `w_k` the coefficients of `y` in `S^{0,−α}`) are summed to `k_max`
/// and closed with a fitted power-law remainder.
pub fn projection_tails<F: Fn(f64) -> f64>(
    y: F,
    alpha: f64,
    horizon: f64,
    ms: &[usize],
    k_max: usize,
) -> Result<Vec<ProjectionTail>> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return domain(format!("alpha must lie in (0,1), got {alpha}"));
    }
    if let Some(m) = ms.iter().find(|&&m| m + 16 > k_max) {
        return domain(format!("M = {m} too close to the truncation degree {k_max}"));
    }
    let left = JacobiWeight::new(-alpha, 0.0, horizon)?;
    let right = JacobiWeight::new(0.0, -alpha, horizon)?;
    let v = project_graded(&y, &left, k_max)?;
    let w = project_graded(&y, &right, k_max)?;
    let l2_terms: Vec<f64> = v
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| left.xi(k) * c * c)
        .collect();
    let sec = 1.0 / (0.5 * alpha * std::f64::consts::PI).cos();
    let semi_terms: Vec<f64> = v
        .coeffs()
        .iter()
        .zip(w.coeffs())
        .enumerate()
        .map(|(k, (a, b))| sec * pairing_diagonal(alpha, horizon, k) * a * b)
        .collect();
    let l2_rest = power_tail(&l2_terms);
    let semi_rest = power_tail(&semi_terms);
    Ok(ms
        .iter()
        .map(|&m| {
            let l2: f64 = l2_terms[m + 1..].iter().sum::<f64>() + l2_rest;
            let semi: f64 = semi_terms[m + 1..].iter().sum::<f64>() + semi_rest;
            ProjectionTail {
                m,
                weighted_l2: l2.max(0.0).sqrt(),
                seminorm: semi.max(0.0).sqrt(),
            }
        })
        .collect())
}

/// Coefficients of a non-polynomial `y` in both mixed bases, for
/// `H^{α/2}(0,T)` errors of polynomial approximations.
///
/// `|y − p|²` is `sec(απ/2) Σ_k d_k (v_k − p̂_k)(w_k − p̌_k)` with `v`, `w` the
/// coefficients in `S^{−α,0}` and `S^{0,−α}`; terms with `k > k_max` depend on
/// `y` alone and are replaced by a fitted power-law remainder.
#[derive(Debug, Clone)]
pub struct MixedExpansion {
    alpha: f64,
    horizon: f64,
    left: Vec<f64>,
    right: Vec<f64>,
    remainder: f64,
}

impl MixedExpansion {
    pub fn new<F: Fn(f64) -> f64>(y: F, alpha: f64, horizon: f64, k_max: usize) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return domain(format!("alpha must lie in (0,1), got {alpha}"));
        }
        let v = project_graded(&y, &JacobiWeight::new(-alpha, 0.0, horizon)?, k_max)?;
        let w = project_graded(&y, &JacobiWeight::new(0.0, -alpha, horizon)?, k_max)?;
        let terms: Vec<f64> = v
            .coeffs()
            .iter()
            .zip(w.coeffs())
            .enumerate()
            .map(|(k, (a, b))| pairing_diagonal(alpha, horizon, k) * a * b)
            .collect();
        Ok(Self {
            alpha,
            horizon,
            left: v.into_coeffs(),
            right: w.into_coeffs(),
            remainder: power_tail(&terms),
        })
    }

    pub fn k_max(&self) -> usize {
        self.left.len() - 1
    }

    /// `|y − p|_{H^{α/2}(0,T)}`.
    pub fn seminorm_error(&self, p: &ScalarSpectralSolution) -> Result<f64> {
        let deg = p.degree();
        if deg + 16 > self.k_max() {
            return domain(format!("degree {deg} too close to the truncation {}", self.k_max()));
        }
        let op = PairingOperator::new(self.alpha, self.horizon, deg)?;
        let c = p.total_coeffs(deg);
        let (pl, pr) = (op.left_coeffs(&c), op.right_coeffs(&c));
        let sum: f64 = (0..=self.k_max())
            .map(|k| {
                let a = self.left[k] - pl.get(k).copied().unwrap_or(0.0);
                let b = self.right[k] - pr.get(k).copied().unwrap_or(0.0);
                pairing_diagonal(self.alpha, self.horizon, k) * a * b
            })
            .sum();
        let sec = 1.0 / (0.5 * self.alpha * std::f64::consts::PI).cos();
        Ok((sec * (sum + self.remainder)).max(0.0).sqrt())
    }
}

/// `|(I − Φ_M)p|_{H^{α/2}}` for a polynomial `p` (no truncation).
pub fn polynomial_projection_seminorm(p: &Expansion, alpha: f64, m: usize) -> Result<f64> {
    let horizon = p.horizon();
    let left = JacobiWeight::new(-alpha, 0.0, horizon)?;
    let v = change_basis(p, &left)?;
    let mut residual = v.coeffs().to_vec();
    for c in residual.iter_mut().take(m + 1) {
        *c = 0.0;
    }
    let e = Expansion::new(left, residual)?;
    let leg = change_basis(&e, &JacobiWeight::legendre(horizon)?)?;
    let op = PairingOperator::new(alpha, horizon, leg.degree())?;
    let sec = 1.0 / (0.5 * alpha * std::f64::consts::PI).cos();
    Ok((sec * op.pair(leg.coeffs(), leg.coeffs())).max(0.0).sqrt())
}
