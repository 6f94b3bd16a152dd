//! Closed-form Riemann–Liouville maps of weighted Jacobi polynomials and the
//! diagonal fractional pairing.
//!
//! For `0 < θ < 1`:
//!
//! ```text
//! D^θ_{0+}  S_k^{β−θ,0}           = k!/Γ(k+1−θ) · t^{−θ} S_k^{β,−θ}
//! D^{−θ}_{0+} S_k^{β+θ,0}         = k!/Γ(k+1+θ) · t^{θ}  S_k^{β,θ}
//! ```
//!
//! and the mirrored identities for the right-sided operators, with `t`
//! replaced by `T − t` and the exponents swapped.

use super::expansion::{basis_change_matrix, change_basis, eval_series, Expansion};
use super::JacobiWeight;
use crate::error::{domain, Result};
use crate::special::gamma::ln_gamma;

/// Which endpoint the fractional operator integrates from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `D_{0+}`, memory from `t = 0`.
    Left,
    /// `D_{T−}`, memory from `t = T`.
    Right,
}

/// `ω(t) Σ c_k S_k^{weight}(t)` with `ω(t) = t^{−θ}` (left) or `(T − t)^{−θ}`
/// (right). `theta > 0` is a derivative image, `theta < 0` an integral image.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedFracImage {
    pub theta: f64,
    pub side: Side,
    pub weight: JacobiWeight,
    pub coeffs: Vec<f64>,
}

impl WeightedFracImage {
    pub fn eval(&self, t: f64) -> f64 {
        let horizon = self.weight.horizon;
        let omega = match self.side {
            Side::Left => t.powf(-self.theta),
            Side::Right => (horizon - t).powf(-self.theta),
        };
        omega * eval_series(&self.weight, &self.coeffs, t)
    }

    /// Applies the inverse operator, returning the polynomial preimage:
    /// `D^θ` on an integral image, `D^{−θ}` on a derivative image.
    pub fn invert(&self) -> Result<Expansion> {
        let theta = -self.theta;
        let (a, b) = (self.weight.a, self.weight.b);
        let (pre_a, pre_b, omega_exp) = match self.side {
            Side::Left => (a + theta, 0.0, b),
            Side::Right => (0.0, b + theta, a),
        };
        if (omega_exp - theta).abs() > 1e-14 {
            return domain("image weight does not match its fractional order");
        }
        let pre = self.weight.with_exponents(pre_a, pre_b)?;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c / map_factor(k, self.theta))
            .collect();
        Expansion::new(pre, coeffs)
    }
}

/// `k!/Γ(k+1−θ)`, through log-Gamma.
fn map_factor(k: usize, theta: f64) -> f64 {
    let kf = k as f64;
    let lg = ln_gamma(kf + 1.0).expect("positive") - ln_gamma(kf + 1.0 - theta).expect("positive");
    lg.exp()
}

fn check_order(theta: f64) -> Result<()> {
    if !(theta > 0.0 && theta < 1.0) {
        return domain(format!("fractional order must lie in (0,1), got {theta}"));
    }
    Ok(())
}

/// `D^θ` of an expansion in `S^{β−θ,0}` (left) or `S^{0,β−θ}` (right).
pub fn frac_deriv_map(e: &Expansion, theta: f64, side: Side) -> Result<WeightedFracImage> {
    check_order(theta)?;
    let w = e.weight();
    let (pair_free, beta) = match side {
        Side::Left => (w.b, w.a + theta),
        Side::Right => (w.a, w.b + theta),
    };
    if pair_free != 0.0 {
        return domain(format!(
            "{side:?}-sided derivative map needs the {} exponent to vanish",
            if side == Side::Left { "left" } else { "right" }
        ));
    }
    let image = match side {
        Side::Left => w.with_exponents(beta, -theta),
        Side::Right => w.with_exponents(-theta, beta),
    }?;
    let coeffs = e
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, v)| v * map_factor(k, theta))
        .collect();
    Ok(WeightedFracImage {
        theta,
        side,
        weight: image,
        coeffs,
    })
}

/// `D^{−θ}` of an expansion in `S^{β+θ,0}` (left) or `S^{0,β+θ}` (right).
pub fn frac_integral_map(e: &Expansion, theta: f64, side: Side) -> Result<WeightedFracImage> {
    check_order(theta)?;
    let w = e.weight();
    let (pair_free, beta) = match side {
        Side::Left => (w.b, w.a - theta),
        Side::Right => (w.a, w.b - theta),
    };
    if pair_free != 0.0 {
        return domain(format!("{side:?}-sided integral map needs a vanishing exponent"));
    }
    if !(beta > -1.0) {
        return domain(format!(
            "image exponent {beta} must exceed -1 (source exponent too small for θ = {theta})"
        ));
    }
    let image = match side {
        Side::Left => w.with_exponents(beta, theta),
        Side::Right => w.with_exponents(theta, beta),
    }?;
    let coeffs = e
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, v)| v * map_factor(k, -theta))
        .collect();
    Ok(WeightedFracImage {
        theta: -theta,
        side,
        weight: image,
        coeffs,
    })
}

/// `d_k = T^{1−α} k! / ((2k+1−α) Γ(k+1−α))`, the pairing
/// `⟨D^{α/2}_{0+} S_k^{−α,0}, D^{α/2}_{T−} S_k^{0,−α}⟩`.
pub fn pairing_diagonal(alpha: f64, horizon: f64, k: usize) -> f64 {
    let kf = k as f64;
    let ln = (1.0 - alpha) * horizon.ln() + ln_gamma(kf + 1.0).expect("positive")
        - (2.0 * kf + 1.0 - alpha).ln()
        - ln_gamma(kf + 1.0 - alpha).expect("positive");
    ln.exp()
}

/// `⟨D^{α/2}_{0+} p, D^{α/2}_{T−} q⟩_{(0,T)}` for polynomials `p`, `q`.
///
/// `p` is re-expanded in `S^{−α,0}` and `q` in `S^{0,−α}`; the mixed
/// pairing matrix is then diagonal with entries [`pairing_diagonal`].
pub fn frac_pairing(p: &Expansion, q: &Expansion, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return domain(format!("alpha must lie in (0,1), got {alpha}"));
    }
    let horizon = p.horizon();
    if (q.horizon() - horizon).abs() > 1e-14 * horizon {
        return domain("pairing requires a common horizon");
    }
    let left = change_basis(p, &JacobiWeight::new(-alpha, 0.0, horizon)?)?;
    let right = change_basis(q, &JacobiWeight::new(0.0, -alpha, horizon)?)?;
    Ok(left
        .coeffs()
        .iter()
        .zip(right.coeffs())
        .enumerate()
        .map(|(k, (y, z))| pairing_diagonal(alpha, horizon, k) * y * z)
        .sum())
}

/// The fractional pairing restricted to Legendre coefficient vectors of
/// degree `≤ degree`, with both basis-change matrices precomputed.
#[derive(Debug, Clone)]
pub struct PairingOperator {
    alpha: f64,
    horizon: f64,
    to_left: Vec<Vec<f64>>,
    to_right: Vec<Vec<f64>>,
    diag: Vec<f64>,
}

impl PairingOperator {
    pub fn new(alpha: f64, horizon: f64, degree: usize) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return domain(format!("alpha must lie in (0,1), got {alpha}"));
        }
        let legendre = JacobiWeight::legendre(horizon)?;
        let to_left =
            basis_change_matrix(&legendre, &JacobiWeight::new(-alpha, 0.0, horizon)?, degree)?;
        let to_right =
            basis_change_matrix(&legendre, &JacobiWeight::new(0.0, -alpha, horizon)?, degree)?;
        let diag = (0..=degree)
            .map(|k| pairing_diagonal(alpha, horizon, k))
            .collect();
        Ok(Self {
            alpha,
            horizon,
            to_left,
            to_right,
            diag,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn degree(&self) -> usize {
        self.diag.len() - 1
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    /// Coefficients in `S^{−α,0}` of the Legendre series `c`.
    pub fn left_coeffs(&self, c: &[f64]) -> Vec<f64> {
        apply_upper(&self.to_left, c)
    }

    /// Coefficients in `S^{0,−α}` of the Legendre series `c`.
    pub fn right_coeffs(&self, c: &[f64]) -> Vec<f64> {
        apply_upper(&self.to_right, c)
    }

    /// `⟨D^{α/2}_{0+} p, D^{α/2}_{T−} q⟩` for Legendre coefficient vectors.
    pub fn pair(&self, p: &[f64], q: &[f64]) -> f64 {
        let y = self.left_coeffs(p);
        let z = self.right_coeffs(q);
        y.iter()
            .zip(&z)
            .zip(&self.diag)
            .map(|((y, z), d)| d * y * z)
            .sum()
    }

    /// `F[i][j] = ⟨D^{α/2}_{0+} L_j, D^{α/2}_{T−} L_i⟩`, i.e. `C₂ᵀ diag(d) C₁`.
    pub fn matrix(&self) -> Vec<Vec<f64>> {
        let n = self.diag.len();
        let mut f = vec![vec![0.0; n]; n];
        for (i, row) in f.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                let kmax = i.min(j);
                *v = (0..=kmax)
                    .map(|k| self.to_right[k][i] * self.diag[k] * self.to_left[k][j])
                    .sum();
            }
        }
        f
    }
}

fn apply_upper(c: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    let n = c.len();
    assert!(v.len() <= n, "coefficient vector longer than the operator degree");
    (0..n)
        .map(|k| (k..v.len()).map(|j| c[k][j] * v[j]).sum())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_derivative() {
        let w = JacobiWeight::new(-0.3, 0.0, 1.0).unwrap();
        let img = frac_deriv_map(&Expansion::basis(w, 0), 0.3, Side::Left).unwrap();
        let expected = 1.0 / crate::special::gamma::gamma(0.7).unwrap();
        assert!((img.coeffs[0] - expected).abs() < 1e-15);
        assert_eq!(img.weight.a, 0.0);
        assert_eq!(img.weight.b, -0.3);
    }

    #[test]
    fn rejects_nonzero_free_exponent() {
        let w = JacobiWeight::new(-0.3, 0.2, 1.0).unwrap();
        assert!(frac_deriv_map(&Expansion::basis(w, 1), 0.3, Side::Left).is_err());
        assert!(frac_integral_map(&Expansion::basis(w, 1), 0.3, Side::Right).is_err());
    }

    #[test]
    fn integral_image_weight_guard() {
        // β = a − θ = −0.5 − 0.6 < −1
        let w = JacobiWeight::new(-0.5, 0.0, 1.0).unwrap();
        assert!(frac_integral_map(&Expansion::basis(w, 0), 0.6, Side::Left).is_err());
    }

    #[test]
    fn unit_pairing() {
        let alpha = 0.4;
        let one = Expansion::basis(JacobiWeight::legendre(1.0).unwrap(), 0);
        let got = frac_pairing(&one, &one, alpha).unwrap();
        let expected = 1.0 / ((1.0 - alpha) * crate::special::gamma::gamma(1.0 - alpha).unwrap());
        assert!((got - expected).abs() < 1e-14);
    }
}
