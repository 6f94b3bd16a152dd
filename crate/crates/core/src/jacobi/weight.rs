use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::special::gamma::ln_gamma;

/// The Jacobi weight `μ^{a,b}(t) = (T − t)^a t^b` on `(0, T)`.
///
/// `a` is the exponent at the right endpoint `T`, `b` the exponent at the left
/// endpoint `0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JacobiWeight {
    pub a: f64,
    pub b: f64,
    pub horizon: f64,
}

impl JacobiWeight {
    pub fn new(a: f64, b: f64, horizon: f64) -> Result<Self> {
        if !(a > -1.0 && b > -1.0) || !a.is_finite() || !b.is_finite() {
            return domain(format!("Jacobi exponents must exceed -1, got a = {a}, b = {b}"));
        }
        if !(horizon > 0.0) || !horizon.is_finite() {
            return domain(format!("horizon must be positive, got {horizon}"));
        }
        Ok(Self { a, b, horizon })
    }

    /// Legendre weight on `(0, T)`.
    pub fn legendre(horizon: f64) -> Result<Self> {
        Self::new(0.0, 0.0, horizon)
    }

    pub fn is_legendre(&self) -> bool {
        self.a == 0.0 && self.b == 0.0
    }

    /// Same horizon, different exponents.
    pub fn with_exponents(&self, a: f64, b: f64) -> Result<Self> {
        Self::new(a, b, self.horizon)
    }

    pub fn eval(&self, t: f64) -> f64 {
        let right = self.horizon - t;
        let r = if self.a == 0.0 { 1.0 } else { right.powf(self.a) };
        let l = if self.b == 0.0 { 1.0 } else { t.powf(self.b) };
        r * l
    }

    /// `ξ_k^{a,b} = ⟨S_k, S_k⟩_{μ^{a,b}}`.
    pub fn xi(&self, k: usize) -> f64 {
        self.ln_xi(k).exp()
    }

    pub fn ln_xi(&self, k: usize) -> f64 {
        let (a, b) = (self.a, self.b);
        let kf = k as f64;
        let ln_t = (a + b + 1.0) * self.horizon.ln();
        // (2k+a+b+1)Γ(k+a+b+1) = Γ(a+b+2) at k = 0, which stays finite when a+b+1 = 0.
        let denom = if k == 0 {
            lg(a + b + 2.0)
        } else {
            (2.0 * kf + a + b + 1.0).ln() + lg(kf + a + b + 1.0)
        };
        ln_t + lg(kf + a + 1.0) + lg(kf + b + 1.0) - lg(kf + 1.0) - denom
    }

    /// `∫₀ᵀ μ^{a,b}(t) tᵐ dt = T^{a+b+m+1} Γ(a+1)Γ(b+m+1)/Γ(a+b+m+2)`.
    pub fn moment(&self, m: usize) -> f64 {
        let (a, b, t) = (self.a, self.b, self.horizon);
        // Beta function at m = 0, then the ratio of consecutive moments.
        let mut v = ((a + b + 1.0) * t.ln() + lg(a + 1.0) + lg(b + 1.0) - lg(a + b + 2.0)).exp();
        for j in 1..=m {
            let j = j as f64;
            v *= t * (b + j) / (a + b + j + 1.0);
        }
        v
    }
}

fn lg(x: f64) -> f64 {
    ln_gamma(x).expect("Jacobi weight invariants keep Gamma arguments positive")
}
