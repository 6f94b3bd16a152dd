//! Closed-form solutions of `D^α_{0+}(y − y₀) + λy = g` for `g = 0` and `g = 1`.

use serde::{Deserialize, Serialize};

use super::mittag_leffler::{ml, MlArgs};
use crate::error::{domain, Result};

/// Highest derivative order accepted by [`exact_homogeneous_deriv`].
pub const K_MAX: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalarOdeData {
    pub alpha: f64,
    pub lambda: f64,
    pub y0: f64,
    pub horizon: f64,
}

impl ScalarOdeData {
    pub fn new(alpha: f64, lambda: f64, y0: f64, horizon: f64) -> Result<Self> {
        let data = Self {
            alpha,
            lambda,
            y0,
            horizon,
        };
        data.validate()?;
        Ok(data)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return domain(format!("alpha must lie in (0,1], got {}", self.alpha));
        }
        if !(self.lambda >= 0.0) || !self.lambda.is_finite() {
            return domain(format!("lambda must be nonnegative, got {}", self.lambda));
        }
        if !(self.horizon > 0.0) || !self.horizon.is_finite() {
            return domain(format!("horizon must be positive, got {}", self.horizon));
        }
        if !self.y0.is_finite() {
            return domain("y0 must be finite");
        }
        Ok(())
    }

    fn check_time(&self, t: f64) -> Result<()> {
        if !(t >= 0.0 && t <= self.horizon * (1.0 + 1e-14)) {
            return domain(format!("t = {t} outside [0, {}]", self.horizon));
        }
        Ok(())
    }
}

/// `y(t) = y₀ E_{α,1}(−λ t^α)`.
pub fn exact_homogeneous(data: &ScalarOdeData, t: f64) -> Result<f64> {
    data.validate()?;
    data.check_time(t)?;
    if data.y0 == 0.0 {
        return Ok(0.0);
    }
    let z = data.lambda * t.powf(data.alpha);
    Ok(data.y0 * ml(MlArgs::new(data.alpha, 1.0, z)?)?)
}

/// `y(t) = t^α E_{α,α+1}(−λ t^α)`, the solution for `g ≡ 1`, `y₀ = 0`.
pub fn exact_constant_forcing(data: &ScalarOdeData, t: f64) -> Result<f64> {
    data.validate()?;
    data.check_time(t)?;
    if data.y0 != 0.0 {
        return domain("constant-forcing solution is defined for y0 = 0");
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let ta = t.powf(data.alpha);
    let z = data.lambda * ta;
    Ok(ta * ml(MlArgs::new(data.alpha, data.alpha + 1.0, z)?)?)
}

/// `y^{(k)}(t) = −λ y₀ t^{α−k} E_{α,α+1−k}(−λ t^α)` for `t > 0`.
pub fn exact_homogeneous_deriv(k: usize, data: &ScalarOdeData, t: f64) -> Result<f64> {
    data.validate()?;
    if k == 0 || k > K_MAX {
        return domain(format!("derivative order must lie in 1..={K_MAX}, got {k}"));
    }
    if t == 0.0 {
        return domain("derivatives are singular at t = 0");
    }
    data.check_time(t)?;
    if data.lambda == 0.0 || data.y0 == 0.0 {
        return Ok(0.0);
    }
    let alpha = data.alpha;
    let z = data.lambda * t.powf(alpha);
    let e = ml(MlArgs::new(alpha, alpha + 1.0 - k as f64, z)?)?;
    Ok(-data.lambda * data.y0 * t.powf(alpha - k as f64) * e)
}
