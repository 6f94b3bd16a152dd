//! Mittag-Leffler function `E_{α,β}(−t)` on the negative real axis.
//!
//! Two independent routes:
//!
//! - [`ml_series`]: the defining power series `Σ (−t)^k / Γ(αk + β)`, with a
//!   running cancellation estimate so that it refuses to answer once rounding
//!   in the alternating sum would swamp the result.
//! - [`ml_integral`]: for `β < 1`, the real integral representation
//!   `E_{α,β}(−t) = 1/(πα) ∫₀^∞ K(r) r^{(1−β)/α} e^{−r^{1/α}} dr` with
//!   `K(r) = (r sin βπ − t sin(α−β)π)/(r² + 2tr cos απ + t²)`. After
//!   `r = s^α` the weight becomes `s^{α−β} e^{−s}`, and the integral is done by
//!   adaptive Gauss–Legendre on geometric panels toward `s = 0`.
//!
//! [`ml`] dispatches: series for `t < T_SWITCH`, integral above; `β ≥ 1` is
//! lowered by `E_{α,β}(−t) = (E_{α,β−α}(−t) − 1/Γ(β−α)) / (−t)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::gamma::{cos_pi, gamma, ln_gamma, rgamma, sin_pi};
use crate::error::{domain, Error, Result};
use crate::jacobi::quadrature::reference_rule;

/// Series below, integral representation above.
pub const T_SWITCH: f64 = 1.0;

const MAX_TERMS: usize = 10_000;
const S_MAX: f64 = 64.0;
const MAX_PANELS: usize = 4000;
const MAX_DEPTH: u32 = 12;

/// Arguments of `E_{α,β}(z)` at `z = −t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MlArgs {
    pub alpha: f64,
    pub beta: f64,
    pub t: f64,
}

impl MlArgs {
    /// `0 < α ≤ 1` (`α = 1` is the exponential family), `t ≥ 0`.
    pub fn new(alpha: f64, beta: f64, t: f64) -> Result<Self> {
        let args = Self { alpha, beta, t };
        args.validate()?;
        Ok(args)
    }

    fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return domain(format!("alpha must lie in (0,1], got {}", self.alpha));
        }
        if !self.beta.is_finite() {
            return domain("beta must be finite");
        }
        if !(self.t >= 0.0) || !self.t.is_finite() {
            return domain(format!("t must be finite and nonnegative, got {}", self.t));
        }
        Ok(())
    }
}

/// Partial sums of the power series, stopped once a term falls below
/// `tol·(1 + |sum|)` past the hump of the terms.
///
/// Returns an accuracy error when the term budget runs out, or when the
/// alternating sum has cancelled so much that the rounding estimate
/// `16ε·Σ|terms|` exceeds `1e-10·(1 + |sum|)`.
pub fn ml_series(args: MlArgs, tol: f64) -> Result<f64> {
    args.validate()?;
    if !(tol > 0.0) {
        return domain("series tolerance must be positive");
    }
    let MlArgs { alpha, beta, t } = args;
    if t == 0.0 {
        return Ok(rgamma(beta));
    }
    let ln_t = t.ln();
    let mut sum = 0.0;
    let mut abs_sum = 0.0;
    let mut prev = f64::INFINITY;
    for k in 0..MAX_TERMS {
        let g = alpha * k as f64 + beta;
        let mag = if g > 170.0 {
            (k as f64 * ln_t - ln_gamma(g)?).exp()
        } else {
            let tk = t.powi(k as i32);
            if !tk.is_finite() {
                return Err(Error::Accuracy(format!(
                    "series overflow at term {k} for t = {t}"
                )));
            }
            tk * rgamma(g)
        };
        let term = if k % 2 == 0 { mag } else { -mag };
        sum += term;
        abs_sum += mag.abs();
        if g > 2.0 && mag.abs() < prev && mag.abs() < tol * (1.0 + sum.abs()) {
            let rounding = 16.0 * f64::EPSILON * abs_sum;
            if rounding > 1e-10 * (1.0 + sum.abs()) {
                return Err(Error::Accuracy(format!(
                    "series cancellation: rounding ~{rounding:.1e} against |E| ~{:.1e}",
                    sum.abs()
                )));
            }
            return Ok(sum);
        }
        if g > 2.0 {
            prev = mag.abs();
        }
    }
    Err(Error::Accuracy(format!(
        "series did not converge within {MAX_TERMS} terms"
    )))
}

/// Integral representation, valid for `β < 1`.
pub fn ml_integral(args: MlArgs) -> Result<f64> {
    args.validate()?;
    let MlArgs { alpha, beta, t } = args;
    if beta >= 1.0 {
        return domain(format!("integral representation needs beta < 1, got {beta}"));
    }
    if alpha >= 1.0 {
        return domain("integral representation needs alpha < 1");
    }
    let sin_b = sin_pi(beta);
    if t == 0.0 {
        return Ok(sin_b * gamma(1.0 - beta)? / PI);
    }
    let sin_ab = sin_pi(alpha - beta);
    let cos_a = cos_pi(alpha);
    let p = alpha - beta;

    // Integrand in s, divided by s^p e^{-s}: the smooth cofactor near 0.
    let kernel = |s: f64| -> f64 {
        let rho = s.powf(alpha);
        (rho * sin_b - t * sin_ab) / (rho * rho + 2.0 * t * rho * cos_a + t * t)
    };
    let h = |s: f64| -> f64 {
        if s == 0.0 {
            return 0.0;
        }
        kernel(s) * s.powf(p) * (-s).exp()
    };

    let gl24 = reference_rule(24, 0.0, 0.0)?;
    let gl16 = reference_rule(16, 0.0, 0.0)?;
    let s_star = t.powf(1.0 / alpha);

    let mut total = 0.0;
    let mut abs_total = 0.0;
    let mut unresolved = 0.0;
    let mut hi = S_MAX;
    let mut panels = 0;
    let p_eff = if sin_ab == 0.0 { p + alpha } else { p };
    loop {
        let lo = 0.5 * hi;
        let (val, abs, err) = adaptive_panel(&h, lo, hi, &gl24, &gl16, 0);
        total += val;
        abs_total += abs;
        unresolved += err;
        hi = lo;
        panels += 1;
        if (hi <= 1.0 && hi < 1e-2 * s_star) || hi < 1e-300 {
            let leak = abs * (hi / s_star).powf(alpha).min(1.0);
            if leak < 1e-16 * abs_total || abs_total == 0.0 {
                break;
            }
        }
        if panels > MAX_PANELS {
            return Err(Error::Accuracy(format!(
                "integral representation: panel budget exhausted (t = {t}, alpha = {alpha}, beta = {beta})"
            )));
        }
    }

    // Innermost panel [0, hi]: weight s^{p_eff} carried by a Gauss–Jacobi rule.
    let gj = reference_rule(24, 0.0, p_eff)?;
    let half = 0.5 * hi;
    let scale = half.powf(p_eff + 1.0);
    let mut inner = 0.0;
    for (&x, &w) in gj.0.iter().zip(gj.1.iter()) {
        let s = half * (x + 1.0);
        let cof = kernel(s) * s.powf(p - p_eff) * (-s).exp();
        inner += w * scale * cof;
    }
    total += inner;
    abs_total += inner.abs();

    if unresolved > 1e-11 * abs_total {
        return Err(Error::Accuracy(format!(
            "integral representation unresolved: error estimate {unresolved:.1e}"
        )));
    }
    Ok(total / PI)
}

/// Returns `(value, ∫|h|, unresolved error)` on `[lo, hi]`.
fn adaptive_panel<F: Fn(f64) -> f64>(
    h: &F,
    lo: f64,
    hi: f64,
    gl24: &(Vec<f64>, Vec<f64>),
    gl16: &(Vec<f64>, Vec<f64>),
    depth: u32,
) -> (f64, f64, f64) {
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    let mut i24 = 0.0;
    let mut a24 = 0.0;
    for (&x, &w) in gl24.0.iter().zip(gl24.1.iter()) {
        let v = h(mid + half * x);
        i24 += w * v;
        a24 += w * v.abs();
    }
    let mut i16 = 0.0;
    for (&x, &w) in gl16.0.iter().zip(gl16.1.iter()) {
        i16 += w * h(mid + half * x);
    }
    let (i24, a24, i16) = (i24 * half, a24 * half, i16 * half);
    let err = (i24 - i16).abs();
    if err <= 1e-13 * a24 || a24 == 0.0 {
        return (i24, a24, 0.0);
    }
    if depth >= MAX_DEPTH {
        return (i24, a24, err);
    }
    let (v1, b1, e1) = adaptive_panel(h, lo, mid, gl24, gl16, depth + 1);
    let (v2, b2, e2) = adaptive_panel(h, mid, hi, gl24, gl16, depth + 1);
    (v1 + v2, b1 + b2, e1 + e2)
}

/// `E_{α,β}(−t)` by the appropriate route.
pub fn ml(args: MlArgs) -> Result<f64> {
    args.validate()?;
    let MlArgs { alpha, beta, t } = args;
    if t == 0.0 {
        return Ok(rgamma(beta));
    }
    if alpha == 1.0 {
        return ml_exponential(beta, t);
    }
    if t < T_SWITCH {
        return ml_series(args, 1e-17);
    }
    if beta < 1.0 {
        return ml_integral(args);
    }
    let lower = ml(MlArgs {
        alpha,
        beta: beta - alpha,
        t,
    })?;
    Ok((lower - rgamma(beta - alpha)) / (-t))
}

/// Shorthand for [`ml`] without building [`MlArgs`].
pub fn mittag_leffler(alpha: f64, beta: f64, t: f64) -> Result<f64> {
    ml(MlArgs::new(alpha, beta, t)?)
}

/// `α = 1`: `E_{1,1−m}(−t) = (−t)^m e^{−t}` for integers `m ≥ 0`, raised to
/// integer `β > 1` by the shift identity; the series covers small `t`.
fn ml_exponential(beta: f64, t: f64) -> Result<f64> {
    if beta == beta.round() {
        if beta <= 1.0 {
            let m = (1.0 - beta) as i32;
            return Ok((-t).powi(m) * (-t).exp());
        }
        if t >= T_SWITCH {
            let lower = ml_exponential(beta - 1.0, t)?;
            return Ok((lower - rgamma(beta - 1.0)) / (-t));
        }
    }
    if t < T_SWITCH {
        return ml_series(
            MlArgs {
                alpha: 1.0,
                beta,
                t,
            },
            1e-17,
        );
    }
    domain(format!(
        "alpha = 1 with non-integer beta = {beta} is only supported for t < {T_SWITCH}"
    ))
}
