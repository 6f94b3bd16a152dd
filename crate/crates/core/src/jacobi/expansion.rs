//! Finite expansions `Σ v_k S_k^{a,b}` and weighted `L²` projections.

use std::fmt::Write as _;

use super::poly::{eval_all, jacobi_p_all, to_reference};
use super::quadrature::{gauss_rule, graded_rule_for_degree, QuadratureRule};
use super::JacobiWeight;
use crate::error::{domain, Error, Result};

/// Largest degree accepted by [`change_basis`] and [`basis_change_matrix`].
pub const MAX_BASIS_CHANGE_DEGREE: usize = 200;

/// Coefficients of a polynomial in the basis `S_k^{a,b}`, `k = 0..=degree`.
#[derive(Debug, Clone, PartialEq)]
pub struct Expansion {
    weight: JacobiWeight,
    coeffs: Vec<f64>,
}

impl Expansion {
    pub fn new(weight: JacobiWeight, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return domain("expansion needs at least one coefficient");
        }
        if let Some(k) = coeffs.iter().position(|c| !c.is_finite()) {
            return domain(format!("expansion coefficient {k} is not finite"));
        }
        Ok(Self { weight, coeffs })
    }

    pub fn zero(weight: JacobiWeight, degree: usize) -> Self {
        Self {
            weight,
            coeffs: vec![0.0; degree + 1],
        }
    }

    /// The single basis function `S_k`.
    pub fn basis(weight: JacobiWeight, k: usize) -> Self {
        let mut e = Self::zero(weight, k);
        e.coeffs[k] = 1.0;
        e
    }

    pub fn weight(&self) -> &JacobiWeight {
        &self.weight
    }

    pub fn horizon(&self) -> f64 {
        self.weight.horizon
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Value at `t`, summed along the three-term recurrence.
    pub fn eval(&self, t: f64) -> f64 {
        eval_series(&self.weight, &self.coeffs, t)
    }

    /// Weighted norm squared `Σ ξ_k v_k²`.
    pub fn norm_sq(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, v)| self.weight.xi(k) * v * v)
            .sum()
    }

    /// Copy padded with zeros (or truncated) to the given degree.
    pub fn with_degree(&self, degree: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(degree + 1, 0.0);
        Self {
            weight: self.weight,
            coeffs,
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            weight: self.weight,
            coeffs: self.coeffs.iter().map(|c| s * c).collect(),
        }
    }

    /// `self + s·other`, both in the same basis.
    pub fn axpy(&self, s: f64, other: &Expansion) -> Result<Self> {
        if self.weight != other.weight {
            return domain("expansions live in different bases");
        }
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|k| {
                self.coeffs.get(k).copied().unwrap_or(0.0)
                    + s * other.coeffs.get(k).copied().unwrap_or(0.0)
            })
            .collect();
        Ok(Self {
            weight: self.weight,
            coeffs,
        })
    }

    /// Reflection `t ↦ T − t`; uses `S_k^{a,b}(T − t) = (−1)^k S_k^{b,a}(t)`.
    pub fn reflected(&self) -> Self {
        let weight = JacobiWeight {
            a: self.weight.b,
            b: self.weight.a,
            horizon: self.weight.horizon,
        };
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| if k % 2 == 0 { *c } else { -*c })
            .collect();
        Self { weight, coeffs }
    }

    /// Diagnostic CSV with header `k,v_k`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,v_k\n");
        for (k, v) in self.coeffs.iter().enumerate() {
            let _ = writeln!(out, "{k},{v:.16e}");
        }
        out
    }
}

/// `Σ c_k S_k(t)` for the basis of `weight`.
pub fn eval_series(weight: &JacobiWeight, coeffs: &[f64], t: f64) -> f64 {
    let (a, b) = (weight.a, weight.b);
    let x = to_reference(weight.horizon, t);
    let n = coeffs.len();
    if n == 0 {
        return 0.0;
    }
    if n == 1 {
        return coeffs[0];
    }
    let mut p0 = 1.0;
    let mut p1 = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x;
    let mut sum = coeffs[0] + coeffs[1] * p1;
    for (k, c) in coeffs.iter().enumerate().skip(2) {
        let kf = k as f64;
        let s = 2.0 * kf + a + b;
        let den = 2.0 * kf * (kf + a + b) * (s - 2.0);
        let c1 = (s - 1.0) * s * (s - 2.0) / den;
        let c0 = (s - 1.0) * (a * a - b * b) / den;
        let c2 = 2.0 * (kf + a - 1.0) * (kf + b - 1.0) * s / den;
        let p2 = (c1 * x + c0) * p1 - c2 * p0;
        sum += c * p2;
        p0 = p1;
        p1 = p2;
    }
    sum
}

/// `v_k = ⟨f, S_k⟩_μ / ξ_k` for `k ≤ M`, integrals by `rule`.
///
/// Fails with an accuracy error when the rule is a Gauss rule too small to
/// integrate `S_M²` exactly.
pub fn project<F: Fn(f64) -> f64>(
    f: F,
    weight: &JacobiWeight,
    m: usize,
    rule: &QuadratureRule,
) -> Result<Expansion> {
    if rule.weight() != weight {
        return domain("quadrature rule weight does not match projection weight");
    }
    if let Some(d) = rule.exact_degree() {
        if d < 2 * m {
            return Err(Error::Accuracy(format!(
                "rule exact to degree {d} cannot resolve a degree-{m} projection"
            )));
        }
    }
    let mut acc = vec![0.0; m + 1];
    let mut row = vec![0.0; m + 1];
    for (&t, &w) in rule.nodes().iter().zip(rule.weights()) {
        let fw = f(t) * w;
        if fw == 0.0 {
            continue;
        }
        eval_all(weight, t, &mut row);
        for (a, s) in acc.iter_mut().zip(&row) {
            *a += fw * s;
        }
    }
    let coeffs = acc
        .iter()
        .enumerate()
        .map(|(k, a)| a / weight.xi(k))
        .collect();
    Expansion::new(*weight, coeffs)
}

/// Projection with an `(M + 40)`-point Gauss rule of the matching weight.
pub fn project_gauss<F: Fn(f64) -> f64>(f: F, weight: &JacobiWeight, m: usize) -> Result<Expansion> {
    let rule = gauss_rule(weight, m + 40)?;
    project(f, weight, m, &rule)
}

/// Projection through a graded composite rule, for `f` with algebraic
/// singularities at `t = 0`.
pub fn project_graded<F: Fn(f64) -> f64>(f: F, weight: &JacobiWeight, m: usize) -> Result<Expansion> {
    let rule = graded_rule_for_degree(weight, 2 * m)?;
    project(f, weight, m, &rule)
}

/// Re-expansion of `e` in the basis of `target`; exact up to rounding.
pub fn change_basis(e: &Expansion, target: &JacobiWeight) -> Result<Expansion> {
    if (e.weight.horizon - target.horizon).abs() > 1e-14 * target.horizon {
        return domain("basis change requires a common horizon");
    }
    if e.weight == *target {
        return Ok(e.clone());
    }
    let m = e.degree();
    if m > MAX_BASIS_CHANGE_DEGREE {
        return domain(format!(
            "basis change degree {m} exceeds the cap {MAX_BASIS_CHANGE_DEGREE}"
        ));
    }
    let rule = gauss_rule(target, m + 1)?;
    project(|t| e.eval(t), target, m, &rule)
}

/// Matrix `C` with `C[k][j]` = coefficient of `target` `S_k` in the expansion
/// of `source` `S_j`, for `j, k ≤ degree`. Upper triangular.
pub fn basis_change_matrix(
    source: &JacobiWeight,
    target: &JacobiWeight,
    degree: usize,
) -> Result<Vec<Vec<f64>>> {
    if (source.horizon - target.horizon).abs() > 1e-14 * target.horizon {
        return domain("basis change requires a common horizon");
    }
    if degree > MAX_BASIS_CHANGE_DEGREE {
        return domain(format!(
            "basis change degree {degree} exceeds the cap {MAX_BASIS_CHANGE_DEGREE}"
        ));
    }
    let n = degree + 1;
    let rule = gauss_rule(target, n)?;
    let mut c = vec![vec![0.0; n]; n];
    let mut src = vec![0.0; n];
    let mut tgt = vec![0.0; n];
    for (&t, &w) in rule.nodes().iter().zip(rule.weights()) {
        let x = to_reference(target.horizon, t);
        jacobi_p_all(source.a, source.b, x, &mut src);
        jacobi_p_all(target.a, target.b, x, &mut tgt);
        for k in 0..n {
            let wk = w * tgt[k];
            for j in k..n {
                c[k][j] += wk * src[j];
            }
        }
    }
    for (k, row) in c.iter_mut().enumerate() {
        let xi = target.xi(k);
        for v in row.iter_mut() {
            *v /= xi;
        }
    }
    Ok(c)
}
