//! Gauss–Jacobi rules and graded composite rules on `(0, T)`.
//!
//! Gauss rules come from the Golub–Welsch eigenvalue problem, after which every
//! node is polished by Newton's method on the recurrence and the weights are
//! taken from the closed-form Christoffel numbers. Rules are cached per
//! `(a, b, n)`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use super::poly::jacobi_p_with_derivative;
use super::JacobiWeight;
use crate::error::{domain, Error, Result};
use crate::special::gamma::ln_gamma;

/// Nodes and weights approximating `∫₀ᵀ g(t) μ^{a,b}(t) dt ≈ Σ wᵢ g(tᵢ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    weight: JacobiWeight,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    exact_degree: Option<usize>,
}

impl QuadratureRule {
    pub fn weight(&self) -> &JacobiWeight {
        &self.weight
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Highest polynomial degree integrated exactly (Gauss rules only).
    pub fn exact_degree(&self) -> Option<usize> {
        self.exact_degree
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&t, &w)| w * f(t)).sum()
    }
}

type RefRule = Arc<(Vec<f64>, Vec<f64>)>;
type RuleCache = RwLock<HashMap<(u64, u64, usize), RefRule>>;

fn cache() -> &'static RuleCache {
    static CACHE: OnceLock<RuleCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Gauss–Jacobi rule on `[−1, 1]` for `(1−x)^a (1+x)^b`, nodes ascending.
pub fn reference_rule(n: usize, a: f64, b: f64) -> Result<RefRule> {
    if n == 0 {
        return domain("quadrature rule needs at least one node");
    }
    if !(a > -1.0 && b > -1.0) {
        return domain(format!("Jacobi exponents must exceed -1, got a = {a}, b = {b}"));
    }
    let key = (a.to_bits(), b.to_bits(), n);
    if let Some(rule) = cache().read().expect("quadrature cache poisoned").get(&key) {
        return Ok(rule.clone());
    }
    let rule = Arc::new(golub_welsch(n, a, b)?);
    cache()
        .write()
        .expect("quadrature cache poisoned")
        .insert(key, rule.clone());
    Ok(rule)
}

fn golub_welsch(n: usize, a: f64, b: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let ab = a + b;
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n];
    for i in 0..n {
        let k = i as f64;
        diag[i] = if i == 0 {
            (b - a) / (ab + 2.0)
        } else {
            (b * b - a * a) / ((2.0 * k + ab) * (2.0 * k + ab + 2.0))
        };
        if i + 1 < n {
            let m = k + 1.0;
            let beta = if i == 0 {
                4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))
            } else {
                let s = 2.0 * m + ab;
                4.0 * m * (m + a) * (m + b) * (m + ab) / (s * s * (s + 1.0) * (s - 1.0))
            };
            off[i] = beta.sqrt();
        }
    }
    tridiagonal_eigenvalues(&mut diag, &mut off)?;
    let mut nodes = diag;
    if nodes.iter().any(|x| !x.is_finite()) {
        return Err(Error::Numeric("Golub-Welsch eigenvalues not finite".into()));
    }
    nodes.sort_by(|x, y| x.partial_cmp(y).unwrap());

    // Christoffel numbers ∝ 1/((1 − x²) P_n'(x)²), normalised by the exact mass
    // 2^{a+b+1} B(a+1, b+1) rather than by the Gamma-ratio prefactor.
    let mass = ((ab + 1.0) * std::f64::consts::LN_2 + ln_gamma(a + 1.0)? + ln_gamma(b + 1.0)?
        - ln_gamma(ab + 2.0)?)
        .exp();
    let mut weights = Vec::with_capacity(n);
    for x in nodes.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = jacobi_p_with_derivative(n, a, b, *x);
            let step = p / dp;
            let next = *x - step;
            if next > -1.0 && next < 1.0 {
                *x = next;
            }
            if step.abs() < 1e-17 {
                break;
            }
        }
        let (_, dp) = jacobi_p_with_derivative(n, a, b, *x);
        weights.push(1.0 / ((1.0 - *x) * (1.0 + *x) * dp * dp));
    }
    let total: f64 = weights.iter().sum();
    for w in weights.iter_mut() {
        *w *= mass / total;
    }
    Ok((nodes, weights))
}

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `d` and
/// off-diagonal `e[i]` coupling rows `i` and `i + 1` (`e[n−1]` unused), by
/// implicit QL with Wilkinson shifts. Overwrites `d` with the eigenvalues.
fn tridiagonal_eigenvalues(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n > 0 {
        e[n - 1] = 0.0;
    }
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::Numeric("tridiagonal QL did not converge".into()));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let bb = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * bb;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - bb;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Gauss–Jacobi rule with `n` nodes for the weight `μ^{a,b}` on `(0, T)`.
///
/// Exact for polynomials of degree `≤ 2n − 1`.
pub fn gauss_rule(weight: &JacobiWeight, n: usize) -> Result<QuadratureRule> {
    let reference = reference_rule(n, weight.a, weight.b)?;
    let half = 0.5 * weight.horizon;
    let scale = half.powf(weight.a + weight.b + 1.0);
    let nodes = reference.0.iter().map(|&x| half * (x + 1.0)).collect();
    let weights = reference.1.iter().map(|&w| w * scale).collect();
    Ok(QuadratureRule {
        weight: *weight,
        nodes,
        weights,
        exact_degree: Some(2 * n - 1),
    })
}

/// Composite rule for `∫₀ᵀ g μ^{a,b}` when `g` has an algebraic singularity at
/// `t = 0` (terms like `t^α`, `t^{2α}`, …).
///
/// Panels are geometric, `[T·rᴶ⁺¹, T·rᴶ]`, `levels` of them; the innermost panel
/// `[0, T·r^levels]` carries the `t^b` factor in a Gauss–Jacobi rule, the
/// rightmost one the `(T − t)^a` factor. Each panel has `n_per_panel` nodes,
/// so a polynomial factor of degree `≤ 2·n_per_panel − 1` is resolved on the
/// smooth panels.
pub fn graded_rule(
    weight: &JacobiWeight,
    n_per_panel: usize,
    levels: usize,
    ratio: f64,
) -> Result<QuadratureRule> {
    if levels < 1 {
        return domain("graded rule needs at least one level");
    }
    if !(ratio > 0.0 && ratio < 1.0) {
        return domain(format!("grading ratio must lie in (0,1), got {ratio}"));
    }
    let horizon = weight.horizon;
    let (a, b) = (weight.a, weight.b);
    let mut nodes = Vec::with_capacity(n_per_panel * (levels + 1));
    let mut weights = Vec::with_capacity(n_per_panel * (levels + 1));

    let breaks: Vec<f64> = (0..=levels).map(|j| horizon * ratio.powi(j as i32)).collect();

    // Innermost panel [0, c]: weight t^b exactly, (T - t)^a pointwise.
    let c = breaks[levels];
    let inner = reference_rule(n_per_panel, 0.0, b)?;
    let scale = (0.5 * c).powf(b + 1.0);
    for (&x, &w) in inner.0.iter().zip(inner.1.iter()) {
        let t = 0.5 * c * (x + 1.0);
        nodes.push(t);
        weights.push(w * scale * pow_or_one(horizon - t, a));
    }

    let gl = reference_rule(n_per_panel, 0.0, 0.0)?;
    for j in (1..levels).rev() {
        let (lo, hi) = (breaks[j + 1], breaks[j]);
        let half = 0.5 * (hi - lo);
        for (&x, &w) in gl.0.iter().zip(gl.1.iter()) {
            let t = lo + half * (x + 1.0);
            nodes.push(t);
            weights.push(w * half * weight.eval(t));
        }
    }

    // Rightmost panel [c1, T]: weight (T - t)^a exactly, t^b pointwise.
    let lo = breaks[1];
    let half = 0.5 * (horizon - lo);
    let outer = reference_rule(n_per_panel, a, 0.0)?;
    let scale = half.powf(a + 1.0);
    for (&x, &w) in outer.0.iter().zip(outer.1.iter()) {
        let t = lo + half * (x + 1.0);
        nodes.push(t);
        weights.push(w * scale * pow_or_one(t, b));
    }

    Ok(QuadratureRule {
        weight: *weight,
        nodes,
        weights,
        exact_degree: None,
    })
}

/// Graded rule sized to resolve polynomial factors up to `degree` against a
/// function with algebraic singularities at `t = 0`.
pub fn graded_rule_for_degree(weight: &JacobiWeight, degree: usize) -> Result<QuadratureRule> {
    graded_rule(weight, degree / 2 + 32, 28, 0.25)
}

#[inline]
fn pow_or_one(x: f64, p: f64) -> f64 {
    if p == 0.0 {
        1.0
    } else {
        x.powf(p)
    }
}
