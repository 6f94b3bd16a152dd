//! Spectral Galerkin solver for `D^α_{0+}(y − y₀) + λy = g` on `(0, T)`.
//!
//! The unknown is `ỹ = y − y₀ ∈ P_M(0,T)`, expanded in Legendre polynomials
//! `L_i = S_i^{0,0}`. With test functions `L_i` the Galerkin system is
//!
//! ```text
//! Σ_j (F[i][j] + λ T/(2i+1) δ_ij) ŷ_j = ⟨g, L_i⟩ − λ y₀ T δ_i0
//! F[i][j] = ⟨D^{α/2}_{0+} L_j, D^{α/2}_{T−} L_i⟩
//! ```
//!
//! `F` is independent of `λ` and cached per `(α, M, T)`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use nalgebra::{DMatrix, DVector};

use crate::error::{domain, Error, Result};
use crate::jacobi::quadrature::gauss_rule;
use crate::jacobi::{Expansion, JacobiWeight, PairingOperator};
use crate::special::ScalarOdeData;

type BlockKey = (u64, usize, u64);

fn block_cache() -> &'static RwLock<HashMap<BlockKey, Arc<DMatrix<f64>>>> {
    static CACHE: OnceLock<RwLock<HashMap<BlockKey, Arc<DMatrix<f64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// The fractional block `F` for Legendre trial and test functions of degree `≤ M`.
pub fn fractional_block(alpha: f64, m: usize, horizon: f64) -> Result<Arc<DMatrix<f64>>> {
    let key = (alpha.to_bits(), m, horizon.to_bits());
    if let Some(f) = block_cache().read().expect("block cache poisoned").get(&key) {
        return Ok(f.clone());
    }
    let op = PairingOperator::new(alpha, horizon, m)?;
    let rows = op.matrix();
    let f = Arc::new(DMatrix::from_fn(m + 1, m + 1, |i, j| rows[i][j]));
    block_cache()
        .write()
        .expect("block cache poisoned")
        .insert(key, f.clone());
    Ok(f)
}

/// Galerkin matrix `F + λ·diag(T/(2i+1))`.
pub fn assemble(alpha: f64, lambda: f64, m: usize, horizon: f64) -> Result<DMatrix<f64>> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return domain(format!("alpha must lie in (0,1), got {alpha}"));
    }
    if !(horizon > 0.0) {
        return domain("horizon must be positive");
    }
    let mut a = (*fractional_block(alpha, m, horizon)?).clone();
    for i in 0..=m {
        a[(i, i)] += lambda * horizon / (2.0 * i as f64 + 1.0);
    }
    Ok(a)
}

/// Right-hand side `g` of the scalar problem.
#[derive(Clone)]
pub enum Forcing {
    Zero,
    Constant(f64),
    /// `coef · t^exponent`, `exponent > −1`; integrated with a Jacobi-weighted rule.
    Power { coef: f64, exponent: f64 },
    /// Smooth `g`, integrated by Gauss–Legendre with `M + 40` nodes.
    Function(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
    /// Precomputed moments `⟨g, L_i⟩`, `i = 0..`.
    Moments(Vec<f64>),
    Sum(Vec<Forcing>),
}

impl fmt::Debug for Forcing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Forcing::Zero => write!(f, "Zero"),
            Forcing::Constant(c) => write!(f, "Constant({c})"),
            Forcing::Power { coef, exponent } => write!(f, "Power({coef}·t^{exponent})"),
            Forcing::Function(_) => write!(f, "Function(..)"),
            Forcing::Moments(m) => write!(f, "Moments({} entries)", m.len()),
            Forcing::Sum(terms) => f.debug_list().entries(terms).finish(),
        }
    }
}

impl Forcing {
    pub fn function<F: Fn(f64) -> f64 + Send + Sync + 'static>(g: F) -> Self {
        Forcing::Function(Arc::new(g))
    }

    /// `s·g`.
    pub fn scaled(&self, s: f64) -> Self {
        match self {
            Forcing::Zero => Forcing::Zero,
            Forcing::Constant(c) => Forcing::Constant(s * c),
            Forcing::Power { coef, exponent } => Forcing::Power {
                coef: s * coef,
                exponent: *exponent,
            },
            Forcing::Function(g) => {
                let g = g.clone();
                Forcing::Function(Arc::new(move |t| s * g(t)))
            }
            Forcing::Moments(m) => Forcing::Moments(m.iter().map(|v| s * v).collect()),
            Forcing::Sum(terms) => Forcing::Sum(terms.iter().map(|t| t.scaled(s)).collect()),
        }
    }

    /// Pointwise value (not available for [`Forcing::Moments`]).
    pub fn eval(&self, t: f64) -> Option<f64> {
        match self {
            Forcing::Zero => Some(0.0),
            Forcing::Constant(c) => Some(*c),
            Forcing::Power { coef, exponent } => Some(coef * t.powf(*exponent)),
            Forcing::Function(g) => Some(g(t)),
            Forcing::Moments(_) => None,
            Forcing::Sum(terms) => terms.iter().map(|x| x.eval(t)).sum(),
        }
    }

    /// `b_i = ⟨g, L_i⟩_{(0,T)}` for `i ≤ M`.
    pub fn moments(&self, m: usize, horizon: f64) -> Result<Vec<f64>> {
        let legendre = JacobiWeight::legendre(horizon)?;
        let mut b = vec![0.0; m + 1];
        match self {
            Forcing::Zero => {}
            Forcing::Constant(c) => b[0] = c * horizon,
            Forcing::Power { coef, exponent } => {
                if !(*exponent > -1.0) {
                    return domain(format!("forcing exponent {exponent} must exceed -1"));
                }
                let w = JacobiWeight::new(0.0, *exponent, horizon)?;
                let rule = gauss_rule(&w, m + 40)?;
                accumulate(&mut b, rule.nodes(), rule.weights(), &legendre, |_| *coef);
            }
            Forcing::Function(g) => {
                let rule = gauss_rule(&legendre, m + 40)?;
                accumulate(&mut b, rule.nodes(), rule.weights(), &legendre, |t| g(t));
            }
            Forcing::Moments(v) => {
                for (bi, vi) in b.iter_mut().zip(v) {
                    *bi = *vi;
                }
            }
            Forcing::Sum(terms) => {
                for term in terms {
                    for (bi, v) in b.iter_mut().zip(term.moments(m, horizon)?) {
                        *bi += v;
                    }
                }
            }
        }
        Ok(b)
    }
}

fn accumulate<G: Fn(f64) -> f64>(
    b: &mut [f64],
    nodes: &[f64],
    weights: &[f64],
    legendre: &JacobiWeight,
    g: G,
) {
    let mut row = vec![0.0; b.len()];
    for (&t, &w) in nodes.iter().zip(weights) {
        let gw = g(t) * w;
        crate::jacobi::poly::eval_all(legendre, t, &mut row);
        for (bi, l) in b.iter_mut().zip(&row) {
            *bi += gw * l;
        }
    }
}

#[derive(Debug, Clone)]
pub struct FracOdeProblem {
    pub data: ScalarOdeData,
    pub forcing: Forcing,
}

impl FracOdeProblem {
    pub fn new(data: ScalarOdeData, forcing: Forcing) -> Result<Self> {
        data.validate()?;
        if !(data.alpha < 1.0) {
            return domain("the Galerkin solver needs 0 < alpha < 1");
        }
        Ok(Self { data, forcing })
    }

    pub fn homogeneous(alpha: f64, lambda: f64, y0: f64, horizon: f64) -> Result<Self> {
        Self::new(ScalarOdeData::new(alpha, lambda, y0, horizon)?, Forcing::Zero)
    }

    /// Galerkin right-hand side `⟨g, L_i⟩ − λ y₀ T δ_i0`.
    pub fn rhs(&self, m: usize) -> Result<Vec<f64>> {
        let mut b = self.forcing.moments(m, self.data.horizon)?;
        b[0] -= self.data.lambda * self.data.y0 * self.data.horizon;
        Ok(b)
    }
}

/// `y = offset + poly`, `poly` a Legendre expansion of degree `M`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarSpectralSolution {
    pub offset: f64,
    pub poly: Expansion,
}

impl ScalarSpectralSolution {
    pub fn eval(&self, t: f64) -> f64 {
        self.offset + self.poly.eval(t)
    }

    pub fn degree(&self) -> usize {
        self.poly.degree()
    }

    pub fn horizon(&self) -> f64 {
        self.poly.horizon()
    }

    /// Legendre coefficients of `offset + poly`, padded to `degree`.
    pub fn total_coeffs(&self, degree: usize) -> Vec<f64> {
        let mut c = self.poly.coeffs().to_vec();
        c.resize(degree.max(self.degree()) + 1, 0.0);
        c[0] += self.offset;
        c
    }

    /// `‖y‖²_{L²(0,T)}`.
    pub fn l2_norm_sq(&self) -> f64 {
        let deg = self.degree();
        let horizon = self.horizon();
        self.total_coeffs(deg)
            .iter()
            .enumerate()
            .map(|(k, c)| c * c * horizon / (2.0 * k as f64 + 1.0))
            .sum()
    }
}

/// One Galerkin solve with a degree-`M` Legendre trial space.
pub fn solve(problem: &FracOdeProblem, m: usize) -> Result<ScalarSpectralSolution> {
    let d = &problem.data;
    let a = assemble(d.alpha, d.lambda, m, d.horizon)?;
    let b = DVector::from_vec(problem.rhs(m)?);
    let x = a
        .lu()
        .solve(&b)
        .ok_or_else(|| Error::Numeric("singular Galerkin matrix".into()))?;
    Ok(ScalarSpectralSolution {
        offset: d.y0,
        poly: Expansion::new(JacobiWeight::legendre(d.horizon)?, x.as_slice().to_vec())?,
    })
}

/// `max_i |(Aŷ − b)_i| / max_i (|Aŷ|_i + |b_i|)`, the scaled Galerkin residual.
pub fn residual_check(problem: &FracOdeProblem, sol: &ScalarSpectralSolution) -> Result<f64> {
    let d = &problem.data;
    let m = sol.degree();
    if (sol.offset - d.y0).abs() > 0.0 {
        return Ok(f64::INFINITY);
    }
    let a = assemble(d.alpha, d.lambda, m, d.horizon)?;
    let b = problem.rhs(m)?;
    let y = DVector::from_column_slice(sol.poly.coeffs());
    let ay = &a * &y;
    let mut num: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for i in 0..=m {
        num = num.max((ay[i] - b[i]).abs());
        let row: f64 = (0..=m).map(|j| (a[(i, j)] * y[j]).abs()).sum();
        scale = scale.max(row + b[i].abs());
    }
    Ok(if scale == 0.0 { num } else { num / scale })
}
