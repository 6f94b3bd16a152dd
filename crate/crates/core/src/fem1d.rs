//! Linear finite elements on `(0, 1)` with homogeneous Dirichlet conditions.
//!
//! Only interior nodes carry degrees of freedom. The generalised eigenproblem
//! `K φ = λ M φ` is reduced with the Cholesky factor of the (tridiagonal) mass
//! matrix and solved densely; the resulting basis is cached per mesh.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{domain, Error, Result};
use crate::jacobi::quadrature::reference_rule;

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh1D {
    nodes: Vec<f64>,
}

impl Mesh1D {
    /// `0 = x_0 < … < x_N = 1`.
    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 3 {
            return domain("mesh needs at least one interior node");
        }
        if nodes[0] != 0.0 || *nodes.last().unwrap() != 1.0 {
            return domain("mesh must span [0, 1]");
        }
        if nodes.windows(2).any(|p| !(p[1] > p[0])) {
            return domain("mesh nodes must be strictly increasing");
        }
        Ok(Self { nodes })
    }

    /// Uniform mesh with `n` elements.
    pub fn uniform(n: usize) -> Result<Self> {
        if n < 2 {
            return domain("uniform mesh needs at least two elements");
        }
        let mut nodes: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
        nodes[n] = 1.0;
        Self::from_nodes(nodes)
    }

    /// Uniform mesh with `h = 2^{−level}`.
    pub fn dyadic(level: u32) -> Result<Self> {
        Self::uniform(1usize << level)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn elements(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn dofs(&self) -> usize {
        self.nodes.len() - 2
    }

    /// Largest element length.
    pub fn h(&self) -> f64 {
        self.nodes
            .windows(2)
            .map(|p| p[1] - p[0])
            .fold(0.0, f64::max)
    }

    pub fn is_uniform(&self) -> bool {
        let h0 = self.nodes[1] - self.nodes[0];
        self.nodes
            .windows(2)
            .all(|p| ((p[1] - p[0]) - h0).abs() <= 1e-12 * h0)
    }

    /// Piecewise-linear interpolant of interior nodal values at `x`.
    pub fn interpolate(&self, values: &[f64], x: f64) -> Result<f64> {
        if values.len() != self.dofs() {
            return domain("nodal vector length does not match the mesh");
        }
        if !(0.0..=1.0).contains(&x) {
            return domain(format!("x = {x} outside [0, 1]"));
        }
        let e = match self.nodes.binary_search_by(|p| p.partial_cmp(&x).unwrap()) {
            Ok(i) => return Ok(self.nodal(values, i)),
            Err(i) => i - 1,
        };
        let (x0, x1) = (self.nodes[e], self.nodes[e + 1]);
        let s = (x - x0) / (x1 - x0);
        Ok((1.0 - s) * self.nodal(values, e) + s * self.nodal(values, e + 1))
    }

    /// Value at global node `i` (zero on the boundary).
    fn nodal(&self, values: &[f64], i: usize) -> f64 {
        if i == 0 || i == self.nodes.len() - 1 {
            0.0
        } else {
            values[i - 1]
        }
    }
}

/// Symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    /// `off[i]` couples rows `i` and `i + 1`.
    pub off: Vec<f64>,
}

impl Tridiagonal {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn mul(&self, v: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * v[i];
                if i > 0 {
                    s += self.off[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    s += self.off[i] * v[i + 1];
                }
                s
            })
            .collect()
    }

    /// `vᵀ A w`.
    pub fn form(&self, v: &[f64], w: &[f64]) -> f64 {
        self.mul(w).iter().zip(v).map(|(a, b)| a * b).sum()
    }

    /// Thomas algorithm; the matrix must be nonsingular without pivoting.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.len();
        if rhs.len() != n {
            return domain("right-hand side length mismatch");
        }
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let mut denom = self.diag[0];
        if denom == 0.0 {
            return Err(Error::Numeric("zero pivot in tridiagonal solve".into()));
        }
        if n > 1 {
            c[0] = self.off[0] / denom;
        }
        d[0] = rhs[0] / denom;
        for i in 1..n {
            denom = self.diag[i] - self.off[i - 1] * c[i - 1];
            if denom == 0.0 {
                return Err(Error::Numeric("zero pivot in tridiagonal solve".into()));
            }
            if i + 1 < n {
                c[i] = self.off[i] / denom;
            }
            d[i] = (rhs[i] - self.off[i - 1] * d[i - 1]) / denom;
        }
        for i in (0..n - 1).rev() {
            d[i] -= c[i] * d[i + 1];
        }
        Ok(d)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.len();
        DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                self.diag[i]
            } else if j == i + 1 {
                self.off[i]
            } else if i == j + 1 {
                self.off[j]
            } else {
                0.0
            }
        })
    }
}

/// Mass and stiffness matrices on the interior nodes.
pub fn assemble_matrices(mesh: &Mesh1D) -> (Tridiagonal, Tridiagonal) {
    let x = mesh.nodes();
    let n = mesh.dofs();
    let mut mass = Tridiagonal {
        diag: vec![0.0; n],
        off: vec![0.0; n.saturating_sub(1)],
    };
    let mut stiff = mass.clone();
    for i in 0..n {
        let hl = x[i + 1] - x[i];
        let hr = x[i + 2] - x[i + 1];
        mass.diag[i] = (hl + hr) / 3.0;
        stiff.diag[i] = 1.0 / hl + 1.0 / hr;
        if i + 1 < n {
            mass.off[i] = hr / 6.0;
            stiff.off[i] = -1.0 / hr;
        }
    }
    (mass, stiff)
}

/// Discrete eigenpairs, mass-orthonormal, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct ModalBasis {
    mesh: Mesh1D,
    mass: Tridiagonal,
    stiffness: Tridiagonal,
    eigenvalues: Vec<f64>,
    /// Column `n` holds the nodal values of `φ_n`.
    vectors: DMatrix<f64>,
}

impl ModalBasis {
    pub fn mesh(&self) -> &Mesh1D {
        &self.mesh
    }

    pub fn mass(&self) -> &Tridiagonal {
        &self.mass
    }

    pub fn stiffness(&self) -> &Tridiagonal {
        &self.stiffness
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn vectors(&self) -> &DMatrix<f64> {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Nodal values of `φ_n`.
    pub fn mode(&self, n: usize) -> Vec<f64> {
        self.vectors.column(n).iter().copied().collect()
    }

    /// `c = Φᵀ M v`.
    pub fn modal_coeffs(&self, nodal: &[f64]) -> Result<Vec<f64>> {
        if nodal.len() != self.len() {
            return domain("nodal vector length does not match the basis");
        }
        Ok(self.project_load(&self.mass.mul(nodal)))
    }

    /// `c = Φᵀ b` for a load vector `b = (⟨f, ψ_j⟩)_j`, i.e. the modal
    /// coefficients of the `L²` projection of `f`.
    pub fn project_load(&self, load: &[f64]) -> Vec<f64> {
        self.vectors.tr_mul(&nalgebra::DVector::from_column_slice(load)).iter().copied().collect()
    }

    /// `v = Φ c`.
    pub fn from_modal(&self, coeffs: &[f64]) -> Result<Vec<f64>> {
        if coeffs.len() != self.len() {
            return domain("coefficient vector length does not match the basis");
        }
        Ok((&self.vectors * nalgebra::DVector::from_column_slice(coeffs))
            .iter()
            .copied()
            .collect())
    }
}

fn eig_cache() -> &'static Mutex<HashMap<Vec<u64>, Arc<ModalBasis>>> {
    static CACHE: OnceLock<Mutex<HashMap<Vec<u64>, Arc<ModalBasis>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Generalised eigendecomposition, cached by mesh.
pub fn eig(mesh: &Mesh1D) -> Result<Arc<ModalBasis>> {
    let key: Vec<u64> = mesh.nodes().iter().map(|x| x.to_bits()).collect();
    // Holding the lock while computing keeps concurrent callers from
    // duplicating the O(N³) work; the cache is read-mostly.
    let mut cache = eig_cache().lock().expect("eigen cache poisoned");
    if let Some(b) = cache.get(&key) {
        return Ok(b.clone());
    }
    let basis = Arc::new(compute_eig(mesh)?);
    cache.insert(key, basis.clone());
    Ok(basis)
}

fn compute_eig(mesh: &Mesh1D) -> Result<ModalBasis> {
    let (mass, stiffness) = assemble_matrices(mesh);
    let n = mass.len();

    // M = L Lᵀ with L lower bidiagonal.
    let mut ld = vec![0.0; n];
    let mut ll = vec![0.0; n.saturating_sub(1)];
    for i in 0..n {
        let mut d = mass.diag[i];
        if i > 0 {
            d -= ll[i - 1] * ll[i - 1];
        }
        if !(d > 0.0) {
            return Err(Error::Numeric("mass matrix not positive definite".into()));
        }
        ld[i] = d.sqrt();
        if i + 1 < n {
            ll[i] = mass.off[i] / ld[i];
        }
    }
    let forward = |col: &mut [f64]| {
        col[0] /= ld[0];
        for i in 1..n {
            col[i] = (col[i] - ll[i - 1] * col[i - 1]) / ld[i];
        }
    };

    // C = L⁻¹ K L⁻ᵀ: X = L⁻¹ K column by column, then C = L⁻¹ Xᵀ.
    let kd = stiffness.to_dense();
    let mut x = kd;
    for mut col in x.column_iter_mut() {
        forward(col.as_mut_slice());
    }
    let mut c = x.transpose();
    for mut col in c.column_iter_mut() {
        forward(col.as_mut_slice());
    }
    let c = 0.5 * (&c + c.transpose());

    let se = SymmetricEigen::try_new(c, f64::EPSILON, 0)
        .ok_or_else(|| Error::Numeric("symmetric eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| se.eigenvalues[i].partial_cmp(&se.eigenvalues[j]).unwrap());

    let mut vectors = DMatrix::<f64>::zeros(n, n);
    let mut eigenvalues = Vec::with_capacity(n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvalues.push(se.eigenvalues[src]);
        // φ = L⁻ᵀ q
        let mut v: Vec<f64> = se.eigenvectors.column(src).iter().copied().collect();
        v[n - 1] /= ld[n - 1];
        for i in (0..n - 1).rev() {
            v[i] = (v[i] - ll[i] * v[i + 1]) / ld[i];
        }
        let scale = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        let first = v.iter().find(|x| x.abs() > 1e-8 * scale).copied().unwrap_or(1.0);
        let sign = if first < 0.0 { -1.0 } else { 1.0 };
        for (i, vi) in v.iter().enumerate() {
            vectors[(i, dst)] = sign * vi;
        }
    }
    Ok(ModalBasis {
        mesh: mesh.clone(),
        mass,
        stiffness,
        eigenvalues,
        vectors,
    })
}

/// `(6/h²)(1 − cos nπh)/(2 + cos nπh)`, the exact P1 eigenvalues on a uniform mesh.
pub fn uniform_eigenvalue(h: f64, n: usize) -> f64 {
    let c = (n as f64 * std::f64::consts::PI * h).cos();
    6.0 / (h * h) * (1.0 - c) / (2.0 + c)
}

/// Known algebraic endpoint behaviour of the data, used to grade the
/// element quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EndpointSingularity {
    pub left: bool,
    pub right: bool,
}

impl EndpointSingularity {
    pub const NONE: Self = Self {
        left: false,
        right: false,
    };
    pub const LEFT: Self = Self {
        left: true,
        right: false,
    };
    pub const RIGHT: Self = Self {
        left: false,
        right: true,
    };
}

const ELEMENT_POINTS: usize = 8;
/// Points per geometric sub-panel; a ratio-4 panel needs about 16 for 1e-15.
const GRADED_POINTS: usize = 16;

/// `b_j = ⟨f, ψ_j⟩` for the interior hat functions.
///
/// Elements touching a flagged endpoint use geometrically graded sub-panels,
/// deepened until every entry changes by less than `1e-11` (relative).
pub fn load_vector<F: Fn(f64) -> f64>(
    mesh: &Mesh1D,
    f: F,
    singular: EndpointSingularity,
) -> Result<Vec<f64>> {
    let gl = reference_rule(ELEMENT_POINTS, 0.0, 0.0)?;
    let gl_graded = reference_rule(GRADED_POINTS, 0.0, 0.0)?;
    let x = mesh.nodes();
    let ne = mesh.elements();
    let mut b = vec![0.0; mesh.dofs()];
    // (∫ f ψ_left, ∫ f ψ_right) on [x0, x1] over the sub-interval [a, c].
    let panel = |rule: &(Vec<f64>, Vec<f64>), x0: f64, x1: f64, a: f64, c: f64| -> (f64, f64) {
        let half = 0.5 * (c - a);
        let mid = 0.5 * (c + a);
        let mut acc = (0.0, 0.0);
        for (&r, &w) in rule.0.iter().zip(rule.1.iter()) {
            let s = mid + half * r;
            let fv = f(s) * w * half;
            let phi = (s - x0) / (x1 - x0);
            acc.0 += fv * (1.0 - phi);
            acc.1 += fv * phi;
        }
        acc
    };
    let graded = |x0: f64, x1: f64, toward_left: bool, levels: usize| -> (f64, f64) {
        let mut acc = (0.0, 0.0);
        let len = x1 - x0;
        let ratio = 0.25_f64;
        for j in 0..levels {
            let (near, far) = (len * ratio.powi(j as i32 + 1), len * ratio.powi(j as i32));
            let (a, c) = if toward_left {
                (x0 + near, x0 + far)
            } else {
                (x1 - far, x1 - near)
            };
            let v = panel(&gl_graded, x0, x1, a, c);
            acc.0 += v.0;
            acc.1 += v.1;
        }
        acc
    };
    for e in 0..ne {
        let (x0, x1) = (x[e], x[e + 1]);
        let left_end = e == 0 && singular.left;
        let right_end = e == ne - 1 && singular.right;
        let (vl, vr) = if left_end || right_end {
            let mut levels = 8;
            let mut prev = graded(x0, x1, left_end, levels);
            loop {
                levels *= 2;
                let next = graded(x0, x1, left_end, levels);
                let scale = next.0.abs().max(next.1.abs()).max(1e-300);
                let change = (next.0 - prev.0).abs().max((next.1 - prev.1).abs());
                prev = next;
                if change <= 1e-11 * scale || levels >= 256 {
                    break;
                }
            }
            prev
        } else {
            panel(&gl, x0, x1, x0, x1)
        };
        if e >= 1 {
            b[e - 1] += vl;
        }
        if e < mesh.dofs() {
            b[e] += vr;
        }
    }
    Ok(b)
}

/// Nodal values of the `L²(Ω)` projection of `f` onto the P1 space.
pub fn l2_project<F: Fn(f64) -> f64>(
    mesh: &Mesh1D,
    f: F,
    singular: EndpointSingularity,
) -> Result<Vec<f64>> {
    let (mass, _) = assemble_matrices(mesh);
    mass.solve(&load_vector(mesh, f, singular)?)
}

/// Modal coefficients `Φᵀ M v`.
pub fn modal_coeffs(basis: &ModalBasis, nodal: &[f64]) -> Result<Vec<f64>> {
    basis.modal_coeffs(nodal)
}

/// Nodal values `Φ c`.
pub fn from_modal(basis: &ModalBasis, coeffs: &[f64]) -> Result<Vec<f64>> {
    basis.from_modal(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_interior_dof() {
        let mesh = Mesh1D::uniform(2).unwrap();
        let (m, k) = assemble_matrices(&mesh);
        assert!((k.diag[0] - 4.0).abs() < 1e-15);
        assert!((m.diag[0] - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn thomas_matches_dense() {
        let t = Tridiagonal {
            diag: vec![4.0, 5.0, 6.0, 7.0],
            off: vec![1.0, -2.0, 0.5],
        };
        let rhs = [1.0, 2.0, 3.0, 4.0];
        let x = t.solve(&rhs).unwrap();
        let back = t.mul(&x);
        for (a, b) in back.iter().zip(&rhs) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn interpolation_vanishes_on_boundary() {
        let mesh = Mesh1D::uniform(4).unwrap();
        let v = [1.0, 2.0, 3.0];
        assert_eq!(mesh.interpolate(&v, 0.0).unwrap(), 0.0);
        assert_eq!(mesh.interpolate(&v, 1.0).unwrap(), 0.0);
        assert!((mesh.interpolate(&v, 0.375).unwrap() - 1.5).abs() < 1e-15);
        assert!(mesh.interpolate(&v, 1.5).is_err());
    }
}
