//! Jacobi polynomial evaluation by the three-term recurrence.
//!
//! `S_k^{a,b}(t) = P_k^{(a,b)}(2t/T − 1)`, where `P_k^{(a,b)}` is the classical
//! Jacobi polynomial on `[−1, 1]` for the weight `(1−x)^a (1+x)^b`.

use super::JacobiWeight;

/// Recurrence coefficients for `P_{n}` in terms of `P_{n−1}`, `P_{n−2}` (n ≥ 2):
/// `P_n = (c1·x + c0)·P_{n−1} − c2·P_{n−2}`.
#[inline]
fn recurrence(n: usize, a: f64, b: f64) -> (f64, f64, f64) {
    let n = n as f64;
    let s = 2.0 * n + a + b;
    let den = 2.0 * n * (n + a + b) * (s - 2.0);
    let c1 = (s - 1.0) * s * (s - 2.0) / den;
    let c0 = (s - 1.0) * (a * a - b * b) / den;
    let c2 = 2.0 * (n + a - 1.0) * (n + b - 1.0) * s / den;
    (c1, c0, c2)
}

/// Classical `P_n^{(a,b)}(x)`.
pub fn jacobi_p(n: usize, a: f64, b: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut p0 = 1.0;
    let mut p1 = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x;
    for k in 2..=n {
        let (c1, c0, c2) = recurrence(k, a, b);
        let p2 = (c1 * x + c0) * p1 - c2 * p0;
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// `P_n^{(a,b)}(x)` and its derivative.
pub fn jacobi_p_with_derivative(n: usize, a: f64, b: f64, x: f64) -> (f64, f64) {
    let p = jacobi_p(n, a, b, x);
    if n == 0 {
        return (p, 0.0);
    }
    let dp = 0.5 * (n as f64 + a + b + 1.0) * jacobi_p(n - 1, a + 1.0, b + 1.0, x);
    (p, dp)
}

/// Fills `out[k] = P_k^{(a,b)}(x)` for `k = 0..out.len()`.
pub fn jacobi_p_all(a: f64, b: f64, x: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = 1.0;
    if out.len() == 1 {
        return;
    }
    out[1] = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x;
    for k in 2..out.len() {
        let (c1, c0, c2) = recurrence(k, a, b);
        out[k] = (c1 * x + c0) * out[k - 1] - c2 * out[k - 2];
    }
}

/// Value of `S_k^{a,b}(t)`.
pub fn eval(weight: &JacobiWeight, k: usize, t: f64) -> f64 {
    jacobi_p(k, weight.a, weight.b, to_reference(weight.horizon, t))
}

/// `out[k] = S_k^{a,b}(t)` for `k = 0..out.len()`.
pub fn eval_all(weight: &JacobiWeight, t: f64, out: &mut [f64]) {
    jacobi_p_all(weight.a, weight.b, to_reference(weight.horizon, t), out);
}

/// Dense table `S_k(t_i)`, row `i` for node `t_i`, `degree + 1` columns.
pub fn vandermonde(weight: &JacobiWeight, degree: usize, nodes: &[f64]) -> Vec<Vec<f64>> {
    nodes
        .iter()
        .map(|&t| {
            let mut row = vec![0.0; degree + 1];
            eval_all(weight, t, &mut row);
            row
        })
        .collect()
}

#[inline]
pub(crate) fn to_reference(horizon: f64, t: f64) -> f64 {
    2.0 * t / horizon - 1.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_degrees() {
        let w = JacobiWeight::legendre(1.0).unwrap();
        for &t in &[0.0, 0.13, 0.5, 0.77, 1.0] {
            assert_eq!(eval(&w, 0, t), 1.0);
            assert!((eval(&w, 1, t) - (2.0 * t - 1.0)).abs() < 1e-15);
            let x = 2.0 * t - 1.0;
            assert!((eval(&w, 2, t) - 0.5 * (3.0 * x * x - 1.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn endpoint_value() {
        // P_n^{(a,b)}(1) = Γ(n+a+1)/(Γ(a+1) n!)
        let (a, b) = (-0.4, 0.7);
        let mut expected = 1.0;
        for n in 0..30 {
            let v = jacobi_p(n, a, b, 1.0);
            assert!((v - expected).abs() < 1e-12 * expected.abs().max(1.0), "n={n}");
            expected *= (n as f64 + 1.0 + a) / (n as f64 + 1.0);
        }
    }

    #[test]
    fn all_matches_single() {
        let (a, b) = (-0.25, -0.6);
        let mut out = vec![0.0; 25];
        jacobi_p_all(a, b, 0.37, &mut out);
        for (n, v) in out.iter().enumerate() {
            assert!((v - jacobi_p(n, a, b, 0.37)).abs() < 1e-14);
        }
    }
}
