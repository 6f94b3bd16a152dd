mod common;

use common::{brute_pairing, monomials, power, power_factor, slope, Lcg};
use nalgebra::DMatrix;
use proptest::prelude::*;
use tfspec::frac_ode::{assemble, fractional_block, residual_check, solve, FracOdeProblem, Forcing, ScalarSpectralSolution};
use tfspec::jacobi::{gauss_rule, pairing_diagonal, Expansion, JacobiWeight};
use tfspec::norms::{scalar_l2_error, MixedExpansion};
use tfspec::special::{exact_constant_forcing, exact_homogeneous, ScalarOdeData};

fn problem(alpha: f64, lambda: f64, y0: f64, forcing: Forcing) -> FracOdeProblem {
    FracOdeProblem::new(ScalarOdeData::new(alpha, lambda, y0, 1.0).unwrap(), forcing).unwrap()
}

#[test]
fn one_by_one_matrix() {
    for alpha in [0.2, 0.5, 0.9] {
        let a = assemble(alpha, 0.0, 0, 1.0).unwrap();
        assert!((a[(0, 0)] - pairing_diagonal(alpha, 1.0, 0)).abs() < 1e-15);
    }
}

#[test]
fn mass_block() {
    let a1 = assemble(0.4, 1.0, 2, 1.0).unwrap();
    let a0 = assemble(0.4, 0.0, 2, 1.0).unwrap();
    let mass = [1.0, 1.0 / 3.0, 1.0 / 5.0];
    for i in 0..3 {
        for j in 0..3 {
            let expect = if i == j { mass[i] } else { 0.0 };
            assert!((a1[(i, j)] - a0[(i, j)] - expect).abs() < 1e-15);
        }
    }
}

#[test]
fn matrix_matches_quadrature_oracle() {
    let (alpha, lambda, m) = (0.4, 2.5, 6);
    let a = assemble(alpha, lambda, m, 1.0).unwrap();
    let leg = JacobiWeight::legendre(1.0).unwrap();
    let rule = gauss_rule(&leg, m + 1).unwrap();
    for i in 0..=m {
        for j in 0..=m {
            let (li, lj) = (Expansion::basis(leg, i), Expansion::basis(leg, j));
            let mass = rule.integrate(|t| li.eval(t) * lj.eval(t));
            let oracle = brute_pairing(&lj, &li, alpha) + lambda * mass;
            assert!((a[(i, j)] - oracle).abs() < 1e-8, "({i},{j}): {} vs {oracle}", a[(i, j)]);
        }
    }
}

#[test]
fn fractional_block_is_coercive() {
    for alpha in [0.25, 0.5, 0.75] {
        for m in [5, 20, 40, 60] {
            let f = fractional_block(alpha, m, 1.0).unwrap();
            let sym: DMatrix<f64> = (&*f + f.transpose()) * 0.5;
            let min = sym.symmetric_eigenvalues().min();
            assert!(min > 0.0, "α={alpha} M={m}: λ_min = {min}");
        }
    }
}

#[test]
fn no_forcing_no_decay() {
    let p = problem(0.5, 0.0, 2.0, Forcing::Zero);
    let s = solve(&p, 8).unwrap();
    assert_eq!(s.offset, 2.0);
    assert!(s.poly.coeffs().iter().all(|c| c.abs() < 1e-15));
}

/// `g = D^α p̃ + λ(y₀ + p̃)` with `p̃ = Σ c_j t^j`, `c_0 = 0`.
fn manufactured(alpha: f64, lambda: f64, y0: f64, p: &Expansion) -> Forcing {
    let c = monomials(p);
    let mut terms: Vec<Forcing> = c
        .iter()
        .enumerate()
        .skip(1)
        .map(|(j, cj)| power(cj * power_factor(j, alpha), j as f64 - alpha))
        .collect();
    let q = p.clone();
    terms.push(Forcing::function(move |t| lambda * (y0 + q.eval(t))));
    Forcing::Sum(terms)
}

#[test]
fn polynomial_solutions_are_reproduced() {
    let leg = JacobiWeight::legendre(1.0).unwrap();
    let mut rng = Lcg::new(61);
    for (alpha, lambda, y0) in [(0.3, 1.0, 1.0), (0.5, 4.0, -0.5), (0.8, 0.0, 2.0)] {
        // p̃ vanishes at t = 0.
        let mut c = rng.vec(6, -1.0, 1.0);
        let p0 = Expansion::new(leg, c.clone()).unwrap().eval(0.0);
        c[0] -= p0;
        let p = Expansion::new(leg, c).unwrap();
        let prob = problem(alpha, lambda, y0, manufactured(alpha, lambda, y0, &p));
        for m in [5, 9] {
            let s = solve(&prob, m).unwrap();
            for k in 0..=m {
                let expect = p.coeffs().get(k).copied().unwrap_or(0.0);
                assert!((s.poly.coeffs()[k] - expect).abs() < 1e-10, "α={alpha} M={m} k={k}");
            }
        }
    }
}

fn homogeneous_errors(alpha: f64, ms: &[usize]) -> Vec<(f64, f64)> {
    let p = FracOdeProblem::homogeneous(alpha, 1.0, 1.0, 1.0).unwrap();
    ms.iter()
        .map(|&m| {
            let s = solve(&p, m).unwrap();
            let e = scalar_l2_error(&s, |t| exact_homogeneous(&p.data, t).unwrap()).unwrap();
            (m as f64, e)
        })
        .collect()
}

#[test]
fn homogeneous_rate_and_monotonicity() {
    let ms: Vec<usize> = (8..=64).step_by(4).collect();
    let errs = homogeneous_errors(0.5, &ms);
    let s = slope(&errs);
    assert!((s + 2.0).abs() < 0.15, "slope {s}");
    for w in errs.windows(2) {
        assert!(w[1].1 <= w[0].1 + 1e-12, "{w:?}");
    }
}

#[test]
fn constant_forcing_rate() {
    let alpha = 0.5;
    let p = problem(alpha, 1.0, 0.0, Forcing::Constant(1.0));
    let errs: Vec<(f64, f64)> = (8..=64)
        .step_by(4)
        .map(|m| {
            let s = solve(&p, m).unwrap();
            let e = scalar_l2_error(&s, |t| exact_constant_forcing(&p.data, t).unwrap()).unwrap();
            (m as f64, e)
        })
        .collect();
    let s = slope(&errs);
    assert!((s + 1.0 + 2.0 * alpha).abs() < 0.15, "slope {s}");
}

#[test]
fn homogeneous_seminorm_rate() {
    let alpha = 0.5;
    let p = FracOdeProblem::homogeneous(alpha, 1.0, 1.0, 1.0).unwrap();
    let mixed = MixedExpansion::new(|t| exact_homogeneous(&p.data, t).unwrap(), alpha, 1.0, 1024).unwrap();
    let errs: Vec<(f64, f64)> = (8..=64)
        .step_by(4)
        .map(|m| (m as f64, mixed.seminorm_error(&solve(&p, m).unwrap()).unwrap()))
        .collect();
    let s = slope(&errs);
    assert!((s + 1.0 + alpha).abs() < 0.15, "slope {s}");
}

#[test]
fn residual_examples() {
    let p = problem(0.6, 2.0, 1.0, Forcing::function(|t| (3.0 * t).cos()));
    let s = solve(&p, 12).unwrap();
    assert!(residual_check(&p, &s).unwrap() <= 1e-10);
    let mut c = s.poly.coeffs().to_vec();
    c[3] += 1e-3;
    let bad = ScalarSpectralSolution {
        offset: s.offset,
        poly: Expansion::new(*s.poly.weight(), c).unwrap(),
    };
    assert!(residual_check(&p, &bad).unwrap() > 1e-5);

    // λ = 0, g = 1, M = 0: d_0 c = T.
    let horizon = 2.0;
    let p = FracOdeProblem::new(ScalarOdeData::new(0.5, 0.0, 0.0, horizon).unwrap(), Forcing::Constant(1.0)).unwrap();
    let s = solve(&p, 0).unwrap();
    let c = horizon / pairing_diagonal(0.5, horizon, 0);
    assert!((s.poly.coeffs()[0] - c).abs() < 1e-14 * c);
    assert!(residual_check(&p, &s).unwrap() <= 1e-12);
}

#[test]
fn alpha_one_is_rejected_by_the_solver() {
    let d = ScalarOdeData::new(1.0, 1.0, 1.0, 1.0).unwrap();
    assert!(FracOdeProblem::new(d, Forcing::Zero).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn galerkin_equations_hold(alpha in 0.05f64..0.95, lambda in 0.0f64..50.0,
                               y0 in -2.0f64..2.0, m in 0usize..40, k in 0.0f64..6.0) {
        let p = problem(alpha, lambda, y0, Forcing::function(move |t| (k * t).sin() + 1.0));
        let s = solve(&p, m).unwrap();
        prop_assert!(residual_check(&p, &s).unwrap() <= 1e-10);
    }

    #[test]
    fn solution_is_linear_in_data(alpha in 0.1f64..0.9, lambda in 0.0f64..10.0,
                                  a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let m = 10;
        let p1 = problem(alpha, lambda, 1.0, Forcing::Zero);
        let p2 = problem(alpha, lambda, 0.0, Forcing::Constant(1.0));
        let pc = problem(alpha, lambda, a, Forcing::Constant(b));
        let (s1, s2, sc) = (solve(&p1, m).unwrap(), solve(&p2, m).unwrap(), solve(&pc, m).unwrap());
        for t in [0.0, 0.3, 0.8, 1.0] {
            let lin = a * s1.eval(t) + b * s2.eval(t);
            prop_assert!((sc.eval(t) - lin).abs() < 1e-11 * (1.0 + lin.abs()));
        }
    }
}
