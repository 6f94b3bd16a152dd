//! Acceptance report: one PASS/FAIL line per criterion, details indented
//! below it. Failures are reported, not raised; set `ACCEPTANCE_STRICT=1` to
//! exit with status 1 on any FAIL.

mod common;

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use common::{brute_pairing, coupled_solve, power, Lcg};
use tfspec::experiment::{run, Checks, ExperimentConfig, Kind, RunOutcome};
use tfspec::fem1d::{EndpointSingularity, Mesh1D};
use tfspec::frac_ode::Forcing;
use tfspec::jacobi::{change_basis, eval, frac_pairing, gauss_rule, project_gauss, xi, Expansion, JacobiWeight};
use tfspec::norms::{projection_tails, rate_fit};
use tfspec::spacetime::{solve, ProblemSpec, SeparableTerm, SpatialProfile};
use tfspec::special::{
    exact_constant_forcing, exact_homogeneous, ln_gamma, ml_integral, ml_series, MlArgs, ScalarOdeData, T_SWITCH,
};

struct Report {
    lines: String,
    failed: Vec<String>,
}

impl Report {
    fn criterion(&mut self, id: &str, title: &str, ok: bool, details: &str) {
        let _ = writeln!(self.lines, "{} criterion {id}: {title}", if ok { "PASS" } else { "FAIL" });
        for d in details.lines() {
            let _ = writeln!(self.lines, "    {d}");
        }
        if !ok {
            self.failed.push(id.to_string());
        }
    }
}

/// Detail lines of an experiment and whether every slope check passed.
fn outcome(o: &RunOutcome) -> (bool, String) {
    (o.all_passed(), o.summary())
}

fn experiment(config: ExperimentConfig) -> (bool, String, Duration) {
    let start = Instant::now();
    let o = run(&config).expect("experiment runs");
    let (ok, text) = outcome(&o);
    (ok, text, start.elapsed())
}

fn criterion_1(r: &mut Report) {
    let (ok, text, took) = experiment(ExperimentConfig::preset(Kind::Ode));
    let fast = took < Duration::from_secs(10);
    let details = format!("{text}runtime {:.2} s (limit 10 s)", took.as_secs_f64());
    r.criterion("1", "scalar ODE L2 rate -(1+2a), M = 8..64", ok && fast, &details);
}

fn criterion_2(r: &mut Report) {
    let (ok, text, took) = experiment(ExperimentConfig::preset(Kind::Example51));
    let fast = took < Duration::from_secs(120);
    let details = format!("{text}runtime {:.1} s (limit 120 s)", took.as_secs_f64());
    r.criterion("2", "u = t^b sin(pi x): E1 -(1+2b), E2 -(1+2b-a)", ok && fast, &details);
}

fn criterion_3(r: &mut Report) {
    let (ok0, text0, _) = experiment(ExperimentConfig::preset(Kind::Example52));
    let mut c = ExperimentConfig::new(Kind::Example52);
    c.alpha = vec![0.5];
    c.theta = 1.0;
    c.gamma = vec![1.5];
    c.checks = Checks { e1: true, e2: false };
    c.tolerance = 0.2;
    let (ok1, text1, _) = experiment(c);
    r.criterion("3", "rough initial data: theta = 0 and theta = 1", ok0 && ok1, &(text0 + &text1));
}

fn criterion_4(r: &mut Report) {
    let runs = [(0.5, Checks { e1: true, e2: false }), (1.2, Checks { e1: true, e2: false }), (-0.2, Checks { e1: false, e2: true })];
    let mut ok = true;
    let mut text = String::new();
    for (gamma, checks) in runs {
        let mut c = ExperimentConfig::new(Kind::Example53);
        c.alpha = vec![0.5];
        c.gamma = vec![gamma];
        c.checks = checks;
        c.tolerance = 0.2;
        let (o, t, _) = experiment(c);
        ok &= o;
        text += &t;
    }
    r.criterion("4", "rough source t^g: a = 0.5, g in {0.5, 1.2, -0.2}", ok, &text);
}

// The initial layer of width λ^{−1/α} delays the asymptotic regime; the
// same grid is used for every case.
const TAIL_MS: [usize; 5] = [64, 96, 128, 192, 256];

fn slope_line(label: &str, pairs: &[(usize, f64)], predicted: f64, tol: f64, text: &mut String) -> bool {
    let s = rate_fit(pairs).expect("fit").slope;
    let ok = (s - predicted).abs() <= tol;
    let _ = writeln!(text, "{label}: slope {s:.3} predicted {predicted:.3} {}", if ok { "PASS" } else { "FAIL" });
    ok
}

fn tail_slopes<F: Fn(f64) -> f64>(label: &str, y: F, alpha: f64, l2: f64, semi: Option<f64>, text: &mut String) -> bool {
    let tails = projection_tails(y, alpha, 1.0, &TAIL_MS, 1024).expect("tails");
    let l2_pairs: Vec<(usize, f64)> = tails.iter().map(|t| (t.m, t.weighted_l2)).collect();
    let mut ok = slope_line(&format!("{label} weighted L2"), &l2_pairs, l2, 0.15, text);
    if let Some(p) = semi {
        let pairs: Vec<(usize, f64)> = tails.iter().map(|t| (t.m, t.seminorm)).collect();
        ok &= slope_line(&format!("{label} H^(a/2) seminorm"), &pairs, p, 0.15, text);
    }
    ok
}

fn criterion_5(r: &mut Report) {
    let mut text = String::new();
    let mut ok = true;
    for alpha in [0.3, 0.5, 0.7] {
        for lambda in [1.0, 10.0] {
            let hom = ScalarOdeData::new(alpha, lambda, 1.0, 1.0).unwrap();
            ok &= tail_slopes(
                &format!("a={alpha} lambda={lambda} E(-lambda t^a)"),
                |t| exact_homogeneous(&hom, t).unwrap(),
                alpha,
                -(1.0 + 2.0 * alpha),
                Some(alpha - 1.0 - 2.0 * alpha),
                &mut text,
            );
            let forced = ScalarOdeData::new(alpha, lambda, 0.0, 1.0).unwrap();
            ok &= tail_slopes(
                &format!("a={alpha} lambda={lambda} g=1"),
                |t| exact_constant_forcing(&forced, t).unwrap(),
                alpha,
                -(1.0 + 2.0 * alpha),
                Some(alpha - 1.0 - 2.0 * alpha),
                &mut text,
            );
        }
    }
    for (alpha, gamma) in [(0.5, 0.3), (0.5, 0.75), (0.3, 1.4)] {
        ok &= tail_slopes(&format!("a={alpha} t^{gamma}"), |t| t.powf(gamma), alpha, -(1.0 + 2.0 * gamma), None, &mut text);
    }
    r.criterion("5", "projection tail rates (theta = 1, lambda in {1, 10}, M = 64..256)", ok, &text);
}

fn criterion_6a(r: &mut Report) {
    let mut worst = 0.0f64;
    for (k, (alpha, horizon)) in [(0.5, 1.0), (0.5, 2.0), (0.3, 1.0), (0.8, 0.7), (0.15, 1.0)].into_iter().enumerate() {
        let leg = JacobiWeight::legendre(horizon).unwrap();
        let mut rng = Lcg::new(300 + k as u64);
        for deg in 0..=6 {
            let p = Expansion::new(leg, rng.vec(deg + 1, -1.0, 1.0)).unwrap();
            let q = Expansion::new(leg, rng.vec(7 - deg, -1.0, 1.0)).unwrap();
            let got = frac_pairing(&p, &q, alpha).unwrap();
            let brute = brute_pairing(&p, &q, alpha);
            worst = worst.max((got - brute).abs() / brute.abs().max(1.0));
        }
    }
    r.criterion("6a", "diagonal pairing vs product quadrature", worst <= 1e-8, &format!("max error {worst:.2e} (tol 1e-8)"));
}

fn criterion_6b(r: &mut Report) {
    let meshes = [
        Mesh1D::uniform(8).unwrap(),
        Mesh1D::uniform(3).unwrap(),
        Mesh1D::from_nodes(vec![0.0, 0.07, 0.2, 0.31, 0.5, 0.62, 0.8, 0.93, 1.0]).unwrap(),
    ];
    let mut worst = 0.0f64;
    for mesh in &meshes {
        for alpha in [0.3, 0.7] {
            let forcing = vec![
                SeparableTerm { space: SpatialProfile::sin_pi(), time: Forcing::Constant(1.5) },
                SeparableTerm {
                    space: SpatialProfile::custom("bump", EndpointSingularity::NONE, |x| x * (1.0 - x) * x.exp()),
                    time: power(-0.7, 0.3),
                },
            ];
            let spec = ProblemSpec::new(alpha, 1.3, SpatialProfile::right_power(1.2), forcing).unwrap();
            for m in 0..=4 {
                let sol = solve(&spec, m, mesh).unwrap();
                let coupled = coupled_solve(&spec, m, mesh);
                for t in [0.0, 0.4, 0.9, 1.3] {
                    for (a, b) in sol.nodal_at(t).unwrap().iter().zip(coupled.nodal_at(t)) {
                        worst = worst.max((a - b).abs());
                    }
                }
            }
        }
    }
    r.criterion("6b", "modal solve vs coupled Kronecker system", worst <= 1e-10, &format!("max error {worst:.2e} (tol 1e-10)"));
}

fn criterion_6c(r: &mut Report) {
    let mut worst = 0.0f64;
    let leg = JacobiWeight::legendre(1.0).unwrap();
    for alpha in [0.3, 0.6, 0.9] {
        let left = JacobiWeight::new(-alpha, 0.0, 1.0).unwrap();
        let v = project_gauss(|t: f64| (1.3 * t).exp() * (2.0 * t).cos(), &left, 60).unwrap();
        for m in [5usize, 10, 20] {
            let mut c = v.coeffs().to_vec();
            c.iter_mut().take(m + 1).for_each(|x| *x = 0.0);
            let res = change_basis(&Expansion::new(left, c).unwrap(), &leg).unwrap();
            for j in 0..=m {
                worst = worst.max(frac_pairing(&res, &Expansion::basis(leg, j), alpha).unwrap().abs());
            }
        }
    }
    r.criterion("6c", "projection residual pairing-orthogonal to P_M", worst <= 1e-9, &format!("max residual {worst:.2e} (tol 1e-9)"));
}

fn criterion_6d(r: &mut Report) {
    let (mut worst, mut compared, mut refused_early) = (0.0f64, 0, 0);
    for i in 1..=9 {
        let a = 0.1 * i as f64;
        for b in [0.1, 0.3, 0.5, 0.7, 0.9, a, a - 0.5] {
            for j in 0..=20 {
                let t = 0.1 * 100f64.powf(j as f64 / 20.0);
                let args = MlArgs::new(a, b, t).unwrap();
                match ml_series(args, 1e-17) {
                    Ok(s) => {
                        let q = ml_integral(args).unwrap();
                        worst = worst.max((s - q).abs() / (1.0 + q.abs()));
                        compared += 1;
                    }
                    Err(_) if t <= T_SWITCH => refused_early += 1,
                    Err(_) => {}
                }
            }
        }
    }
    let ok = worst <= 1e-9 && refused_early == 0;
    let details = format!("{compared} points, max error {worst:.2e} (tol 1e-9), series refusals below switch: {refused_early}");
    r.criterion("6d", "Mittag-Leffler series vs integral on the overlap grid", ok, &details);
}

fn weights_for(alpha: f64) -> Vec<JacobiWeight> {
    [(0.0, 0.0), (-alpha, 0.0), (0.0, -alpha), (-alpha / 2.0, -alpha / 2.0)]
        .into_iter()
        .map(|(a, b)| JacobiWeight::new(a, b, 1.0).unwrap())
        .collect()
}

fn criterion_6e(r: &mut Report) {
    let mut worst = 0.0f64;
    for alpha in [0.25, 0.5, 0.75] {
        let mut ws = weights_for(alpha);
        ws.push(JacobiWeight::new(-alpha, 0.0, 2.0).unwrap());
        ws.push(JacobiWeight::new(0.4, -0.6, 0.7).unwrap());
        for w in ws {
            let rule = gauss_rule(&w, 21).unwrap();
            for m in 0..42 {
                let mf = m as f64;
                let exact = ((w.a + w.b + mf + 1.0) * w.horizon.ln() + ln_gamma(w.a + 1.0).unwrap()
                    + ln_gamma(w.b + mf + 1.0).unwrap()
                    - ln_gamma(w.a + w.b + mf + 2.0).unwrap())
                .exp();
                let got = rule.integrate(|t| t.powi(m));
                worst = worst.max((got - exact).abs() / exact);
            }
        }
    }
    r.criterion("6e", "Gauss-Jacobi moments vs Beta integrals", worst <= 1e-11, &format!("max relative error {worst:.2e} (tol 1e-11)"));
}

fn criterion_6f(r: &mut Report) {
    let mut worst = 0.0f64;
    for alpha in [0.25, 0.5, 0.75] {
        for w in weights_for(alpha) {
            let rule = gauss_rule(&w, 41).unwrap();
            let rows: Vec<Vec<f64>> = rule.nodes().iter().map(|&t| (0..=40).map(|k| eval(&w, k, t)).collect()).collect();
            for j in 0..=40 {
                for k in j..=40 {
                    let g: f64 = rows.iter().zip(rule.weights()).map(|(row, wi)| wi * row[j] * row[k]).sum();
                    let expect = if j == k { xi(&w, k) } else { 0.0 };
                    worst = worst.max((g - expect).abs());
                }
            }
        }
    }
    r.criterion("6f", "Gram matrices vs normalisation constants", worst <= 1e-11, &format!("max error {worst:.2e} (tol 1e-11)"));
}

fn criterion_7(r: &mut Report) {
    let (ok, text, _) = experiment(ExperimentConfig::preset(Kind::BesovReport));
    r.criterion("7", "pairing decay k^(-2-2a) of E(-t^a), k in [10, 60]", ok, &text);
}

fn main() {
    let mut r = Report { lines: String::new(), failed: Vec::new() };
    criterion_1(&mut r);
    criterion_2(&mut r);
    criterion_3(&mut r);
    criterion_4(&mut r);
    criterion_5(&mut r);
    criterion_6a(&mut r);
    criterion_6b(&mut r);
    criterion_6c(&mut r);
    criterion_6d(&mut r);
    criterion_6e(&mut r);
    criterion_6f(&mut r);
    criterion_7(&mut r);
    print!("{}", r.lines);
    println!("{} criteria failed: {:?}", r.failed.len(), r.failed);
    if std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") && !r.failed.is_empty() {
        std::process::exit(1);
    }
}
