//! Declarative convergence studies: configuration, validation, execution and
//! CSV / gnuplot output.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fem1d::{eig, Mesh1D, ModalBasis};
use crate::frac_ode::{self, FracOdeProblem, Forcing};
use crate::jacobi::JacobiWeight;
use crate::norms::{
    besov_norm, decay_fit_values, difference, err_halpha_l2, err_l2h1, err_l2l2, jacobi_pairings,
    scalar_l2_error, ErrorReport, ErrorRow, MixedExpansion, CSV_HEADER,
};
use crate::spacetime::{self, semidiscrete_exact, solve_with_basis, ProblemSpec, SpaceTimeSolution};
use crate::special::{exact_homogeneous, ml, MlArgs, ScalarOdeData};

/// Default temporal degrees.
pub const DEFAULT_M: [usize; 7] = [8, 12, 16, 24, 32, 48, 64];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Ode,
    Example51,
    Example52,
    Example53,
    MlEval,
    BesovReport,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Ode => "ode",
            Kind::Example51 => "example51",
            Kind::Example52 => "example52",
            Kind::Example53 => "example53",
            Kind::MlEval => "ml-eval",
            Kind::BesovReport => "besov-report",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reference {
    /// Discrete solution at `reference_m` on the same mesh.
    #[default]
    Numerical,
    /// Semidiscrete Mittag-Leffler solution projected into `P_200`.
    MlExact,
}

/// How the `alpha` list combines with the parameter list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pairing {
    #[default]
    Product,
    Zip,
}

/// Which fitted slopes are checked against their predictions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checks {
    pub e1: bool,
    pub e2: bool,
}

impl Default for Checks {
    fn default() -> Self {
        Self { e1: true, e2: true }
    }
}

fn default_m() -> Vec<usize> {
    DEFAULT_M.to_vec()
}
fn default_h_exponent() -> u32 {
    10
}
fn default_reference_m() -> usize {
    150
}
fn default_one() -> f64 {
    1.0
}
fn default_tolerance() -> f64 {
    0.15
}
fn default_k_range() -> [usize; 2] {
    [10, 60]
}

/// One experiment; mirrors the JSON accepted by `--config`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: Kind,
    #[serde(default)]
    pub alpha: Vec<f64>,
    /// `β` of `t^β sin πx` (example51) or of `E_{α,β}` (ml-eval).
    #[serde(default)]
    pub beta: Vec<f64>,
    /// Data smoothness `γ` (example52 with `θ ≠ 0`, example53).
    #[serde(default)]
    pub gamma: Vec<f64>,
    /// Mixing weight of example52.
    #[serde(default)]
    pub theta: f64,
    #[serde(default = "default_one")]
    pub lambda: f64,
    #[serde(default = "default_one")]
    pub y0: f64,
    /// Arguments `t` of `E_{α,β}(−t)` (ml-eval).
    #[serde(default)]
    pub t: Vec<f64>,
    #[serde(default = "default_m")]
    pub m: Vec<usize>,
    /// Mesh width `h = 2^{−h_exponent}`.
    #[serde(default = "default_h_exponent")]
    pub h_exponent: u32,
    #[serde(default)]
    pub reference: Reference,
    #[serde(default = "default_reference_m")]
    pub reference_m: usize,
    #[serde(default)]
    pub pairing: Pairing,
    #[serde(default)]
    pub checks: Checks,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    /// Coefficient window of besov-report.
    #[serde(default = "default_k_range")]
    pub k_range: [usize; 2],
    #[serde(default)]
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(kind: Kind) -> Self {
        Self {
            kind,
            alpha: Vec::new(),
            beta: Vec::new(),
            gamma: Vec::new(),
            theta: 0.0,
            lambda: 1.0,
            y0: 1.0,
            t: Vec::new(),
            m: default_m(),
            h_exponent: default_h_exponent(),
            reference: Reference::default(),
            reference_m: default_reference_m(),
            pairing: Pairing::default(),
            checks: Checks::default(),
            tolerance: default_tolerance(),
            k_range: default_k_range(),
            out: None,
        }
    }

    /// Defaults for each kind, as used by the CLI when no config is given.
    pub fn preset(kind: Kind) -> Self {
        let mut c = Self::new(kind);
        match kind {
            Kind::Ode => {
                c.alpha = vec![0.3, 0.5, 0.7];
                c.m = (8..=64).collect();
                c.checks = Checks { e1: true, e2: false };
            }
            Kind::BesovReport => {
                c.alpha = vec![0.3, 0.5, 0.7];
                c.tolerance = 0.2;
            }
            Kind::Example51 => {
                c.alpha = vec![0.5, 0.3];
                c.beta = vec![0.75, 0.5];
                c.pairing = Pairing::Zip;
            }
            Kind::Example52 => c.alpha = vec![0.4, 0.6],
            Kind::Example53 => {
                c.alpha = vec![0.5];
                c.gamma = vec![0.5, 1.2];
                c.checks = Checks { e1: true, e2: false };
                c.tolerance = 0.2;
            }
            Kind::MlEval => {}
        }
        c
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }

    fn params(&self) -> &[f64] {
        match self.kind {
            Kind::Example51 | Kind::MlEval => &self.beta,
            Kind::Example52 if self.theta != 0.0 => &self.gamma,
            Kind::Example53 => &self.gamma,
            _ => &[],
        }
    }

    /// `(α, parameter)` pairs in configuration order.
    pub fn cases(&self) -> Vec<(f64, f64)> {
        let params = self.params();
        if params.is_empty() {
            let p = match self.kind {
                Kind::Ode => self.lambda,
                _ => self.theta,
            };
            return self.alpha.iter().map(|&a| (a, p)).collect();
        }
        match self.pairing {
            Pairing::Zip => self.alpha.iter().copied().zip(params.iter().copied()).collect(),
            Pairing::Product => self
                .alpha
                .iter()
                .flat_map(|&a| params.iter().map(move |&p| (a, p)))
                .collect(),
        }
    }

    /// Checks ranges and returns a human-readable plan.
    pub fn validate(&self) -> Result<String> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.kind == Kind::MlEval {
            if self.alpha.is_empty() || self.beta.is_empty() || self.t.is_empty() {
                return bad("ml-eval needs alpha, beta and t".into());
            }
            for &a in &self.alpha {
                if !(a > 0.0 && a <= 1.0) {
                    return bad(format!("alpha = {a} outside (0, 1]"));
                }
            }
            if let Some(t) = self.t.iter().find(|t| !(**t >= 0.0) || !t.is_finite()) {
                return bad(format!("t = {t} must be finite and nonnegative"));
            }
            return Ok(self.plan());
        }
        if self.alpha.is_empty() {
            return bad("alpha list is empty".into());
        }
        for &a in &self.alpha {
            if !(a > 0.0 && a < 1.0) {
                return bad(format!("alpha = {a} outside (0, 1)"));
            }
        }
        if self.pairing == Pairing::Zip && !self.params().is_empty() && self.params().len() != self.alpha.len() {
            return bad("zip pairing needs equally long alpha and parameter lists".into());
        }
        if !(self.tolerance > 0.0) {
            return bad(format!("tolerance must be positive, got {}", self.tolerance));
        }
        if self.kind == Kind::BesovReport {
            let [lo, hi] = self.k_range;
            if lo == 0 || hi < lo + 8 {
                return bad(format!("k_range [{lo}, {hi}] needs 1 ≤ k_min and k_max ≥ k_min + 8"));
            }
            return Ok(self.plan());
        }
        if self.m.len() < 4 {
            return bad("M list needs at least 4 entries for a rate fit".into());
        }
        if self.m[0] == 0 || self.m.windows(2).any(|w| w[1] <= w[0]) {
            return bad("M list must be positive and strictly ascending".into());
        }
        let m_max = *self.m.last().unwrap();
        match self.kind {
            Kind::Ode => {
                if !(self.lambda > 0.0) || !self.y0.is_finite() || self.y0 == 0.0 {
                    return bad("ode needs lambda > 0 and nonzero finite y0".into());
                }
                if m_max > 190 {
                    return bad(format!("ode M up to 190, got {m_max}"));
                }
            }
            Kind::Example51 | Kind::Example52 | Kind::Example53 => {
                if !(1..=11).contains(&self.h_exponent) {
                    return bad(format!("h_exponent {} outside 1..=11", self.h_exponent));
                }
                if self.reference == Reference::Numerical && self.reference_m <= m_max {
                    return bad(format!(
                        "reference_m = {} must exceed the largest M = {m_max}",
                        self.reference_m
                    ));
                }
                if self.reference == Reference::MlExact && m_max >= 200 {
                    return bad("ml-exact reference is projected into P_200; M must stay below".into());
                }
                if self.reference_m > 200 {
                    return bad("reference_m is capped at 200".into());
                }
            }
            _ => {}
        }
        if self.reference == Reference::MlExact && self.kind == Kind::Example51 {
            return bad("example51 has time-dependent forcing; ml-exact reference unavailable".into());
        }
        match self.kind {
            Kind::Example51 => {
                if self.beta.is_empty() {
                    return bad("example51 needs a beta list".into());
                }
                for (a, b) in self.cases() {
                    if !(b > (a - 1.0) / 2.0) {
                        return bad(format!("example51 needs beta > (alpha-1)/2, got alpha = {a}, beta = {b}"));
                    }
                }
            }
            Kind::Example52 => {
                if !(0.0..=1.0).contains(&self.theta) {
                    return bad(format!("theta = {} outside [0, 1]", self.theta));
                }
                if self.theta != 0.0 {
                    if self.gamma.is_empty() {
                        return bad("example52 with theta != 0 needs a gamma list".into());
                    }
                    for (a, g) in self.cases() {
                        let lo = (-1.0_f64).max(1.0 - 1.0 / a);
                        if !(g > lo && g < 2.5) {
                            return bad(format!(
                                "example52 needs max(-1, 1-1/alpha) < gamma < 5/2, got alpha = {a}, gamma = {g}"
                            ));
                        }
                    }
                }
            }
            Kind::Example53 => {
                if self.gamma.is_empty() {
                    return bad("example53 needs a gamma list".into());
                }
                for (_, g) in self.cases() {
                    if !(g > -0.5 && g < 1.5) {
                        return bad(format!("example53 needs -1/2 < gamma < 3/2, got {g}"));
                    }
                }
            }
            _ => {}
        }
        Ok(self.plan())
    }

    fn plan(&self) -> String {
        let mut s = format!("kind: {}\n", self.kind.name());
        match self.kind {
            Kind::MlEval => {
                let _ = writeln!(s, "alpha: {:?}\nbeta: {:?}\nt: {:?}", self.alpha, self.beta, self.t);
            }
            Kind::BesovReport => {
                let _ = writeln!(s, "alpha: {:?}\nk range: {:?}", self.alpha, self.k_range);
            }
            _ => {
                let _ = writeln!(s, "cases (alpha, param): {:?}", self.cases());
                let _ = writeln!(s, "M: {:?}", self.m);
                if self.kind != Kind::Ode {
                    let _ = writeln!(s, "h: 2^-{}", self.h_exponent);
                    match self.reference {
                        Reference::Numerical => {
                            let _ = writeln!(s, "reference: numerical, M = {}", self.reference_m);
                        }
                        Reference::MlExact => {
                            let _ = writeln!(s, "reference: semidiscrete Mittag-Leffler");
                        }
                    }
                }
                let _ = writeln!(
                    s,
                    "checks: E1 {}, E2 {}, tolerance {}",
                    self.checks.e1, self.checks.e2, self.tolerance
                );
            }
        }
        s
    }
}

/// Predicted `(E1, E2)` slopes; `None` outside the windows where the rate is
/// asserted.
pub fn predicted_slopes(kind: Kind, theta: f64, alpha: f64, param: f64) -> (Option<f64>, Option<f64>) {
    match kind {
        Kind::Ode => (Some(-(1.0 + 2.0 * alpha)), Some(-(1.0 + alpha))),
        Kind::Example51 => (Some(-(1.0 + 2.0 * param)), Some(-(1.0 + 2.0 * param - alpha))),
        Kind::Example52 if theta == 0.0 => (Some(-(1.0 + 2.0 * alpha)), Some(-(1.0 + alpha))),
        Kind::Example52 => {
            let r = -(1.0 + alpha * (param - 1.0));
            let e1 = (param > -0.5 && param < 3.0).then_some(r);
            let e2 = (param > -0.1 && param < 2.0).then_some(r);
            (e1, e2)
        }
        Kind::Example53 => {
            let e1 = if param < 1.0 {
                -(1.0 + alpha * (param + 1.0))
            } else {
                -(1.0 + 2.0 * alpha)
            };
            let e2 = if param < 0.0 {
                -(1.0 + alpha * (param + 1.0))
            } else {
                -(1.0 + alpha)
            };
            (Some(e1), Some(e2))
        }
        _ => (None, None),
    }
}

/// One asserted slope.
#[derive(Debug, Clone, PartialEq)]
pub struct SlopeCheck {
    pub norm: String,
    pub slope: f64,
    pub predicted: f64,
    pub tolerance: f64,
}

impl SlopeCheck {
    pub fn passed(&self) -> bool {
        (self.slope - self.predicted).abs() <= self.tolerance
    }
}

#[derive(Debug, Clone)]
pub struct CaseResult {
    pub report: ErrorReport,
    pub checks: Vec<SlopeCheck>,
}

/// Outcome of [`run`].
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub kind: Kind,
    pub cases: Vec<CaseResult>,
    /// Checks not tied to a convergence table (besov-report).
    pub other_checks: Vec<SlopeCheck>,
    /// Free-form text for ml-eval and besov-report.
    pub text: String,
}

impl RunOutcome {
    pub fn all_passed(&self) -> bool {
        self.cases.iter().all(|c| c.checks.iter().all(SlopeCheck::passed))
            && self.other_checks.iter().all(SlopeCheck::passed)
    }

    /// All cases under one `M,h,alpha,param,E1,E2` header.
    pub fn csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for c in &self.cases {
            c.report.csv_rows(&mut out);
        }
        out
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        for c in &self.cases {
            let r = &c.report;
            for ch in &c.checks {
                let _ = writeln!(
                    s,
                    "{} alpha={} param={} {}: slope {:.3} predicted {:.3} tol {} {}",
                    self.kind.name(),
                    r.alpha,
                    r.param,
                    ch.norm,
                    ch.slope,
                    ch.predicted,
                    ch.tolerance,
                    if ch.passed() { "PASS" } else { "FAIL" }
                );
            }
        }
        for ch in &self.other_checks {
            let _ = writeln!(
                s,
                "{} {}: slope {:.3} predicted {:.3} tol {} {}",
                self.kind.name(),
                ch.norm,
                ch.slope,
                ch.predicted,
                ch.tolerance,
                if ch.passed() { "PASS" } else { "FAIL" }
            );
        }
        s.push_str(&self.text);
        s
    }

    /// Writes the combined CSV, one `.dat` per case and `summary.txt`.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        if !self.cases.is_empty() {
            let csv = dir.join(format!("{}.csv", self.kind.name()));
            fs::write(&csv, self.csv())?;
            written.push(csv);
            for c in &self.cases {
                let path = dir.join(format!(
                    "{}_alpha{}_param{}.dat",
                    self.kind.name(),
                    c.report.alpha,
                    c.report.param
                ));
                fs::write(&path, c.report.to_dat())?;
                written.push(path);
            }
        }
        let summary = dir.join(format!("{}_summary.txt", self.kind.name()));
        fs::write(&summary, self.summary())?;
        written.push(summary);
        Ok(written)
    }
}

/// Validates and executes `config`.
pub fn run(config: &ExperimentConfig) -> Result<RunOutcome> {
    config.validate()?;
    match config.kind {
        Kind::MlEval => run_ml_eval(config),
        Kind::BesovReport => run_besov(config),
        Kind::Ode => run_cases(config, run_ode_case),
        _ => run_cases(config, run_pde_case),
    }
}

fn run_cases<F>(config: &ExperimentConfig, f: F) -> Result<RunOutcome>
where
    F: Fn(&ExperimentConfig, f64, f64) -> Result<ErrorReport> + Sync,
{
    let reports = config
        .cases()
        .par_iter()
        .map(|&(a, p)| f(config, a, p))
        .collect::<Result<Vec<_>>>()?;
    let cases = reports
        .into_iter()
        .map(|report| {
            let (p1, p2) = predicted_slopes(config.kind, config.theta, report.alpha, report.param);
            let mut checks = Vec::new();
            if let (true, Some(pred)) = (config.checks.e1, p1) {
                checks.push(SlopeCheck {
                    norm: "E1".into(),
                    slope: report.e1_fit()?.slope,
                    predicted: pred,
                    tolerance: config.tolerance,
                });
            }
            if let (true, Some(pred)) = (config.checks.e2, p2) {
                checks.push(SlopeCheck {
                    norm: "E2".into(),
                    slope: report.e2_fit()?.slope,
                    predicted: pred,
                    tolerance: config.tolerance,
                });
            }
            Ok(CaseResult { report, checks })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RunOutcome {
        kind: config.kind,
        cases,
        other_checks: Vec::new(),
        text: String::new(),
    })
}

/// Scalar problem against the exact solution: `E1` is the `L²(0,T)` error,
/// `E2` the `H^{α/2}(0,T)` error.
fn run_ode_case(config: &ExperimentConfig, alpha: f64, lambda: f64) -> Result<ErrorReport> {
    let data = ScalarOdeData::new(alpha, lambda, config.y0, 1.0)?;
    let problem = FracOdeProblem::new(data, Forcing::Zero)?;
    let exact = |t: f64| exact_homogeneous(&data, t).expect("t in range");
    let mixed = MixedExpansion::new(exact, alpha, 1.0, 1024)?;
    let rows = config
        .m
        .iter()
        .map(|&m| {
            let s = frac_ode::solve(&problem, m)?;
            let l2 = scalar_l2_error(&s, exact)?;
            let semi = mixed.seminorm_error(&s)?;
            Ok(ErrorRow {
                m,
                e1: l2,
                e2: (l2 * l2 + semi * semi).sqrt(),
                l2l2: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ErrorReport {
        alpha,
        param: lambda,
        h: 0.0,
        rows,
    })
}

/// The problem for one case of an example kind.
pub fn case_spec(config: &ExperimentConfig, alpha: f64, param: f64) -> Result<ProblemSpec> {
    match config.kind {
        Kind::Example51 => ProblemSpec::manufactured_power(alpha, param),
        Kind::Example52 => ProblemSpec::rough_initial(alpha, config.theta, param),
        Kind::Example53 => ProblemSpec::rough_source(alpha, param),
        other => Err(Error::Config(format!("{} is not a space-time example", other.name()))),
    }
}

fn reference_solution(
    config: &ExperimentConfig,
    spec: &ProblemSpec,
    basis: &Arc<ModalBasis>,
) -> Result<SpaceTimeSolution> {
    match config.reference {
        Reference::Numerical => solve_with_basis(spec, config.reference_m, basis.clone()),
        Reference::MlExact => semidiscrete_exact(spec, basis.mesh())?.to_solution(200),
    }
}

fn run_pde_case(config: &ExperimentConfig, alpha: f64, param: f64) -> Result<ErrorReport> {
    let spec = case_spec(config, alpha, param)?;
    let mesh = Mesh1D::dyadic(config.h_exponent)?;
    let basis = eig(&mesh)?;
    let reference = reference_solution(config, &spec, &basis)?;
    let rows = config
        .m
        .iter()
        .map(|&m| {
            let u = spacetime::solve_with_basis(&spec, m, basis.clone())?;
            let d = difference(&u, &reference)?;
            Ok(ErrorRow {
                m,
                e1: err_l2h1(&d),
                e2: err_halpha_l2(&d, alpha)?,
                l2l2: Some(err_l2l2(&d)),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ErrorReport {
        alpha,
        param,
        h: mesh.h(),
        rows,
    })
}

fn run_ml_eval(config: &ExperimentConfig) -> Result<RunOutcome> {
    let mut text = String::from("alpha,beta,t,value\n");
    for &a in &config.alpha {
        for &b in &config.beta {
            for &t in &config.t {
                let v = ml(MlArgs::new(a, b, t)?)?;
                let _ = writeln!(text, "{a},{b},{t},{v:.17e}");
            }
        }
    }
    Ok(RunOutcome {
        kind: Kind::MlEval,
        cases: Vec::new(),
        other_checks: Vec::new(),
        text,
    })
}

/// Pairing decay and truncated Besov norms of `E_{α,1}(−t^α)` in `S^{−α,0}`.
fn run_besov(config: &ExperimentConfig) -> Result<RunOutcome> {
    let [lo, hi] = config.k_range;
    let lines = config
        .alpha
        .par_iter()
        .map(|&alpha| {
            let data = ScalarOdeData::new(alpha, 1.0, 1.0, 1.0)?;
            let weight = JacobiWeight::new(-alpha, 0.0, 1.0)?;
            let k_max = hi.max(256);
            let y = |t: f64| exact_homogeneous(&data, t).expect("t in range");
            let pairings = jacobi_pairings(y, &weight, k_max)?;
            let fit = decay_fit_values(&pairings, lo, hi)?;
            let predicted = -2.0 - 2.0 * alpha;
            let coeffs: Vec<f64> = pairings
                .iter()
                .enumerate()
                .map(|(k, p)| p / weight.xi(k))
                .collect();
            let mut line = format!(
                "besov-report alpha={alpha}: pairing decay slope {:.3} over k in [{lo}, {hi}], predicted {predicted:.3}",
                fit.slope
            );
            for (label, g) in [("below", 1.0 + 2.0 * alpha - 0.2), ("above", 1.0 + 2.0 * alpha + 0.2)] {
                let norms: Vec<String> = [64usize, 128, 256]
                    .iter()
                    .map(|&k| {
                        let e = crate::jacobi::Expansion::new(weight, coeffs[..=k].to_vec())?;
                        Ok(format!("{:.4}", besov_norm(&e, g)?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let _ = write!(line, "; gamma {label} ({g:.2}) norms at K=64,128,256: {}", norms.join(" "));
            }
            line.push('\n');
            let check = SlopeCheck {
                norm: format!("alpha={alpha} pairing decay"),
                slope: fit.slope,
                predicted,
                tolerance: config.tolerance,
            };
            Ok((line, check))
        })
        .collect::<Result<Vec<_>>>()?;
    let (text, other_checks): (Vec<String>, Vec<SlopeCheck>) = lines.into_iter().unzip();
    Ok(RunOutcome {
        kind: Kind::BesovReport,
        cases: Vec::new(),
        other_checks,
        text: text.concat(),
    })
}

