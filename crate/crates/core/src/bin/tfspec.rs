use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tfspec::experiment::{run, ExperimentConfig, Kind};
use tfspec::Error;

#[derive(Parser)]
#[command(name = "tfspec", version, about = "Time-spectral Galerkin convergence studies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// JSON experiment configuration; overrides the built-in preset.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Exit with status 1 unless every fitted slope is within tolerance.
    #[arg(long)]
    assert: bool,
    /// Slope tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Output directory for CSV, .dat and summary files.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated fractional orders.
    #[arg(long, value_delimiter = ',')]
    alpha: Option<Vec<f64>>,
    /// Comma-separated temporal degrees.
    #[arg(long, value_delimiter = ',')]
    m: Option<Vec<usize>>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate E_{alpha,beta}(-t).
    MlEval {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        t: f64,
    },
    /// Scalar ODE convergence against the Mittag-Leffler solution.
    OdeConverge {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        lambda: Option<f64>,
    },
    /// Space-time convergence for one of the three model problems.
    PdeConverge {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = ["51", "52", "53"])]
        example: String,
        /// beta (51) or gamma (52, 53) values, comma separated.
        #[arg(long, value_delimiter = ',')]
        param: Option<Vec<f64>>,
        /// Mixing weight of example 52.
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long)]
        h_exponent: Option<u32>,
    },
    /// Coefficient decay and Besov norms of E_{alpha,1}(-t^alpha).
    BesovReport {
        #[command(flatten)]
        common: Common,
    },
}

fn load(kind: Kind, common: &Common) -> Result<ExperimentConfig, Error> {
    let mut config = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            let c = ExperimentConfig::from_json(&text)?;
            if c.kind != kind {
                return Err(Error::Config(format!(
                    "config kind {} does not match subcommand ({})",
                    c.kind.name(),
                    kind.name()
                )));
            }
            c
        }
        None => ExperimentConfig::preset(kind),
    };
    if let Some(a) = &common.alpha {
        config.alpha = a.clone();
    }
    if let Some(m) = &common.m {
        config.m = m.clone();
    }
    if let Some(t) = common.tol {
        config.tolerance = t;
    }
    if let Some(o) = &common.out {
        config.out = Some(o.clone());
    }
    Ok(config)
}

fn execute(config: ExperimentConfig, assert: bool) -> ExitCode {
    let plan = match config.validate() {
        Ok(p) => p,
        Err(e) => return fail(e),
    };
    eprint!("{plan}");
    let outcome = match run(&config) {
        Ok(o) => o,
        Err(e) => return fail(e),
    };
    print!("{}", outcome.summary());
    if let Some(dir) = &config.out {
        match outcome.write(dir) {
            Ok(files) => {
                for f in files {
                    eprintln!("wrote {}", f.display());
                }
            }
            Err(e) => return fail(e),
        }
    } else if !outcome.cases.is_empty() {
        print!("{}", outcome.csv());
    }
    if assert && !outcome.all_passed() {
        eprintln!("slope assertion failed");
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}

fn fail(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    match e {
        Error::Config(_) | Error::Domain(_) => ExitCode::from(2),
        _ => ExitCode::from(1),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (config, assert) = match cli.command {
        Command::MlEval { alpha, beta, t } => {
            let mut c = ExperimentConfig::new(Kind::MlEval);
            c.alpha = vec![alpha];
            c.beta = vec![beta];
            c.t = vec![t];
            (Ok(c), false)
        }
        Command::OdeConverge { common, lambda } => {
            let c = load(Kind::Ode, &common).map(|mut c| {
                if let Some(l) = lambda {
                    c.lambda = l;
                }
                c
            });
            (c, common.assert)
        }
        Command::PdeConverge {
            common,
            example,
            param,
            theta,
            h_exponent,
        } => {
            let kind = match example.as_str() {
                "51" => Kind::Example51,
                "52" => Kind::Example52,
                _ => Kind::Example53,
            };
            let c = load(kind, &common).map(|mut c| {
                if let Some(t) = theta {
                    c.theta = t;
                }
                if let Some(p) = param {
                    match kind {
                        Kind::Example51 => c.beta = p,
                        _ => c.gamma = p,
                    }
                }
                if let Some(h) = h_exponent {
                    c.h_exponent = h;
                }
                c
            });
            (c, common.assert)
        }
        Command::BesovReport { common } => (load(Kind::BesovReport, &common), common.assert),
    };
    match config {
        Ok(c) => execute(c, assert),
        Err(e) => fail(e),
    }
}
