use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Parser, Subcommand};
use rayon::prelude::*;

use qei_core::comparison::{discrete_comparison_check, CompareOptions, ComparisonError, DiscreteField};
use qei_core::func::{log_grid, ScalarFunc};
use qei_core::gh::{compute_g, invert_h};
use qei_core::ko::{ko_classify, Classification};
use qei_core::radial::BlowupStatus;
use qei_core::verdict::{decide, Conclusion};

use crate::config::{
    load, load_field_csv, BlowupConfig, CompareConfig, GhConfig, ProblemConfig, SweepConfig,
};
use crate::report;
use crate::selftest;
use crate::{EXIT_CONFIG, EXIT_INCONCLUSIVE, EXIT_NUMERIC, EXIT_OK};

#[derive(Parser)]
#[command(
    name = "qei",
    version,
    about = "Numerical toolkit for quasilinear elliptic inequalities"
)]
pub struct Cli {
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Seed for all randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Subcommand)]
pub enum Cmd {
    /// Classify the tail integral for a source term f.
    KoCheck {
        /// Source term f as an expression in t.
        #[arg(long)]
        f: String,
        /// Exponent of the p-homogeneous operator (p > 1).
        #[arg(long)]
        p: f64,
        /// Integration endpoint.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        alpha: f64,
    },
    /// Tabulate the growth transform and its inverse as CSV.
    Gh {
        #[arg(long)]
        config: PathBuf,
    },
    /// Integrate the radial blow-up profile for one initial value.
    Blowup {
        #[arg(long)]
        config: PathBuf,
        /// Also write the trajectory as CSV (columns r, phi, dphi).
        #[arg(long)]
        trajectory: Option<PathBuf>,
    },
    /// Blow-up radii for a list of initial values, in parallel.
    BlowupSweep {
        #[arg(long)]
        config: PathBuf,
    },
    /// Verify the discrete comparison argument for two radial fields.
    Compare {
        #[arg(long)]
        config: PathBuf,
        /// Candidate subsolution as CSV (columns r, value).
        #[arg(long)]
        u: PathBuf,
        /// Candidate supersolution as CSV (columns r, value).
        #[arg(long)]
        v: PathBuf,
    },
    /// Run the Heisenberg-group property suites.
    CarnotVerify {
        /// Number of complex-coordinate pairs (homogeneous dimension 2n + 2).
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Optional sample points as CSV (columns x1..xn, y1..yn, t).
        #[arg(long)]
        points: Option<PathBuf>,
    },
    /// Run the hypothesis checks and report the strongest conclusion.
    Decide {
        #[arg(long)]
        config: PathBuf,
        /// Lower sign-change threshold override.
        #[arg(long, allow_negative_numbers = true)]
        alpha: Option<f64>,
        /// Upper sign-change threshold override.
        #[arg(long, allow_negative_numbers = true)]
        beta: Option<f64>,
    },
    /// Run the full acceptance suite and print a pass/fail table.
    Selftest,
}

enum CmdError {
    Config(anyhow::Error),
    Numeric(String),
}

type CmdResult = Result<(String, i32), CmdError>;

fn config_err<T>(e: anyhow::Error) -> Result<T, CmdError> {
    Err(CmdError::Config(e))
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serialization");
    s.push('\n');
    s
}

pub fn run(cli: Cli) -> i32 {
    let out = cli.output.clone();
    match dispatch(&cli) {
        Ok((text, code)) => {
            if let Some(path) = out {
                if let Err(e) = std::fs::write(&path, &text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return EXIT_CONFIG;
                }
            } else {
                print!("{text}");
            }
            code
        }
        Err(CmdError::Config(e)) => {
            eprintln!("error: {e:#}");
            EXIT_CONFIG
        }
        Err(CmdError::Numeric(e)) => {
            eprintln!("error: {e}");
            EXIT_NUMERIC
        }
    }
}

fn dispatch(cli: &Cli) -> CmdResult {
    match &cli.cmd {
        Cmd::KoCheck { f, p, alpha } => ko_check(f, *p, *alpha),
        Cmd::Gh { config } => gh(config),
        Cmd::Blowup { config, trajectory } => blowup(config, trajectory.as_deref()),
        Cmd::BlowupSweep { config } => blowup_sweep(config),
        Cmd::Compare { config, u, v } => compare(config, u, v, cli.seed),
        Cmd::CarnotVerify { n, points } => carnot_verify(*n, points.as_deref(), cli.seed),
        Cmd::Decide {
            config,
            alpha,
            beta,
        } => decide_cmd(config, *alpha, *beta),
        Cmd::Selftest => selftest_cmd(cli.seed),
    }
}

fn ko_check(f_src: &str, p: f64, alpha: f64) -> CmdResult {
    if !(p > 1.0) {
        return config_err(anyhow::anyhow!("flag --p: exponent {p} must exceed 1"));
    }
    let f = match ScalarFunc::parse(f_src) {
        Ok(f) => f,
        Err(e) => return config_err(anyhow::anyhow!("flag --f: {e}")),
    };
    let report = ko_classify(&f, p, alpha).map_err(|e| CmdError::Numeric(format!("{e}")))?;
    let code = if matches!(report.classification, Classification::Inconclusive) {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_OK
    };
    Ok((to_json(&report::ko_json(&report)), code))
}

fn gh(config: &Path) -> CmdResult {
    let cfg: GhConfig = load(config).or_else(config_err)?;
    cfg.validate().or_else(config_err)?;
    let coeff = cfg.coeff.build().or_else(config_err)?;
    let mut rows = Vec::new();
    for t in log_grid(cfg.t_min, cfg.t_max, cfg.per_decade) {
        let g = compute_g(&coeff, t).map_err(|e| CmdError::Numeric(format!("{e}")))?;
        let h = invert_h(&coeff, g).map_err(|e| CmdError::Numeric(format!("{e}")))?;
        rows.push(vec![t, g, g, h]);
    }
    Ok((report::csv(&["t", "G", "T", "H"], &rows), EXIT_OK))
}

fn blowup(config: &Path, trajectory: Option<&Path>) -> CmdResult {
    let cfg: BlowupConfig = load(config).or_else(config_err)?;
    let prob = cfg.problem(cfg.a).or_else(config_err)?;
    prob.validate()
        .map_err(|e| CmdError::Config(anyhow::anyhow!("{e}")))?;
    let result = qei_core::radial::integrate_blowup(&prob, &cfg.options())
        .map_err(|e| CmdError::Numeric(format!("{e}")))?;
    if let Some(path) = trajectory {
        let rows: Vec<Vec<f64>> = result
            .trajectory
            .iter()
            .map(|(r, phi, dphi)| vec![*r, *phi, *dphi])
            .collect();
        std::fs::write(path, report::csv(&["r", "phi", "dphi"], &rows))
            .with_context(|| format!("cannot write {}", path.display()))
            .or_else(config_err)?;
    }
    let code = if matches!(result.status, BlowupStatus::Inconclusive { .. }) {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_OK
    };
    Ok((to_json(&report::blowup_json(&result)), code))
}

fn blowup_sweep(config: &Path) -> CmdResult {
    let cfg: SweepConfig = load(config).or_else(config_err)?;
    if cfg.a_values.is_empty() {
        return config_err(anyhow::anyhow!("field \"a_values\": must be non-empty"));
    }
    let base = cfg.base();
    // Validate every problem up front so config errors exit 3 instead
    // of surfacing as per-row failures.
    for &a in &cfg.a_values {
        base.problem(a)
            .and_then(|p| p.validate().map_err(|e| anyhow::anyhow!("{e}")))
            .or_else(config_err)?;
    }
    let opts = base.options();
    let rows: Vec<Vec<String>> = cfg
        .a_values
        .par_iter()
        .map(|&a| {
            let prob = base.problem(a).expect("validated above");
            match qei_core::radial::integrate_blowup(&prob, &opts) {
                Ok(res) => match res.status {
                    BlowupStatus::FiniteBlowup {
                        radius,
                        radius_error,
                    } => vec![
                        format!("{a}"),
                        "finite_blowup".into(),
                        format!("{radius}"),
                        format!("{radius_error}"),
                    ],
                    BlowupStatus::GlobalExistence { .. } => {
                        vec![format!("{a}"), "global_existence".into(), String::new(), String::new()]
                    }
                    BlowupStatus::GradientBlowup { r_star, .. } => vec![
                        format!("{a}"),
                        "gradient_blowup".into(),
                        format!("{r_star}"),
                        String::new(),
                    ],
                    BlowupStatus::Inconclusive { .. } => {
                        vec![format!("{a}"), "inconclusive".into(), String::new(), String::new()]
                    }
                },
                Err(_) => vec![format!("{a}"), "error".into(), String::new(), String::new()],
            }
        })
        .collect();
    Ok((report::csv_mixed(&["a", "status", "R", "R_err"], &rows), EXIT_OK))
}

fn compare(config: &Path, u_path: &Path, v_path: &Path, seed: u64) -> CmdResult {
    let cfg: CompareConfig = load(config).or_else(config_err)?;
    let coeff = cfg.coeff.build().or_else(config_err)?;
    let g1 = cfg.g1.build().or_else(config_err)?;
    let g2 = cfg.g2.build().or_else(config_err)?;
    let (ug, uv) = load_field_csv(u_path).or_else(config_err)?;
    let (vg, vv) = load_field_csv(v_path).or_else(config_err)?;
    let build = |g: Vec<f64>, v: Vec<f64>| {
        DiscreteField::new(g, v, cfg.dimension)
            .map_err(|e| CmdError::Config(anyhow::anyhow!("{e}")))
    };
    let u = build(ug, uv)?;
    let v = build(vg, vv)?;
    let opts = CompareOptions {
        epsilon: cfg.epsilon,
        residual_tol: cfg.residual_tol,
        seed,
        random_pairs: cfg.random_pairs.unwrap_or(1000),
    };
    let cert = discrete_comparison_check(&coeff, &u, &v, &g1, &g2, &opts).map_err(|e| match e {
        ComparisonError::Eval(d) => CmdError::Numeric(format!("{d}")),
        other => CmdError::Config(anyhow::anyhow!("{other}")),
    })?;
    let code = if cert.passed() { EXIT_OK } else { EXIT_INCONCLUSIVE };
    Ok((to_json(&report::certificate_json(&cert)), code))
}

fn carnot_verify(n: usize, points: Option<&Path>, seed: u64) -> CmdResult {
    if n == 0 {
        return config_err(anyhow::anyhow!("flag --n: must be positive"));
    }
    let supplied = match points {
        Some(path) => Some(crate::selftest::load_points_csv(path, n).or_else(config_err)?),
        None => None,
    };
    let suite = selftest::carnot_suite(seed, n, supplied.as_deref())
        .map_err(|e| CmdError::Numeric(format!("{e}")))?;
    let code = if suite.pass { EXIT_OK } else { EXIT_NUMERIC };
    Ok((to_json(&suite), code))
}

fn decide_cmd(config: &Path, alpha: Option<f64>, beta: Option<f64>) -> CmdResult {
    let cfg: ProblemConfig = load(config).or_else(config_err)?;
    let spec = cfg.build().or_else(config_err)?;
    let verdict = decide(&spec, alpha.or(cfg.alpha), beta.or(cfg.beta));
    let code = if verdict.conclusion == Conclusion::NoConclusion {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_OK
    };
    Ok((to_json(&report::verdict_json(&verdict)), code))
}

fn selftest_cmd(seed: u64) -> CmdResult {
    let results = selftest::run_all(seed);
    let all_pass = results.iter().all(|r| r.passed);
    let text = selftest::render(&results);
    Ok((text, if all_pass { EXIT_OK } else { EXIT_NUMERIC }))
}
