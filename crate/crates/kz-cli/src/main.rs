//! `kz` — command-line front end: evaluate polylogarithms, zeta values and
//! associators, inspect the quotient algebra and bar basis, run identity
//! checks with JSON reports, and transport fundamental solutions by ODE
//! integration.
//!
//! Exit codes: `0` success (all requested checks pass), `1` a check ran but
//! failed its tolerance, `2` usage or evaluation-domain errors.

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use kz_core::connect::{
    check_connection1, check_decomposition, check_five_term, check_ghpr, check_gif,
    check_landen_2d, five_term_defect, CheckReport,
};
use kz_core::m05::alg::pentagon_check;
use kz_core::m05::bar::{cic_kernel_with, default_wedge_table, hpr_phi, WedgeTable};
use kz_core::mzv::{associator, check_duality, zeta_comp, ZetaRoute};
use kz_core::ncalg::TruncatedSeries;
use kz_core::polylog::{hyperlog, li_word, mpl, mpl2, EvalConfig, HyperlogSpec, MplIndex};
use kz_core::shuffle::parse_word;
use kz_core::transport::{
    hat_series, transport_with_diagnostics, EquationKind, TransportSpec,
};

#[derive(Parser)]
#[command(
    name = "kz",
    version,
    about = "Polylogarithms, associators and connection-identity checks",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate polylogarithms, hyperlogarithms and word coefficients.
    #[command(subcommand)]
    Eval(EvalCmd),
    /// Multiple zeta values and the truncated associator.
    #[command(subcommand)]
    Mzv(MzvCmd),
    /// The five-generator quotient algebra and its bar complex.
    #[command(subcommand)]
    M05(M05Cmd),
    /// Identity checks emitting pass/fail reports.
    #[command(subcommand)]
    Check(CheckCmd),
    /// ODE transport of a fundamental solution, with error diagnostics.
    Transport(TransportArgs),
}

#[derive(Subcommand)]
enum EvalCmd {
    /// Multiple polylogarithm Li_{k₁,…,k_r}(z); index syntax "2,1".
    Mpl {
        index: String,
        #[arg(long)]
        z: f64,
        #[arg(long, default_value_t = 1e-14)]
        tol: f64,
    },
    /// Two-variable Li with the first `split` indices attached to z₁.
    Mpl2 {
        index: String,
        #[arg(long)]
        split: usize,
        #[arg(long)]
        z1: f64,
        #[arg(long)]
        z2: f64,
        #[arg(long, default_value_t = 1e-14)]
        tol: f64,
    },
    /// Hyperlogarithm L(^{k₁}a₁⋯^{k_r}a_r; z); pair syntax "k@a".
    Hyperlog {
        #[arg(required = true)]
        pairs: Vec<String>,
        #[arg(long)]
        z: f64,
        #[arg(long, default_value_t = 1e-14)]
        tol: f64,
    },
    /// Regularized coefficient Li(w; z) of a word over {0,1} (e.g. "01").
    LiWord {
        word: String,
        #[arg(long)]
        z: f64,
        #[arg(long, default_value_t = 1e-14)]
        tol: f64,
    },
}

#[derive(Subcommand)]
enum MzvCmd {
    /// ζ(k₁,…,k_r) for an admissible index; syntax "2,1".
    Eval {
        index: String,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = RouteArg::Holder)]
        route: RouteArg,
    },
    /// The truncated associator as JSON (stdout or --out FILE).
    Associator {
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum RouteArg {
    /// Hölder convolution at 1/2.
    Holder,
    /// Level-by-level direct summation (independent route).
    Direct,
}

#[derive(Subcommand)]
enum M05Cmd {
    /// Five-fold pentagon product; report per-degree residuals.
    Pentagon {
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, num_args = 0..=1, default_missing_value = "-")]
        json: Option<String>,
    },
    /// Basis of the integrable words of one weight, dot-token syntax.
    BarBasis {
        #[arg(long)]
        weight: usize,
        /// Restrict to words admissible at the base point (no trailing
        /// grading letters).
        #[arg(long)]
        restricted: bool,
        /// Seed for the random-point wedge sampling.
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Subcommand)]
enum CheckCmd {
    /// Associator duality product through a degree cap.
    Duality {
        #[arg(long, default_value_t = 6)]
        degree: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, num_args = 0..=1, default_missing_value = "-")]
        json: Option<String>,
    },
    /// Generalized inversion formula over all words of bounded weight.
    Gif {
        #[arg(long)]
        z: f64,
        #[arg(long, default_value_t = 5)]
        weight: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, num_args = 0..=1, default_missing_value = "-")]
        json: Option<String>,
    },
    /// One-variable connection relation at a point.
    Connection {
        #[arg(long)]
        z: f64,
        #[arg(long, default_value_t = 4)]
        degree: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, num_args = 0..=1, default_missing_value = "-")]
        json: Option<String>,
    },
    /// Pentagon relation in the quotient algebra.
    Pentagon {
        #[arg(long, default_value_t = 4)]
        degree: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, num_args = 0..=1, default_missing_value = "-")]
        json: Option<String>,
    },
    /// Decomposition of the two-variable solution into triangular factors.
    Decomposition {
        #[arg(long)]
        z1: f64,
        #[arg(long)]
        z2: f64,
        #[arg(long, default_value_t = 3)]
        degree: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, num_args = 0..=1, default_missing_value = "-")]
        json: Option<String>,
    },
    /// Generalized harmonic product relation for integrable bar elements.
    Ghpr {
        #[arg(long)]
        z1: f64,
        #[arg(long)]
        z2: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Check every restricted weight-2 basis element instead of the
        /// canonical harmonic-product element.
        #[arg(long)]
        basis: bool,
        #[arg(long, num_args = 0..=1, default_missing_value = "-")]
        json: Option<String>,
    },
    /// Two-variable Landen-type identity pair at a point.
    Landen {
        #[arg(long)]
        z1: f64,
        #[arg(long)]
        z2: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, num_args = 0..=1, default_missing_value = "-")]
        json: Option<String>,
    },
    /// Five-term dilogarithm relation at a point or on an n×n grid.
    FiveTerm {
        #[arg(long, default_value_t = 0.5)]
        z1: f64,
        #[arg(long, default_value_t = 0.5)]
        z2: f64,
        /// Evaluate on an n×n grid across (0.1, 0.6)² instead.
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, num_args = 0..=1, default_missing_value = "-")]
        json: Option<String>,
    },
    /// Run the whole battery (parallel), exit 1 if anything fails.
    All {
        /// Write the ordered JSON report array here ("-" = stdout).
        #[arg(long, num_args = 0..=1, default_missing_value = "-")]
        json: Option<String>,
    },
}

#[derive(Args)]
struct TransportArgs {
    /// Equation kind: the one-variable connection or a simple-pole system.
    #[arg(long, value_enum)]
    eq: EqArg,
    /// Regular parameters for the simple-pole system, e.g. --a 1.0,0.4.
    #[arg(long, value_delimiter = ',')]
    a: Option<Vec<f64>>,
    #[arg(long)]
    z: f64,
    #[arg(long, default_value_t = 3)]
    degree: usize,
    #[arg(long, default_value_t = 2000)]
    steps: usize,
    #[arg(long, default_value_t = 1e-3)]
    eps: f64,
    #[arg(long, num_args = 0..=1, default_missing_value = "-")]
    json: Option<String>,
}

#[derive(Copy, Clone, ValueEnum)]
enum EqArg {
    Kze1,
    Se1,
}

/// Errors that terminate the run: `Usage` exits 2, `Failed` exits 1.
enum CliError {
    Usage(String),
    Failed,
}

impl From<kz_core::polylog::EvalError> for CliError {
    fn from(e: kz_core::polylog::EvalError) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn parse_index(s: &str) -> Result<Vec<u32>, CliError> {
    s.split(',')
        .map(|t| t.trim().parse::<u32>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Usage(format!("bad index {s:?}: {e}")))
}

fn cfg_with_tol(tol: f64) -> Result<EvalConfig, CliError> {
    if !(tol > 0.0) {
        return Err(CliError::Usage(format!("tolerance must be > 0, got {tol}")));
    }
    Ok(EvalConfig {
        tolerance: tol,
        ..EvalConfig::default()
    })
}

fn print_value(v: f64) {
    println!("{v:.15e}");
}

/// Print the human line and/or the JSON form, then report pass/fail.
fn emit_report(rep: &CheckReport, json: &Option<String>) -> Result<(), CliError> {
    match json.as_deref() {
        None => {
            println!(
                "{}: {} max_residual={:.3e} ({} residuals, {} ms)",
                rep.identity,
                if rep.pass { "PASS" } else { "FAIL" },
                rep.max_residual,
                rep.residuals.len(),
                rep.ms
            );
        }
        Some(path) => write_json(&rep.to_json(), path)?,
    }
    if rep.pass {
        Ok(())
    } else {
        Err(CliError::Failed)
    }
}

fn write_json(value: &serde_json::Value, path: &str) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    if path == "-" {
        println!("{text}");
        Ok(())
    } else {
        std::fs::File::create(path)
            .and_then(|mut f| writeln!(f, "{text}"))
            .map_err(|e| CliError::Usage(format!("cannot write {path}: {e}")))
    }
}

fn print_series(s: &TruncatedSeries<f64>) {
    let mut terms: Vec<(Vec<u8>, f64)> = s.iter().map(|(k, v)| (k.clone(), *v)).collect();
    terms.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
    for (k, v) in terms {
        let name = if k.is_empty() {
            "1".to_string()
        } else {
            s.gens().monomial_key(&k)
        };
        println!("{name:<24} {v:.15e}");
    }
}

fn five_term_grid(n: usize, tol: f64) -> Result<CheckReport, CliError> {
    if n < 2 {
        return Err(CliError::Usage("grid needs at least 2 points per side".into()));
    }
    let started = Instant::now();
    let pts: Vec<f64> = (0..n)
        .map(|i| 0.1 + 0.5 * i as f64 / (n - 1) as f64)
        .collect();
    let mut residuals = Vec::with_capacity(n * n);
    for &z1 in &pts {
        for &z2 in &pts {
            residuals.push(five_term_defect(z1, z2));
        }
    }
    Ok(CheckReport::from_residuals(
        "five_term_grid",
        serde_json::json!({
            "grid": n, "range": [0.1, 0.6], "tolerance": tol,
            "layout": "row-major over the grid points"
        }),
        residuals,
        tol,
        started,
    ))
}

fn ghpr_basis_report(z1: f64, z2: f64, tol: f64) -> Result<CheckReport, CliError> {
    let started = Instant::now();
    let table = default_wedge_table();
    let mut residuals = Vec::new();
    for e in cic_kernel_with(table, 2, true) {
        let rep = check_ghpr(&e, z1, z2, tol)?;
        residuals.extend(rep.residuals);
    }
    Ok(CheckReport::from_residuals(
        "ghpr_basis2",
        serde_json::json!({
            "z1": z1, "z2": z2, "tolerance": tol,
            "layout": "one residual per restricted weight-2 basis element"
        }),
        residuals,
        tol,
        started,
    ))
}

/// A transport run summarized as a report: deviation from the direct series
/// at the endpoint, plus the integrator's own error estimates.
fn transport_report(spec: &TransportSpec, tol: f64) -> Result<CheckReport, CliError> {
    let started = Instant::now();
    let cfg = EvalConfig::default();
    let diag = transport_with_diagnostics(spec)?;
    let hat = hat_series(&spec.kind, spec.z, spec.degree, &cfg)?;
    let gens = spec.kind.gens();
    let sing = TruncatedSeries::<f64>::generator(&gens, spec.degree, 0)
        .scale(&spec.z.ln())
        .exp();
    let against_series = diag.series.max_diff(&hat.mul(&sing));
    Ok(CheckReport::from_residuals(
        "transport",
        serde_json::json!({
            "z": spec.z, "degree": spec.degree, "steps": spec.steps,
            "eps": spec.eps, "tolerance": tol,
            "layout": ["deviation from direct series", "step error", "seed error"]
        }),
        vec![against_series, diag.step_error, diag.seed_error],
        tol,
        started,
    ))
}

fn run_eval(cmd: EvalCmd) -> Result<(), CliError> {
    match cmd {
        EvalCmd::Mpl { index, z, tol } => {
            let idx = MplIndex(parse_index(&index)?);
            let cfg = cfg_with_tol(tol)?;
            print_value(mpl(&idx, z, &cfg)?);
        }
        EvalCmd::Mpl2 {
            index,
            split,
            z1,
            z2,
            tol,
        } => {
            let idx = MplIndex(parse_index(&index)?);
            let cfg = cfg_with_tol(tol)?;
            print_value(mpl2(&idx, split, z1, z2, &cfg)?);
        }
        EvalCmd::Hyperlog { pairs, z, tol } => {
            let spec = HyperlogSpec::parse_pairs(&pairs).map_err(CliError::Usage)?;
            let cfg = cfg_with_tol(tol)?;
            print_value(hyperlog(&spec, z, &cfg)?);
        }
        EvalCmd::LiWord { word, z, tol } => {
            let w = parse_word::<kz_core::shuffle::Xi01>(&word)
                .ok_or_else(|| CliError::Usage(format!("bad word {word:?}: use digits 0/1")))?;
            let cfg = cfg_with_tol(tol)?;
            print_value(li_word(&w, z, &cfg)?);
        }
    }
    Ok(())
}

fn run_mzv(cmd: MzvCmd) -> Result<(), CliError> {
    match cmd {
        MzvCmd::Eval { index, tol, route } => {
            let idx = parse_index(&index)?;
            let cfg = cfg_with_tol(tol)?;
            let route = match route {
                RouteArg::Holder => ZetaRoute::Holder,
                RouteArg::Direct => ZetaRoute::DirectSummation,
            };
            print_value(zeta_comp(&idx, route, &cfg)?);
        }
        MzvCmd::Associator { degree, out } => {
            let phi = associator(degree);
            write_json(&phi.to_json(), out.as_deref().unwrap_or("-"))?;
        }
    }
    Ok(())
}

fn run_m05(cmd: M05Cmd) -> Result<(), CliError> {
    match cmd {
        M05Cmd::Pentagon { degree, tol, json } => {
            let rep = pentagon_check(degree, tol);
            emit_report(&rep, &json)?;
        }
        M05Cmd::BarBasis {
            weight,
            restricted,
            seed,
        } => {
            let owned;
            let table = match seed {
                None => default_wedge_table(),
                Some(s) => {
                    owned = WedgeTable::with_seed(s)
                        .map_err(|e| CliError::Usage(e.to_string()))?;
                    &owned
                }
            };
            for e in cic_kernel_with(table, weight, restricted) {
                println!("{}", e.poly());
            }
        }
    }
    Ok(())
}

fn battery() -> Vec<(&'static str, Box<dyn Fn() -> Result<CheckReport, CliError> + Send + Sync>)> {
    vec![
        ("duality", Box::new(|| Ok(check_duality(6, 1e-10)))),
        ("gif@0.3", Box::new(|| Ok(check_gif(0.3, 5, 1e-10)?))),
        ("gif@0.7", Box::new(|| Ok(check_gif(0.7, 5, 1e-10)?))),
        (
            "connection@0.2",
            Box::new(|| Ok(check_connection1(0.2, 4, 1e-9)?)),
        ),
        (
            "connection@0.4",
            Box::new(|| Ok(check_connection1(0.4, 4, 1e-9)?)),
        ),
        (
            "connection@0.6",
            Box::new(|| Ok(check_connection1(0.6, 4, 1e-9)?)),
        ),
        ("pentagon", Box::new(|| Ok(pentagon_check(4, 1e-8)))),
        (
            "decomposition@(0.3,0.4)",
            Box::new(|| Ok(check_decomposition(0.3, 0.4, 3, 1e-9)?)),
        ),
        (
            "decomposition@(0.5,0.2)",
            Box::new(|| Ok(check_decomposition(0.5, 0.2, 3, 1e-9)?)),
        ),
        (
            "ghpr@(0.3,0.4)",
            Box::new(|| Ok(check_ghpr(&hpr_phi(), 0.3, 0.4, 1e-10)?)),
        ),
        (
            "ghpr@(0.6,0.25)",
            Box::new(|| Ok(check_ghpr(&hpr_phi(), 0.6, 0.25, 1e-10)?)),
        ),
        (
            "ghpr-basis@(0.3,0.4)",
            Box::new(|| ghpr_basis_report(0.3, 0.4, 1e-10)),
        ),
        (
            "landen@(0.3,0.4)",
            Box::new(|| Ok(check_landen_2d(0.3, 0.4, 1e-10)?)),
        ),
        ("five-term-grid", Box::new(|| five_term_grid(5, 1e-12))),
        (
            "transport",
            Box::new(|| transport_report(&TransportSpec::kze1(0.5, 3), 1e-8)),
        ),
    ]
}

fn run_check(cmd: CheckCmd) -> Result<(), CliError> {
    match cmd {
        CheckCmd::Duality { degree, tol, json } => emit_report(&check_duality(degree, tol), &json),
        CheckCmd::Gif {
            z,
            weight,
            tol,
            json,
        } => emit_report(&check_gif(z, weight, tol)?, &json),
        CheckCmd::Connection {
            z,
            degree,
            tol,
            json,
        } => emit_report(&check_connection1(z, degree, tol)?, &json),
        CheckCmd::Pentagon { degree, tol, json } => {
            emit_report(&pentagon_check(degree, tol), &json)
        }
        CheckCmd::Decomposition {
            z1,
            z2,
            degree,
            tol,
            json,
        } => emit_report(&check_decomposition(z1, z2, degree, tol)?, &json),
        CheckCmd::Ghpr {
            z1,
            z2,
            tol,
            basis,
            json,
        } => {
            let rep = if basis {
                ghpr_basis_report(z1, z2, tol)?
            } else {
                check_ghpr(&hpr_phi(), z1, z2, tol)?
            };
            emit_report(&rep, &json)
        }
        CheckCmd::Landen { z1, z2, tol, json } => {
            emit_report(&check_landen_2d(z1, z2, tol)?, &json)
        }
        CheckCmd::FiveTerm {
            z1,
            z2,
            grid,
            tol,
            json,
        } => {
            let rep = match grid {
                Some(n) => five_term_grid(n, tol)?,
                None => check_five_term(z1, z2, tol),
            };
            emit_report(&rep, &json)
        }
        CheckCmd::All { json } => {
            let jobs = battery();
            let mut results: Vec<(usize, Result<CheckReport, CliError>)> = jobs
                .par_iter()
                .enumerate()
                .map(|(i, (_, job))| (i, job()))
                .collect();
            results.sort_by_key(|(i, _)| *i);
            let mut reports = Vec::with_capacity(jobs.len());
            for ((name, _), (_, res)) in jobs.iter().zip(results) {
                match res {
                    Ok(rep) => reports.push((name, rep)),
                    Err(CliError::Usage(msg)) => {
                        return Err(CliError::Usage(format!("{name}: {msg}")))
                    }
                    Err(CliError::Failed) => unreachable!("battery jobs return reports"),
                }
            }
            let all_pass = reports.iter().all(|(_, r)| r.pass);
            for (name, rep) in &reports {
                println!(
                    "{name:<26} {} max_residual={:.3e} ({} ms)",
                    if rep.pass { "PASS" } else { "FAIL" },
                    rep.max_residual,
                    rep.ms
                );
            }
            if let Some(path) = json.as_deref() {
                let arr: Vec<serde_json::Value> =
                    reports.iter().map(|(_, r)| r.to_json()).collect();
                write_json(&serde_json::Value::Array(arr), path)?;
            }
            if all_pass {
                Ok(())
            } else {
                Err(CliError::Failed)
            }
        }
    }
}

fn run_transport(args: TransportArgs) -> Result<(), CliError> {
    let kind = match args.eq {
        EqArg::Kze1 => {
            if args.a.is_some() {
                return Err(CliError::Usage(
                    "--a applies only to the simple-pole system (--eq se1)".into(),
                ));
            }
            EquationKind::Kze1
        }
        EqArg::Se1 => {
            let a = args
                .a
                .ok_or_else(|| CliError::Usage("--eq se1 requires --a p1,p2,…".into()))?;
            if a.is_empty() {
                return Err(CliError::Usage("--a needs at least one parameter".into()));
            }
            EquationKind::Se1 { a }
        }
    };
    let spec = TransportSpec {
        kind,
        eps: args.eps,
        z: args.z,
        steps: args.steps,
        degree: args.degree,
        error_budget: 1e-8,
    };
    let diag = transport_with_diagnostics(&spec)?;
    match args.json.as_deref() {
        None => {
            println!(
                "step_error={:.3e} seed_error={:.3e}",
                diag.step_error, diag.seed_error
            );
            print_series(&diag.series);
        }
        Some(path) => {
            write_json(
                &serde_json::json!({
                    "series": diag.series.to_json(),
                    "step_error": diag.step_error,
                    "seed_error": diag.seed_error,
                }),
                path,
            )?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Eval(cmd) => run_eval(cmd),
        Cmd::Mzv(cmd) => run_mzv(cmd),
        Cmd::M05(cmd) => run_m05(cmd),
        Cmd::Check(cmd) => run_check(cmd),
        Cmd::Transport(args) => run_transport(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Failed) => ExitCode::from(1),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
