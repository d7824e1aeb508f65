//! The `holder-bounds` command line.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 internal invariant
//! failure, 3 an `--expect-*` flag was not met. Payloads (JSON or CSV) go to
//! standard output, diagnostics to standard error.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;

use crate::bounds::{bound_report, cs_identity_report, BoundReport, CsIdentityReport};
use crate::error::{Error, Result};
use crate::family::{
    curve, derivative_at_zero, family_functions, fd_derivative_at_zero, find_violation_t, gap_pair,
    validate_params, FamilyParams, GapPoint, ScanOutcome,
};
use crate::format::{to_csv, to_json};
use crate::measure::{pointwise, ExponentPair, PointwiseOp};
use crate::search::{corpus_instance, random_search, random_search_with_threads, Instance, SearchConfig};
use crate::transforms::{transformed_holder_bound, TransformSpec};
use crate::{identity_margin, order_margin, DEFAULT_FD_STEP};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVARIANT: i32 = 2;
pub const EXIT_EXPECTATION: i32 = 3;

const VERSION: &str = concat!(
    env!("CARGO_PKG_VERSION"),
    " (order_tol=1e-9, identity_tol=1e-12, fd_step=1e-5)"
);

#[derive(Debug, Parser)]
#[command(name = "holder-bounds", version = VERSION, about = "Hölder and max-min bounds on finite discrete measures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Hölder, B_p, B_q and B_p ∧ B_q for an instance file.
    Bounds {
        #[arg(long)]
        input: PathBuf,
        #[arg(long = "p")]
        p: f64,
        /// `scale:k`, `swap`, `maxmin`, or a composition such as `scale:2>maxmin`.
        #[arg(long)]
        transform: Option<String>,
    },
    /// The p = 2 improvement identity, for a file or a seeded random corpus.
    Identity {
        #[arg(long, conflicts_with = "random")]
        input: Option<PathBuf>,
        #[arg(long)]
        random: bool,
        #[arg(long = "n", requires = "random")]
        n: Option<usize>,
        #[arg(long, requires = "random")]
        trials: Option<u64>,
        #[arg(long, requires = "random")]
        seed: Option<u64>,
    },
    /// Gap pair and bound report for one member of the counterexample family.
    Family {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long = "t")]
        t: f64,
    },
    /// CSV of d1, d2 and min_gap on an even grid over [0, t_max].
    Curve {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long = "t-max")]
        t_max: f64,
        #[arg(long)]
        steps: usize,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Smallest t on a log grid where B_p ∧ B_q exceeds Hölder.
    Scan {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long = "t-max", default_value_t = 0.1)]
        t_max: f64,
        #[arg(long, default_value_t = 400)]
        steps: usize,
    },
    /// Closed-form d'(0) against a finite difference.
    Derivative {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long = "h", default_value_t = DEFAULT_FD_STEP)]
        h: f64,
    },
    /// Seeded random search for B_p ∧ B_q > Hölder.
    Search(SearchArgs),
}

#[derive(Debug, Args)]
struct ParamArgs {
    #[arg(long = "p")]
    p: f64,
    #[arg(long = "m")]
    m: f64,
    #[arg(long = "w")]
    w: f64,
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long = "p")]
    p: f64,
    #[arg(long)]
    atoms: usize,
    #[arg(long)]
    trials: u64,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 0.0)]
    low: f64,
    #[arg(long, default_value_t = 10.0)]
    high: f64,
    /// Worker threads; the output does not depend on this.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, conflicts_with = "expect_some")]
    expect_none: bool,
    #[arg(long)]
    expect_some: bool,
    /// `M,W,T`: evaluate this family member as trial 0.
    #[arg(long)]
    inject_family: Option<String>,
}

/// What a command printed and how it exited.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutcome {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CommandOutcome {
    fn ok(stdout: String) -> Self {
        Self {
            exit_code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(exit_code: i32, stdout: String, stderr: String) -> Self {
        Self {
            exit_code,
            stdout,
            stderr,
        }
    }
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Invariant(_) => EXIT_INVARIANT,
        _ => EXIT_USAGE,
    }
}

fn json_line<T: Serialize>(value: &T) -> String {
    let mut s = to_json(value);
    s.push('\n');
    s
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> CommandOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CommandOutcome::ok(e.to_string()),
                _ => CommandOutcome::fail(EXIT_USAGE, String::new(), e.render().to_string()),
            };
        }
    };
    match dispatch(cli.command) {
        Ok(outcome) => outcome,
        Err(e) => CommandOutcome::fail(exit_code_for(&e), String::new(), format!("error: {e}\n")),
    }
}

fn dispatch(command: Command) -> Result<CommandOutcome> {
    match command {
        Command::Bounds { input, p, transform } => cmd_bounds(&input, p, transform.as_deref()),
        Command::Identity {
            input,
            random,
            n,
            trials,
            seed,
        } => match (input, random) {
            (Some(path), false) => cmd_identity_file(&path),
            (None, true) => {
                let missing = |flag: &str| Error::usage(format!("`identity --random` needs --{flag}"));
                cmd_identity_random(
                    n.ok_or_else(|| missing("n"))?,
                    trials.ok_or_else(|| missing("trials"))?,
                    seed.ok_or_else(|| missing("seed"))?,
                )
            }
            _ => Err(Error::usage("`identity` needs exactly one of --input FILE or --random")),
        },
        Command::Family { params, t } => cmd_family(&params, t),
        Command::Curve {
            params,
            t_max,
            steps,
            out,
        } => cmd_curve(&params, t_max, steps, out.as_deref()),
        Command::Scan { params, t_max, steps } => cmd_scan(&params, t_max, steps),
        Command::Derivative { params, h } => cmd_derivative(&params, h),
        Command::Search(args) => cmd_search(&args),
    }
}

/// Reads and validates a `{"weights": [..], "f": [..], "g": [..]}` instance.
pub fn read_instance(path: &Path) -> Result<Instance> {
    let text = fs::read_to_string(path).map_err(|e| Error::Input {
        key: path.display().to_string(),
        reason: e.to_string(),
    })?;
    parse_instance(&text)
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Input {
        key: "<document>".into(),
        reason: format!("malformed JSON: {e}"),
    })?;
    let obj = value.as_object().ok_or_else(|| Error::Input {
        key: "<document>".into(),
        reason: "expected an object with keys \"weights\", \"f\", \"g\"".into(),
    })?;
    let array = |key: &str| -> Result<Vec<f64>> {
        let bad = |key: String, reason: &str| Error::Input {
            key,
            reason: reason.to_string(),
        };
        let items = obj
            .get(key)
            .ok_or_else(|| bad(key.into(), "missing"))?
            .as_array()
            .ok_or_else(|| bad(key.into(), "expected an array of numbers"))?;
        items
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let x = v.as_f64().ok_or_else(|| bad(format!("{key}[{i}]"), "not a number"))?;
                if !x.is_finite() {
                    return Err(bad(format!("{key}[{i}]"), "not finite"));
                }
                if key == "weights" && x <= 0.0 {
                    return Err(bad(format!("{key}[{i}]"), "weights must be strictly positive"));
                }
                if x < 0.0 {
                    return Err(bad(format!("{key}[{i}]"), "values must be nonnegative"));
                }
                Ok(x)
            })
            .collect()
    };
    let inst = Instance {
        weights: array("weights")?,
        f: array("f")?,
        g: array("g")?,
    };
    if inst.weights.is_empty() {
        return Err(Error::Input {
            key: "weights".into(),
            reason: "at least one atom is required".into(),
        });
    }
    for (key, len) in [("f", inst.f.len()), ("g", inst.g.len())] {
        if len != inst.weights.len() {
            return Err(Error::Input {
                key: key.into(),
                reason: format!("has {len} entries but weights has {}", inst.weights.len()),
            });
        }
    }
    Ok(inst)
}

#[derive(Serialize)]
struct BoundsPayload {
    report: BoundReport,
    transform: Option<String>,
    transformed_bound: Option<f64>,
}

fn cmd_bounds(input: &Path, p: f64, transform: Option<&str>) -> Result<CommandOutcome> {
    let e = ExponentPair::new(p)?;
    let spec = transform.map(str::parse::<TransformSpec>).transpose()?;
    let (mu, f, g) = read_instance(input)?.to_parts()?;
    let report = bound_report(&mu, &f, &g, e)?;
    let transformed_bound = spec
        .as_ref()
        .map(|t| transformed_holder_bound(&mu, &f, &g, e, t))
        .transpose()?;
    let mut breach = report.check_ordering().err().map(|e| e.to_string());
    if let Some(b) = transformed_bound {
        if report.mu_fg > b + order_margin(b) {
            breach = Some(format!("mu(fg) = {} exceeds transformed bound {b}", report.mu_fg));
        }
    }
    let payload = json_line(&BoundsPayload {
        report,
        transform: spec.map(|t| t.to_string()),
        transformed_bound,
    });
    Ok(match breach {
        None => CommandOutcome::ok(payload),
        Some(msg) => CommandOutcome::fail(EXIT_INVARIANT, payload, format!("invariant breach: {msg}\n")),
    })
}

/// Identity, Eq. (4)-style ordering and ε-bound checks on one report.
fn identity_breach(report: &CsIdentityReport, mu_fg: f64) -> Option<String> {
    if let Err(e) = report.check() {
        return Some(e.to_string());
    }
    let sq = mu_fg * mu_fg;
    if sq > report.rhs_main + order_margin(report.rhs_main) {
        return Some(format!("mu(fg)^2 = {sq} exceeds mu(a v b) mu(a ^ b) = {}", report.rhs_main));
    }
    if report.rhs_main > report.lhs + identity_margin(report.lhs) {
        return Some(format!(
            "max-min bound {} exceeds Cauchy-Schwarz bound {}",
            report.rhs_main, report.lhs
        ));
    }
    None
}

fn identity_for(inst: &Instance) -> Result<(CsIdentityReport, f64)> {
    let (mu, f, g) = inst.to_parts()?;
    let report = cs_identity_report(&mu, &f, &g)?;
    let mu_fg = mu.integrate(&pointwise(PointwiseOp::Product, &f, &g)?)?;
    Ok((report, mu_fg))
}

fn cmd_identity_file(path: &Path) -> Result<CommandOutcome> {
    let (report, mu_fg) = identity_for(&read_instance(path)?)?;
    let payload = json_line(&report);
    Ok(match identity_breach(&report, mu_fg) {
        None => CommandOutcome::ok(payload),
        Some(msg) => CommandOutcome::fail(EXIT_INVARIANT, payload, format!("invariant breach: {msg}\n")),
    })
}

/// Summary of the identity checks over a random corpus.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityStats {
    pub atoms: usize,
    pub trials: u64,
    pub seed: u64,
    pub worst_relative_residual: f64,
    pub worst_trial: u64,
    /// Largest `improvement / eps_bound` (0 when every `eps_bound` is 0).
    pub max_improvement_ratio: f64,
    pub failures: u64,
}

fn cmd_identity_random(n: usize, trials: u64, seed: u64) -> Result<CommandOutcome> {
    if n == 0 {
        return Err(Error::usage("--n must be positive"));
    }
    if trials == 0 {
        return Err(Error::usage("--trials must be positive"));
    }
    let mut stats = IdentityStats {
        atoms: n,
        trials,
        seed,
        worst_relative_residual: 0.0,
        worst_trial: 0,
        max_improvement_ratio: 0.0,
        failures: 0,
    };
    let mut first_breach = None;
    for trial in 0..trials {
        let inst = corpus_instance(seed, trial, n..=n, 0.0, 10.0);
        let (report, mu_fg) = identity_for(&inst)?;
        let rel = report.relative_residual();
        if rel > stats.worst_relative_residual {
            stats.worst_relative_residual = rel;
            stats.worst_trial = trial;
        }
        if report.eps_bound > 0.0 {
            stats.max_improvement_ratio = stats.max_improvement_ratio.max(report.improvement / report.eps_bound);
        }
        if let Some(msg) = identity_breach(&report, mu_fg) {
            stats.failures += 1;
            first_breach.get_or_insert(format!("trial {trial}: {msg}"));
        }
    }
    let payload = json_line(&stats);
    Ok(match first_breach {
        None => CommandOutcome::ok(payload),
        Some(msg) => CommandOutcome::fail(EXIT_INVARIANT, payload, format!("invariant breach: {msg}\n")),
    })
}

fn params_from(args: &ParamArgs) -> Result<FamilyParams> {
    validate_params(args.p, args.m, args.w)
}

#[derive(Serialize)]
struct FamilyPayload {
    params: FamilyParams,
    gap: GapPoint,
    report: BoundReport,
}

fn cmd_family(args: &ParamArgs, t: f64) -> Result<CommandOutcome> {
    let params = params_from(args)?;
    let gap = gap_pair(&params, t)?;
    let (mu, f, g) = family_functions(&params, t)?;
    let report = bound_report(&mu, &f, &g, ExponentPair::new(params.p())?)?;
    let tol = crate::IDENTITY_TOL * (1.0 + report.holder);
    let pipeline = (report.b_p - report.holder, report.b_q - report.holder);
    let breach = ((gap.d1 - pipeline.0).abs() > tol || (gap.d2 - pipeline.1).abs() > tol).then(|| {
        format!(
            "closed form ({}, {}) disagrees with direct evaluation ({}, {})",
            gap.d1, gap.d2, pipeline.0, pipeline.1
        )
    });
    let payload = json_line(&FamilyPayload { params, gap, report });
    Ok(match breach {
        None => CommandOutcome::ok(payload),
        Some(msg) => CommandOutcome::fail(EXIT_INVARIANT, payload, format!("invariant breach: {msg}\n")),
    })
}

/// CSV text `t,d1,d2,min_gap` for the points.
pub fn curve_csv(points: &[GapPoint]) -> String {
    let rows: Vec<[f64; 4]> = points.iter().map(|g| [g.t, g.d1, g.d2, g.min_gap]).collect();
    to_csv(&["t", "d1", "d2", "min_gap"], rows.iter().map(|r| r.as_slice()))
}

fn cmd_curve(args: &ParamArgs, t_max: f64, steps: usize, out: Option<&Path>) -> Result<CommandOutcome> {
    let params = params_from(args)?;
    let csv = curve_csv(&curve(&params, t_max, steps)?);
    match out {
        None => Ok(CommandOutcome::ok(csv)),
        Some(path) => {
            fs::write(path, csv).map_err(|e| Error::Input {
                key: path.display().to_string(),
                reason: e.to_string(),
            })?;
            Ok(CommandOutcome::ok(String::new()))
        }
    }
}

#[derive(Serialize)]
struct ScanPayload {
    params: FamilyParams,
    t_max: f64,
    steps: usize,
    outcome: ScanOutcome,
}

fn cmd_scan(args: &ParamArgs, t_max: f64, steps: usize) -> Result<CommandOutcome> {
    let params = params_from(args)?;
    let outcome = find_violation_t(&params, t_max, steps)?;
    Ok(CommandOutcome::ok(json_line(&ScanPayload {
        params,
        t_max,
        steps,
        outcome,
    })))
}

#[derive(Serialize)]
struct DerivativePayload {
    params: FamilyParams,
    h: f64,
    formula: f64,
    fd_d1: f64,
    fd_d2: f64,
    rel_error_d1: f64,
    rel_error_d2: f64,
}

fn cmd_derivative(args: &ParamArgs, h: f64) -> Result<CommandOutcome> {
    let params = params_from(args)?;
    let formula = derivative_at_zero(&params);
    let fd_d1 = fd_derivative_at_zero(&params, h, 1)?;
    let fd_d2 = fd_derivative_at_zero(&params, h, 2)?;
    let rel = |fd: f64| (fd - formula).abs() / formula.abs();
    Ok(CommandOutcome::ok(json_line(&DerivativePayload {
        params,
        h,
        formula,
        fd_d1,
        fd_d2,
        rel_error_d1: rel(fd_d1),
        rel_error_d2: rel(fd_d2),
    })))
}

fn parse_inject(text: &str) -> Result<(f64, f64, f64)> {
    let parts: Vec<&str> = text.split(',').collect();
    let bad = || Error::Input {
        key: "--inject-family".into(),
        reason: format!("expected M,W,T, got `{text}`"),
    };
    if parts.len() != 3 {
        return Err(bad());
    }
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
    Ok((num(parts[0])?, num(parts[1])?, num(parts[2])?))
}

fn cmd_search(args: &SearchArgs) -> Result<CommandOutcome> {
    let mut cfg = SearchConfig::new(args.p, args.atoms, args.trials, args.seed);
    cfg.value_range = (args.low, args.high);
    cfg.inject_family = args.inject_family.as_deref().map(parse_inject).transpose()?;
    let result = match args.threads {
        Some(n) if n > 0 => random_search_with_threads(&cfg, n)?,
        Some(_) => return Err(Error::usage("--threads must be positive")),
        None => random_search(&cfg)?,
    };
    let payload = json_line(&result);

    if result.violations_found > 0 {
        let report = result.best_instance.report(ExponentPair::new(cfg.p)?)?;
        if !report.violates_holder_order {
            return Ok(CommandOutcome::fail(
                EXIT_INVARIANT,
                payload,
                "invariant breach: best instance does not re-verify as a violation\n".into(),
            ));
        }
    }
    if args.expect_none && result.violations_found > 0 {
        return Ok(CommandOutcome::fail(
            EXIT_EXPECTATION,
            payload,
            format!("expectation failed: {} violations found, none expected\n", result.violations_found),
        ));
    }
    if args.expect_some && result.violations_found == 0 {
        return Ok(CommandOutcome::fail(
            EXIT_EXPECTATION,
            payload,
            "expectation failed: no violations found\n".into(),
        ));
    }
    Ok(CommandOutcome::ok(payload))
}
