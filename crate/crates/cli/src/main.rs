//! `regquat`: command-line access to regular quaternionic series.
//!
//! Exit codes: 0 when every check passes, 1 when a check reports a violation
//! or the numerics fail, 2 for usage errors, unreadable input and unmet
//! preconditions.

mod parse;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use regquat::analysis::identities::identity_suite_with;
use regquat::analysis::modulus::check_min_modulus_with;
use regquat::analysis::open_mapping::open_mapping_probe_with;
use regquat::analysis::scan::{modulus_csv, modulus_scan};
use regquat::analysis::{
    check_max_modulus, counterexample_witness, degenerate_scan, CoverageVerdict, GridSpec,
    IdentitySuiteOptions, ProbeTargets, Region, Verdict,
};
use regquat::spheres::{
    is_degenerate, modulus_extrema_on_sphere, sphere_zero_with, spherical_split,
};
use regquat::zeros::zero_set_with;
use regquat::{Config, Error, ImaginaryUnit, Quaternion, RegularSeries, Sphere2};

const FORMAT_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "regquat",
    version,
    about = "Regular functions of a quaternionic variable"
)]
struct Cli {
    /// Override a configuration field, e.g. `--set eps_eq=1e-10` (repeatable).
    #[arg(long = "set", value_name = "FIELD=VALUE", value_parser = parse::assignment, global = true)]
    overrides: Vec<(String, String)>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate f at a point.
    Eval {
        file: PathBuf,
        #[arg(long, value_name = "W,X,Y,Z", value_parser = parse::quaternion, allow_hyphen_values = true)]
        at: Quaternion,
    },
    /// Regular product f * g.
    Product {
        file: PathBuf,
        other: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Regular conjugate f^c.
    Conjugate {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Symmetrization f^s = f * f^c.
    Symmetrize {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Reciprocal series up to an order, or the reciprocal evaluated at a point.
    Reciprocal {
        file: PathBuf,
        #[arg(
            long,
            value_name = "M",
            conflicts_with = "at",
            required_unless_present = "at"
        )]
        order: Option<usize>,
        #[arg(long, value_name = "W,X,Y,Z", value_parser = parse::quaternion, allow_hyphen_values = true)]
        at: Option<Quaternion>,
        #[command(flatten)]
        out: Output,
    },
    /// Zero set inside a ball.
    Zeros {
        file: PathBuf,
        #[arg(long, value_name = "R")]
        radius: f64,
    },
    /// Split f on the sphere x + yS into f(x + yI) = b + Ic.
    Split {
        file: PathBuf,
        #[arg(long, value_name = "X,Y", value_parser = parse::sphere, allow_hyphen_values = true)]
        sphere: Sphere2,
        /// Degeneracy tolerance on |c| / scale (default from config).
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Scan |c| over a grid of spheres for degenerate ones.
    ScanDegenerate {
        file: PathBuf,
        #[arg(long, value_name = "X0,X1,Y0,Y1,NX,NY", value_parser = parse::grid, allow_hyphen_values = true)]
        grid: GridSpec,
        #[arg(long)]
        tol: Option<f64>,
        /// Write the field as CSV (x,y,abs_c).
        #[arg(long, value_name = "FILE")]
        csv: Option<PathBuf>,
    },
    /// Scan |f(x + yI)| over a grid for one unit I.
    ScanModulus {
        file: PathBuf,
        #[arg(long, value_name = "X0,X1,Y0,Y1,NX,NY", value_parser = parse::grid, allow_hyphen_values = true)]
        grid: GridSpec,
        #[arg(long, value_name = "U1,U2,U3", value_parser = parse::unit, allow_hyphen_values = true, default_value = "1,0,0")]
        unit: ImaginaryUnit,
        /// Write the field as CSV (x,y,abs_f); printed to standard output otherwise.
        #[arg(long, value_name = "FILE")]
        csv: Option<PathBuf>,
    },
    /// Run a numerical check and print its report.
    Check(CheckArgs),
    /// Print the resolved configuration.
    Config,
}

#[derive(Args)]
struct Output {
    /// Write the resulting function document here instead of standard output.
    #[arg(short, long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckKind {
    MinModulus,
    MaxModulus,
    OpenMapping,
    Counterexample,
    Identities,
}

#[derive(Args)]
struct CheckArgs {
    kind: CheckKind,
    /// Function file (not used by `counterexample`, which always checks q² + 1).
    file: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    probes: Option<usize>,
    #[arg(long)]
    epsilon: Option<f64>,
    /// Ball radius for the modulus checks and the identity suite.
    #[arg(long)]
    radius: Option<f64>,
    /// `ball:W,X,Y,Z,R` or `circular:X,Y,R` (open-mapping).
    #[arg(long, value_parser = parse::region, allow_hyphen_values = true)]
    region: Option<Region>,
    /// `ball` or `segment:W,X,Y,Z` (open-mapping).
    #[arg(long, value_parser = parse::targets, allow_hyphen_values = true, default_value = "ball")]
    targets: ProbeTargets,
    /// Second function for the identity suite (defaults to the first).
    #[arg(long = "with", value_name = "FILE")]
    with: Option<PathBuf>,
    /// Unit I of the counterexample.
    #[arg(long, value_parser = parse::unit, allow_hyphen_values = true, default_value = "1,0,0")]
    unit: ImaginaryUnit,
    /// Unit K orthogonal to I.
    #[arg(long, value_parser = parse::unit, allow_hyphen_values = true, default_value = "0,1,0")]
    orthogonal: ImaginaryUnit,
}

/// A failure together with its exit code.
enum Failure {
    Usage(String),
    Numeric(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::RootFinderFailed { .. } | Error::SymmetrizationNotReal { .. } => {
                Self::Numeric(e.to_string())
            }
            _ => Self::Usage(e.to_string()),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn load(path: &Path) -> CliResult<RegularSeries> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    RegularSeries::from_json_str(&text)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// Report object with `format_version` as its first field.
fn versioned(report: impl Serialize) -> Value {
    let mut out = Map::new();
    out.insert("format_version".into(), json!(FORMAT_VERSION));
    match serde_json::to_value(report).expect("reports serialize") {
        Value::Object(fields) => out.extend(fields),
        other => {
            out.insert("value".into(), other);
        }
    }
    Value::Object(out)
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(text: &str) {
    use std::io::Write;
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn print(value: &Value) {
    emit(&(serde_json::to_string_pretty(value).expect("values serialize") + "\n"));
}

fn emit_function(f: &RegularSeries, out: &Output) -> CliResult<()> {
    let text = serde_json::to_string_pretty(f).expect("functions serialize");
    match &out.output {
        Some(path) => write_file(path, &(text + "\n")),
        None => {
            emit(&(text + "\n"));
            Ok(())
        }
    }
}

fn verdict_code(passed: bool) -> ExitCode {
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

/// Constant functions do not meet the modulus checks' precondition.
fn modulus_code(v: Verdict) -> ExitCode {
    match v {
        Verdict::Pass => ExitCode::SUCCESS,
        Verdict::Constant => ExitCode::from(2),
        Verdict::Violation | Verdict::Inconclusive => ExitCode::from(1),
    }
}

fn run(cli: Cli) -> CliResult<ExitCode> {
    let mut cfg = Config::from_env()?;
    for (field, value) in &cli.overrides {
        cfg.set(field, value)?;
    }

    match cli.command {
        Command::Eval { file, at } => {
            let f = load(&file)?;
            print(&versioned(json!({ "at": at, "value": f.evaluate(at) })));
        }
        Command::Product { file, other, out } => {
            emit_function(&load(&file)?.regular_product(&load(&other)?), &out)?;
        }
        Command::Conjugate { file, out } => emit_function(&load(&file)?.regular_conjugate(), &out)?,
        Command::Symmetrize { file, out } => emit_function(&load(&file)?.symmetrization()?, &out)?,
        Command::Reciprocal {
            file,
            order,
            at,
            out,
        } => {
            let f = load(&file)?;
            match (order, at) {
                (Some(m), _) => emit_function(&f.reciprocal_series(m)?, &out)?,
                (None, Some(q)) => {
                    print(&versioned(json!({ "at": q, "value": f.reciprocal_at(q)? })))
                }
                (None, None) => unreachable!("clap requires --order or --at"),
            }
        }
        Command::Zeros { file, radius } => {
            print(&versioned(zero_set_with(&load(&file)?, radius, &cfg)?))
        }
        Command::Split { file, sphere, tol } => {
            let f = load(&file)?;
            let v = spherical_split(&f, sphere);
            let degenerate = match is_degenerate(&f, sphere, tol.unwrap_or(cfg.degeneracy_tol)) {
                Ok(d) => Some(d),
                Err(Error::NotASphere { .. }) => None,
                Err(e) => return Err(e.into()),
            };
            print(&versioned(json!({
                "sphere": sphere,
                "b": v.b,
                "c": v.c,
                "scale": v.scale,
                "degenerate": degenerate,
                "zero": sphere_zero_with(&v, cfg.eps_eq, cfg.unit_tol),
                "extrema": modulus_extrema_on_sphere(&v),
            })));
        }
        Command::ScanDegenerate {
            file,
            grid,
            tol,
            csv,
        } => {
            let scan = degenerate_scan(&load(&file)?, grid, tol.unwrap_or(cfg.degeneracy_tol))?;
            if let Some(path) = &csv {
                write_file(path, &scan.to_csv())?;
            }
            print(&versioned(json!({
                "grid": scan.grid,
                "tol": scan.tol,
                "candidates": scan.candidates,
                "filled_block": scan.has_filled_block(),
            })));
        }
        Command::ScanModulus {
            file,
            grid,
            unit,
            csv,
        } => {
            let text = modulus_csv(&modulus_scan(&load(&file)?, grid, unit)?);
            match &csv {
                Some(path) => write_file(path, &text)?,
                None => emit(&text),
            }
        }
        Command::Check(args) => return check(args, &cfg),
        Command::Config => print(&versioned(&cfg)),
    }
    Ok(ExitCode::SUCCESS)
}

fn check(args: CheckArgs, cfg: &Config) -> CliResult<ExitCode> {
    let seed = args.seed.unwrap_or(cfg.seed);
    let samples = args.samples.unwrap_or(cfg.samples);
    let function = || match &args.file {
        Some(path) => load(path),
        None => Err(Failure::Usage("this check needs a function FILE".into())),
    };
    let code = match args.kind {
        CheckKind::MaxModulus => {
            let r = check_max_modulus(&function()?, args.radius.unwrap_or(1.0), samples, seed)?;
            print(&versioned(&r));
            modulus_code(r.verdict)
        }
        CheckKind::MinModulus => {
            let r = check_min_modulus_with(
                &function()?,
                args.radius.unwrap_or(1.0),
                samples,
                seed,
                cfg,
            )?;
            print(&versioned(&r));
            modulus_code(r.verdict)
        }
        CheckKind::OpenMapping => {
            let region = args
                .region
                .ok_or_else(|| Failure::Usage("open-mapping needs --region".into()))?;
            let f = function()?;
            let epsilon = args.epsilon.unwrap_or(cfg.epsilon);
            let probes = args.probes.unwrap_or(cfg.probes);
            let r = open_mapping_probe_with(&f, region, epsilon, probes, args.targets, seed, cfg)?;
            print(&versioned(&r));
            verdict_code(r.verdict == CoverageVerdict::Covered)
        }
        CheckKind::Counterexample => {
            let r = counterexample_witness(args.unit, args.orthogonal, samples, seed)?;
            print(&versioned(&r));
            verdict_code(r.verdict.passed())
        }
        CheckKind::Identities => {
            let f = function()?;
            let g = match &args.with {
                Some(path) => load(path)?,
                None => f.clone(),
            };
            let opts = IdentitySuiteOptions {
                radius: args.radius,
                tolerance: cfg.eps_eq,
                guard_band: cfg.guard_band,
                ..Default::default()
            };
            let r = identity_suite_with(&f, &g, samples, seed, opts)?;
            print(&versioned(&r));
            verdict_code(r.all_passed)
        }
    };
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
