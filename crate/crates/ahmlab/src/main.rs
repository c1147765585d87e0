//! Thin CLI over the ahmlab library.
//!
//! Exit codes: 0 = pass, 1 = identity/verification failure, 2 = usage or
//! configuration error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ahmlab::error::GeomError;
use ahmlab::fd::FdConfig;
use ahmlab::report::{
    classify_to_human, crosscheck_to_human, run_crosscheck, suite_to_csv, suite_to_human, to_json,
    zoo_listing, ClassifyOutput, OutputFormat,
};
use ahmlab::suite::{run_suite, Meta, Selection};
use ahmlab::tables::Engine;
use ahmlab::zoo::{by_name, ZooEntry};

#[derive(Parser)]
#[command(name = "ahmlab", version, about = "Connections, curvature and identity checks on almost Hermitian manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Manifold name (also accepted via --manifold).
    manifold: Option<String>,

    /// Manifold name.
    #[arg(long = "manifold", value_name = "NAME")]
    manifold_flag: Option<String>,

    /// Complex dimension for flat_cn / random_torus.
    #[arg(long, default_value_t = 2)]
    n: usize,

    /// Radius for round_s2.
    #[arg(long, default_value_t = 1.0)]
    radius: f64,

    /// Perturbation amplitude for random_torus.
    #[arg(long, default_value_t = 0.1)]
    amplitude: f64,

    /// Number of sample points.
    #[arg(long, default_value_t = 5)]
    points: usize,

    /// Seed for point sampling and seeded structures.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Classification tolerance.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,

    /// Base finite-difference step (second/third levels scale with it).
    #[arg(long = "fd-step")]
    fd_step: Option<f64>,

    /// Output format: json | csv | human.
    #[arg(long, default_value = "json")]
    format: String,

    /// Write the report to this path instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in manifold zoo with expected labels and parameters.
    ZooList {
        /// Output format: json | human.
        #[arg(long, default_value = "human")]
        format: String,
    },
    /// Validate a structure and classify it in the generalized-Kaehler
    /// hierarchy.
    Classify(RunArgs),
    /// Run identity checks against sampled points.
    Check {
        #[command(flatten)]
        run: RunArgs,
        /// Comma-separated identity codes, or "all".
        #[arg(long, default_value = "all")]
        identities: String,
    },
    /// Compare directly computed Levi-Civita curvature against its
    /// reconstruction from canonical data.
    Crosscheck(RunArgs),
}

struct Prepared {
    entry: ZooEntry,
    engine: Engine,
    points: Vec<ahmlab::Point>,
    args: RunArgs,
    format: OutputFormat,
}

fn prepare(args: RunArgs) -> Result<Prepared, CliError> {
    let name = match (&args.manifold, &args.manifold_flag) {
        (Some(p), None) => p.clone(),
        (None, Some(f)) => f.clone(),
        (Some(p), Some(f)) if p == f => p.clone(),
        (Some(_), Some(_)) => {
            return Err(CliError::usage(
                "conflicting manifold names given positionally and via --manifold",
            ))
        }
        (None, None) => {
            return Err(CliError::usage(
                "a manifold name is required (positional or --manifold)",
            ))
        }
    };
    if args.points == 0 {
        return Err(CliError::usage("--points must be at least 1"));
    }
    let format = OutputFormat::parse(&args.format)
        .ok_or_else(|| CliError::usage(&format!("unknown format `{}`", args.format)))?;
    let entry = by_name(&name, args.n, args.radius, args.seed, args.amplitude)
        .map_err(CliError::from_geom_usage)?;
    let cfg = match args.fd_step {
        Some(h) if h > 0.0 => FdConfig::with_base_step(h),
        Some(_) => return Err(CliError::usage("--fd-step must be positive")),
        None => FdConfig::default(),
    };
    let frame = entry.frame();
    let engine = Engine::new(entry.structure.clone(), frame, cfg);
    let points = entry.sample_points(args.points, args.seed);
    Ok(Prepared {
        entry,
        engine,
        points,
        args,
        format,
    })
}

struct CliError {
    message: String,
    code: u8,
}

impl CliError {
    fn usage(msg: &str) -> Self {
        CliError {
            message: msg.to_string(),
            code: 2,
        }
    }

    fn runtime(msg: String) -> Self {
        CliError { message: msg, code: 1 }
    }

    fn from_geom_usage(e: GeomError) -> Self {
        match e {
            GeomError::UnknownManifold(_)
            | GeomError::UnknownIdentity(_)
            | GeomError::BadParameter(_) => CliError {
                message: e.to_string(),
                code: 2,
            },
            other => CliError::runtime(other.to_string()),
        }
    }
}

fn emit(prepared_out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match prepared_out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::runtime(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run() -> Result<bool, CliError> {
    let cli = Cli::parse();
    match cli.command {
        Command::ZooList { format } => {
            let fmt = OutputFormat::parse(&format)
                .ok_or_else(|| CliError::usage(&format!("unknown format `{format}`")))?;
            print!("{}", zoo_listing(fmt));
            Ok(true)
        }
        Command::Classify(args) => {
            let p = prepare(args)?;
            let classification =
                ahmlab::classify(&p.engine, &p.points, p.args.tol).map_err(|e| match e {
                    GeomError::InvalidStructure { .. } => CliError::runtime(e.to_string()),
                    other => CliError::from_geom_usage(other),
                })?;
            let output = ClassifyOutput {
                meta: Meta {
                    version: env!("CARGO_PKG_VERSION").to_string(),
                    seed: p.args.seed,
                    fd: p.engine.cfg,
                },
                structure: p.entry.name.clone(),
                classification,
            };
            let text = match p.format {
                OutputFormat::Human => classify_to_human(&output),
                _ => to_json(&output).map_err(|e| CliError::runtime(e.to_string()))? + "\n",
            };
            emit(&p.args.out, &text)?;
            Ok(true)
        }
        Command::Check { run, identities } => {
            let p = prepare(run)?;
            let selection = Selection::parse(&identities);
            if let Selection::Codes(codes) = &selection {
                for code in codes {
                    ahmlab::identities::find_spec(code).map_err(CliError::from_geom_usage)?;
                }
            }
            let report = run_suite(
                &p.engine,
                &p.entry.name,
                &p.points,
                &selection,
                p.args.tol,
                p.args.seed,
            )
            .map_err(|e| CliError::runtime(e.to_string()))?;
            let text = match p.format {
                OutputFormat::Json => {
                    to_json(&report).map_err(|e| CliError::runtime(e.to_string()))? + "\n"
                }
                OutputFormat::Csv => suite_to_csv(&report),
                OutputFormat::Human => suite_to_human(&report),
            };
            emit(&p.args.out, &text)?;
            Ok(report.overall_pass)
        }
        Command::Crosscheck(args) => {
            let p = prepare(args)?;
            let report = run_crosscheck(&p.engine, &p.entry.name, &p.points, p.args.seed)
                .map_err(|e| CliError::runtime(e.to_string()))?;
            let text = match p.format {
                OutputFormat::Human => crosscheck_to_human(&report),
                _ => to_json(&report).map_err(|e| CliError::runtime(e.to_string()))? + "\n",
            };
            emit(&p.args.out, &text)?;
            Ok(report.pass)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
