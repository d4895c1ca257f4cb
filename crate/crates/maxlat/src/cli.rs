//! Command-line entry points.
//!
//! Exit codes: 0 when every asserted check passed, 1 when any check
//! failed, 2 on usage or validation errors.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{load_space, parse_exponent_spec, RunConfig};
use crate::error::{Error, Result};
use crate::grids::{build_adjacent_system, choose_delta, dump_grids};
use crate::lattice::{ExponentFunction, Lattice, ModularKind};
use crate::maximal::MaximalOp;
use crate::report::{emit_report, write_atomic, SuiteReport};
use crate::selfimprove::{estimate_operator_norm, NormStrategy};
use crate::space::{generate_space, SpaceKind};
use crate::suites::run_verify;

#[derive(Parser)]
#[command(
    name = "maxlat",
    about = "Dyadic grids, maximal operators and quasi-Banach lattice checks on finite spaces of homogeneous type",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a space and write it in the ingestion format.
    GenSpace(GenSpaceArgs),
    /// Build an adjacent grid system and dump its cubes.
    BuildGrids(BuildGridsArgs),
    /// Run verification suites and emit a report.
    Verify(VerifyArgs),
    /// Estimate an operator norm.
    NormEst(NormEstArgs),
    /// Re-emit a machine report as CSV or JSON.
    Report(ReportArgs),
}

#[derive(Args)]
struct GenSpaceArgs {
    /// Generator: path, grid2d, discrete, cantor, random-planar.
    #[arg(long)]
    kind: String,
    /// Point count (side length for grid2d, depth for cantor).
    #[arg(long)]
    n: usize,
    /// Optional snowflake exponent applied to the distances (> 1).
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BuildGridsArgs {
    /// Generator spec (`path:3`, `snowflake:2:path:3`, ...) or a file.
    #[arg(long)]
    space: String,
    /// Grid scale; defaults to the largest power of two in regime.
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, default_value_t = 24)]
    kmax_grids: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Output file for the cube dump; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Base configuration file; flags below override its keys.
    #[arg(long)]
    config: Option<PathBuf>,
    /// axioms, equivalence, modular, norms, rdf, reverse-holder,
    /// selfimprove, or all.
    #[arg(long)]
    suite: Option<String>,
    #[arg(long)]
    space: Option<String>,
    #[arg(long)]
    exponents: Option<String>,
    #[arg(long)]
    modular: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    convexify_r: Option<f64>,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long)]
    safety: Option<f64>,
    #[arg(long)]
    samples_random: Option<usize>,
    #[arg(long)]
    samples_rdf: Option<usize>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct NormEstArgs {
    #[arg(long, default_value = "path:3")]
    space: String,
    /// linf, l1, lp:<p>, or an exponent spec (const:2, comma list, file).
    #[arg(long)]
    lattice: String,
    #[arg(long, default_value = "sum")]
    modular: String,
    /// ball or dyadic.
    #[arg(long, default_value = "ball")]
    op: String,
    /// auto, exact-linf, exact-l1, multistart.
    #[arg(long, default_value = "auto")]
    strategy: String,
    #[arg(long, default_value_t = 8)]
    starts: usize,
    #[arg(long, default_value_t = 25)]
    steps: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long)]
    delta: Option<f64>,
}

#[derive(Args)]
struct ReportArgs {
    /// Machine report (JSON) produced by `verify`.
    #[arg(long = "in")]
    input: PathBuf,
    /// csv or json.
    #[arg(long, default_value = "csv")]
    format: String,
}

/// Parses and executes a full argv; returns the process exit code.
pub fn run_command<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own help/version output
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(all_passed) => {
            if all_passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn dispatch(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::GenSpace(args) => gen_space(args),
        Command::BuildGrids(args) => build_grids(args),
        Command::Verify(args) => verify(args),
        Command::NormEst(args) => norm_est(args),
        Command::Report(args) => report(args),
    }
}

fn gen_space(args: GenSpaceArgs) -> Result<bool> {
    let base = match args.kind.as_str() {
        "path" => SpaceKind::Path { n: args.n },
        "grid2d" => SpaceKind::Grid2d { side: args.n },
        "discrete" => SpaceKind::Discrete { n: args.n },
        "cantor" => SpaceKind::CantorUltrametric {
            depth: args.n as u32,
        },
        "random-planar" | "planar" => SpaceKind::RandomPlanar { n: args.n },
        other => return Err(Error::UnknownKind(other.to_string())),
    };
    let kind = match args.beta {
        Some(beta) => SpaceKind::Snowflake {
            base: Box::new(base),
            beta,
        },
        None => base,
    };
    let space = generate_space(&kind, args.seed)?;
    let text = crate::config::write_space_file(&space);
    match args.out {
        Some(path) => write_atomic(&path, text.as_bytes())?,
        None => print!("{text}"),
    }
    eprintln!(
        "space: n={} a0={} doubling={} geometric={}",
        space.n(),
        space.a0(),
        space.doubling_constant(),
        space.geometric_doubling()
    );
    Ok(true)
}

fn build_grids(args: BuildGridsArgs) -> Result<bool> {
    let space = load_space(&args.space, args.seed)?;
    let delta = args.delta.unwrap_or_else(|| choose_delta(space.a0()));
    let system = build_adjacent_system(&space, delta, args.kmax_grids, args.seed)?;
    let dump = dump_grids(&system);
    match args.out {
        Some(path) => write_atomic(&path, dump.as_bytes())?,
        None => print!("{dump}"),
    }
    eprintln!(
        "grids: {} (C={} in_regime={})",
        system.descriptor(),
        system.constants.c_ball_cube,
        system.constants.in_regime
    );
    Ok(true)
}

fn verify(args: VerifyArgs) -> Result<bool> {
    let mut cfg = match &args.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(v) = args.suite {
        cfg.suite = v;
    }
    if let Some(v) = args.space {
        cfg.space = v;
    }
    if let Some(v) = args.exponents {
        cfg.exponents = v;
    }
    if let Some(v) = args.modular {
        cfg.modular = v;
    }
    if let Some(v) = args.seed {
        cfg.seed = v;
    }
    if let Some(v) = args.delta {
        cfg.delta = v;
    }
    if let Some(v) = args.eta {
        cfg.eta = v;
    }
    if let Some(v) = args.convexify_r {
        cfg.convexify_r = v;
    }
    if let Some(v) = args.theta {
        cfg.theta = v;
    }
    if let Some(v) = args.safety {
        cfg.safety = v;
    }
    if let Some(v) = args.samples_random {
        cfg.samples_random = v;
    }
    if let Some(v) = args.samples_rdf {
        cfg.samples_rdf = v;
    }
    if let Some(v) = args.out_dir {
        cfg.out_dir = v.display().to_string();
    }

    let out = run_verify(&cfg)?;
    let dir = cfg.out_dir();
    emit_report(&out.report, &dir)?;
    for (name, body) in &out.plots {
        write_atomic(&dir.join(name), body.as_bytes())?;
    }

    let total = out.report.records.len();
    let failures: Vec<_> = out.report.failures().collect();
    println!(
        "verify[{}]: {} records, {} failed -> {}",
        cfg.suite,
        total,
        failures.len(),
        dir.display()
    );
    for rec in &failures {
        println!(
            "FAIL {} ({}): lhs={} rhs={}",
            rec.name, rec.statement, rec.lhs, rec.rhs
        );
    }
    Ok(out.report.passed())
}

fn norm_lattice(spec: &str, kind: ModularKind, n: usize) -> Result<Lattice> {
    match spec {
        "linf" => Ok(Lattice::variable(
            ExponentFunction::constant(n, f64::INFINITY)?,
            kind,
        )),
        "l1" => Ok(Lattice::variable(ExponentFunction::constant(n, 1.0)?, kind)),
        other => {
            if let Some(p) = other.strip_prefix("lp:") {
                let p: f64 = p
                    .parse()
                    .map_err(|_| Error::Usage(format!("bad exponent in {other:?}")))?;
                Ok(Lattice::variable(ExponentFunction::constant(n, p)?, kind))
            } else {
                Ok(Lattice::variable(parse_exponent_spec(other, n)?, kind))
            }
        }
    }
}

fn norm_est(args: NormEstArgs) -> Result<bool> {
    let space = load_space(&args.space, args.seed)?;
    let kind = match args.modular.as_str() {
        "sum" => ModularKind::Sum,
        "max" => ModularKind::Max,
        other => return Err(Error::Usage(format!("bad modular kind {other:?}"))),
    };
    let lattice = norm_lattice(&args.lattice, kind, space.n())?;
    let op = match args.op.as_str() {
        "ball" => MaximalOp::Ball,
        "dyadic" => MaximalOp::Dyadic,
        other => return Err(Error::Usage(format!("bad operator {other:?}"))),
    };
    let strategy = match args.strategy.as_str() {
        "exact-linf" => NormStrategy::ExactLinf,
        "exact-l1" => NormStrategy::ExactL1PointMass,
        "multistart" => NormStrategy::Multistart {
            starts: args.starts,
            steps: args.steps,
        },
        "auto" => match args.lattice.as_str() {
            "linf" => NormStrategy::ExactLinf,
            "l1" if kind == ModularKind::Sum => NormStrategy::ExactL1PointMass,
            _ => NormStrategy::Multistart {
                starts: args.starts,
                steps: args.steps,
            },
        },
        other => return Err(Error::Usage(format!("bad strategy {other:?}"))),
    };
    let system;
    let system_ref =
        if op == MaximalOp::Dyadic || matches!(strategy, NormStrategy::Multistart { .. }) {
            let delta = args.delta.unwrap_or_else(|| choose_delta(space.a0()));
            system = build_adjacent_system(&space, delta, 24, args.seed)?;
            Some(&system)
        } else {
            None
        };
    let est = estimate_operator_norm(&space, system_ref, &lattice, op, strategy, args.seed)?;
    println!("{}", est.value);
    eprintln!(
        "norm-est: kind={} trials={} op={} lattice={}",
        est.kind,
        est.trials,
        op,
        lattice.descriptor()
    );
    Ok(true)
}

fn report(args: ReportArgs) -> Result<bool> {
    let text = std::fs::read_to_string(&args.input)?;
    let report = SuiteReport::from_json(&text)?;
    match args.format.as_str() {
        "csv" => print!("{}", report.to_csv()),
        "json" => println!("{}", report.to_json()),
        other => return Err(Error::Usage(format!("bad format {other:?}"))),
    }
    Ok(report.passed())
}
