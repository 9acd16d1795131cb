//! Command-line front end: `solve`, `verify` and `oracle` subcommands that
//! read/write CSV field files and JSON reports.
//!
//! Exit codes: 0 success, 1 invalid configuration or unreadable input,
//! 2 solver non-convergence, 3 verification failure.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::domain::{
    build_grid, make_constant_2d, make_geodesic_1d, make_random_admissible, BoundaryData, Problem,
    ProblemSpec, VectorField,
};
use crate::error::{Error, Result};
use crate::io::{read_field, write_field};
use crate::optimize::{angle_lift_solve_1d, solve};
use crate::verify::run_verify;

#[derive(Parser)]
#[command(
    name = "pharmonic",
    version,
    about = "p-energy minimization of circle-valued maps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ProblemArg {
    A1,
    A2,
}

#[derive(Args, Debug)]
struct ProblemArgs {
    /// Which constrained problem to pose.
    #[arg(long, value_enum)]
    problem: ProblemArg,

    /// Energy exponent; must be >= 2.
    #[arg(long, default_value_t = 2.0)]
    p: f64,

    /// Nodes per axis of the uniform grid.
    #[arg(long, default_value_t = 101)]
    nodes: usize,

    /// Stationarity tolerance on the tangential gradient max-norm.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,

    #[arg(long, default_value_t = 50_000)]
    max_iters: usize,

    /// Backtracking factor of the line search, in (0,1).
    #[arg(long, default_value_t = 0.5)]
    ls_beta: f64,

    /// Armijo sufficient-decrease constant, in (0,1).
    #[arg(long, default_value_t = 1e-4)]
    ls_c: f64,

    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Minimize the p-energy and write a JSON report plus the final field.
    Solve {
        #[command(flatten)]
        args: ProblemArgs,

        /// Initial field: geodesic | constant | random | file:<path>.
        #[arg(long, default_value = "random")]
        init: String,

        /// JSON report destination (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,

        /// CSV destination for the final field.
        #[arg(long)]
        field_out: Option<PathBuf>,
    },
    /// Run the certification suite on a field read from CSV.
    Verify {
        #[command(flatten)]
        args: ProblemArgs,

        #[arg(long)]
        field_in: PathBuf,

        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact 1D angle-lift solution (independent of the descent path).
    Oracle {
        #[command(flatten)]
        args: ProblemArgs,

        #[arg(long)]
        out: Option<PathBuf>,

        #[arg(long)]
        field_out: Option<PathBuf>,
    },
}

fn build_spec(args: &ProblemArgs) -> Result<ProblemSpec<f64>> {
    let (problem, dim, boundary) = match args.problem {
        ProblemArg::A1 => (Problem::A1, 1, BoundaryData::A1Endpoints),
        ProblemArg::A2 => (Problem::A2, 2, BoundaryData::A2Constant),
    };
    ProblemSpec::new(
        problem,
        args.p,
        build_grid(dim, args.nodes)?,
        boundary,
        args.tol,
        args.max_iters,
        args.ls_beta,
        args.ls_c,
        args.seed,
    )
}

fn initial_field(spec: &ProblemSpec<f64>, init: &str) -> Result<VectorField<f64>> {
    match init {
        "geodesic" => make_geodesic_1d(&spec.grid),
        "constant" => make_constant_2d(&spec.grid),
        "random" => make_random_admissible(spec),
        other => match other.strip_prefix("file:") {
            Some(path) => read_field(Path::new(path)),
            None => Err(Error::InvalidSpec(format!(
                "unknown init {other:?}; expected geodesic, constant, random or file:<path>"
            ))),
        },
    }
}

fn emit(report: &serde_json::Value, out: Option<&PathBuf>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(report).expect("report is valid JSON");
    text.push('\n');
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run_solve(
    args: &ProblemArgs,
    init: &str,
    out: Option<&PathBuf>,
    field_out: Option<&PathBuf>,
) -> Result<i32> {
    let spec = build_spec(args)?;
    let u0 = initial_field(&spec, init)?;
    let (report, field) = solve(&spec, &u0)?;
    if let Some(path) = field_out {
        write_field(path, &field)?;
    }
    let field_path = field_out.map(|p| p.display().to_string());
    emit(&report.to_json(field_path.as_deref()), out)?;
    Ok(if report.converged { 0 } else { 2 })
}

fn run_verify_cmd(args: &ProblemArgs, field_in: &Path, out: Option<&PathBuf>) -> Result<i32> {
    let spec = build_spec(args)?;
    let field = read_field::<f64>(field_in)?;
    if field.grid() != &spec.grid {
        return Err(Error::MalformedField(format!(
            "field in {} is {}D with {} nodes per axis; spec wants {}D with {}",
            field_in.display(),
            field.grid().dim(),
            field.grid().m(),
            spec.grid.dim(),
            spec.grid.m()
        )));
    }
    let verify = run_verify(&field, &spec)?;
    let report = json!({
        "problem": spec.problem.name(),
        "p": args.p,
        "m": args.nodes,
        "field_path": field_in.display().to_string(),
        "verify": verify.to_json(),
    });
    emit(&report, out)?;
    Ok(if verify.all_pass { 0 } else { 3 })
}

fn run_oracle(
    args: &ProblemArgs,
    out: Option<&PathBuf>,
    field_out: Option<&PathBuf>,
) -> Result<i32> {
    let spec = build_spec(args)?;
    let oracle = angle_lift_solve_1d(&spec)?;
    if let Some(path) = field_out {
        write_field(path, &oracle.field)?;
    }
    let report = json!({
        "problem": spec.problem.name(),
        "p": args.p,
        "m": args.nodes,
        "lifted_energy": oracle.lifted_energy,
        "polish_gain": oracle.polish_gain,
        "field_path": field_out.map(|p| p.display().to_string()),
    });
    emit(&report, out)?;
    Ok(0)
}

fn exit_code(err: &Error) -> i32 {
    match err {
        // a field that breaks its own constraints is a failed certification
        Error::ConstraintViolation { .. } => 3,
        _ => 1,
    }
}

/// Parses `argv` and runs one subcommand; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::Solve {
            args,
            init,
            out,
            field_out,
        } => run_solve(args, init, out.as_ref(), field_out.as_ref()),
        Command::Verify {
            args,
            field_in,
            out,
        } => run_verify_cmd(args, field_in, out.as_ref()),
        Command::Oracle {
            args,
            out,
            field_out,
        } => run_oracle(args, out.as_ref(), field_out.as_ref()),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code(&err)
        }
    }
}
