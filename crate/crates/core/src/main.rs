use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use solvlck::cli::{self, Options, Report, TOL_ENV};
use solvlck::{Backend, Error};

/// Cohomology, LCK structures and Oeljeklaus–Toma algebras of solvable Lie algebras.
#[derive(Parser, Debug)]
#[command(name = "solvlck", version)]
struct Args {
    /// Scalar backend; defaults to the one declared by the input file.
    #[arg(long, global = true, value_parser = parse_backend)]
    backend: Option<Backend>,

    /// Relative tolerance of the float backend.
    #[arg(long, global = true, env = TOL_ENV, default_value_t = solvlck::scalar::DEFAULT_TOLERANCE)]
    tol: f64,

    /// Write the result here (atomically) instead of to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Suppress the summary line printed when --out is given.
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Betti numbers of the Chevalley–Eilenberg complex.
    Betti { spec: PathBuf },
    /// Cohomology of d - theta∧.
    Twisted { spec: PathBuf, theta: PathBuf },
    /// Invariant Vaisman obstruction for an LCS form (theta defaults to its Lee form).
    CheckVaisman {
        spec: PathBuf,
        omega: PathBuf,
        theta: Option<PathBuf>,
    },
    /// Build an OT algebra from {"poly", "s", "t", "coeff_bound"}.
    BuildOt { field: PathBuf },
    /// Harmonic forms and the formality of an invariant metric.
    Formality { spec: PathBuf, metric: PathBuf },
    /// Emit a standard algebra: abelian[:n], heisenberg[:k], heisenberg-line[:k], inoue-s0[:c], ot[:s].
    Catalog { name: String },
}

fn parse_backend(s: &str) -> Result<Backend, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn run(args: Args) -> Result<Option<String>, Error> {
    let opts = Options {
        backend: args.backend,
        tol: args.tol,
        out: args.out,
        quiet: args.quiet,
    };
    let report: Report = match &args.command {
        Command::Betti { spec } => cli::cmd_betti(&opts, spec)?,
        Command::Twisted { spec, theta } => cli::cmd_twisted(&opts, spec, theta)?,
        Command::CheckVaisman { spec, omega, theta } => {
            cli::cmd_check_vaisman(&opts, spec, omega, theta.as_deref())?
        }
        Command::BuildOt { field } => cli::cmd_build_ot(&opts, field)?,
        Command::Formality { spec, metric } => cli::cmd_formality(&opts, spec, metric)?,
        Command::Catalog { name } => cli::cmd_catalog(&opts, name)?,
    };
    report.emit(&opts)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(args) {
        Ok(Some(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", cli::diagnostic(&e));
            ExitCode::from(e.class().exit_code() as u8)
        }
    }
}
