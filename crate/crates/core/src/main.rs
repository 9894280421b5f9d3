use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use clusterx::cli::{exit_code, run, Command, RunOptions};
use clusterx::problem::ProblemFile;
use clusterx::report::ApproxOptions;
use clusterx::{Error, Result};

/// Cluster-expansion approximations of amplitudes, expectation values,
/// partition functions and thermal expectation values.
///
/// Exit codes: 0 success, 2 condition not satisfied, 3 invalid input,
/// 4 size guard. `CLUSTERX_THREADS` caps the worker count.
#[derive(Parser)]
#[command(name = "clusterx", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate the sufficient conditions only.
    Check(Args),
    /// Approximate by the truncated cluster expansion.
    Approx(Args),
    /// Compute the exact value by brute force.
    Oracle(Args),
    /// Count polymers and clusters per size.
    Clusters(Args),
}

#[derive(clap::Args)]
struct Args {
    /// Problem file (JSON).
    file: PathBuf,
    /// Multiplicative accuracy target.
    #[arg(long, default_value_t = 1e-3)]
    epsilon: f64,
    /// Truncation order, overriding the one derived from epsilon.
    #[arg(long)]
    order: Option<usize>,
    /// Proceed even if the sufficient condition fails.
    #[arg(long)]
    force: bool,
    /// Also run the oracle and report the relative error.
    #[arg(long)]
    compare: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("clusterx: {err}");
            ExitCode::from(exit_code(&err) as u8)
        }
    }
}

fn execute(cli: Cli) -> Result<i32> {
    configure_threads()?;
    let (command, args) = match cli.command {
        Cmd::Check(a) => (Command::Check, a),
        Cmd::Approx(a) => (Command::Approx, a),
        Cmd::Oracle(a) => (Command::Oracle, a),
        Cmd::Clusters(a) => (Command::Clusters, a),
    };
    let problem = ProblemFile::load(&args.file)?.to_problem()?;
    let opts = RunOptions {
        approx: ApproxOptions {
            epsilon: args.epsilon,
            order: args.order,
            force: args.force,
        },
        compare: args.compare,
    };
    let output = run(command, &problem, &opts)?;
    let mut stdout = std::io::stdout().lock();
    // A closed pipe (e.g. `| head`) is not an error worth reporting.
    let _ = writeln!(stdout, "{}", output.to_json());
    Ok(output.exit_code())
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("CLUSTERX_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Validation(format!("CLUSTERX_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Validation(format!("cannot configure {n} workers: {e}")))
}
