//! Loads a problem file and runs every command on it, as the binary would.
//! Defaults to the bundled amplitude example.

use clusterx::cli::{run, Command, RunOptions};
use clusterx::problem::ProblemFile;
use clusterx::report::ApproxOptions;

fn main() -> clusterx::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/problems/amplitude_edge.json").into());
    let problem = ProblemFile::load(&path)?.to_problem()?;
    let opts = RunOptions {
        approx: ApproxOptions::new(1e-4),
        compare: true,
    };
    for command in [Command::Check, Command::Approx, Command::Oracle] {
        println!("{:?}:\n{}", command, run(command, &problem, &opts)?.to_json());
    }
    let small = RunOptions {
        approx: ApproxOptions::new(1e-4).with_order(6),
        compare: false,
    };
    println!("Clusters:\n{}", run(Command::Clusters, &problem, &small)?.to_json());
    Ok(())
}
