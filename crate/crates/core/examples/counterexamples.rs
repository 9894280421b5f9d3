//! Instances just outside the convergence region where the target quantity
//! vanishes, so no multiplicative approximation of its logarithm exists.
//!
//! Run with a directory argument to also write both instances as problem
//! files: `cargo run --example counterexamples -- problems`.

use std::path::PathBuf;

use clusterx::oracle::{exact_expectation, exact_thermal_parts};
use clusterx::problem::{Problem, ProblemFile};
use clusterx::quantum::{expectation_conditions, ghz_counterexample, spin_conditions, thermal_counterexample};

fn main() -> clusterx::Result<()> {
    let (circuit, obs) = ghz_counterexample(2, 2)?;
    let conditions = expectation_conditions(&circuit, &obs);
    let value = exact_expectation(&circuit, &obs)?;
    println!("GHZ on 4 qubits, O_v = I + i tan(pi/8) Z");
    println!("  |O_v - I|     = {:.6}", obs.op(0).minus_identity().spectral_norm());
    println!(
        "  bound         = {:.6} (condition passes: {})",
        conditions.bound,
        conditions.passed()
    );
    println!("  <O> (exact)   = {:.3e}", value.norm());

    for delta in [1, 2, 5] {
        let (spin, psi) = thermal_counterexample(delta)?;
        let parts = exact_thermal_parts(&spin, &psi)?;
        println!(
            "thermal, Delta = {delta}: |beta| = {:.4} vs bound {:.4}, numerator = {:.3e}",
            spin.beta().norm(),
            spin_conditions(&spin).bound,
            parts.numerator.norm()
        );
    }

    if let Some(dir) = std::env::args().nth(1).map(PathBuf::from) {
        let (spin, psi) = thermal_counterexample(2)?;
        let files = [
            ("ghz_counterexample.json", Problem::Expectation(circuit, obs)),
            ("thermal_counterexample.json", Problem::Thermal(spin, psi)),
        ];
        for (name, problem) in files {
            let path = dir.join(name);
            std::fs::write(&path, ProblemFile::from_problem(&problem).to_json() + "\n")
                .map_err(|e| clusterx::Error::Validation(format!("{}: {e}", path.display())))?;
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}
