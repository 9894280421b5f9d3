//! Normalized partition function `tr e^{-βH} / d^n` of a Heisenberg-type
//! three-body chain at complex inverse temperature.

use num_complex::Complex64;

use clusterx::hypergraph::MultiHypergraph;
use clusterx::linalg::pauli_string;
use clusterx::oracle::exact_partition;
use clusterx::quantum::{approximate_partition, spin_conditions, SpinSystemSpec};
use clusterx::report::{relative_error, ApproxOptions};

fn main() -> clusterx::Result<()> {
    let graph = MultiHypergraph::qubits(5)
        .edge(1, ["q0", "q1", "q2"])
        .edge(2, ["q2", "q3"])
        .edge(3, ["q3", "q4", "q0"])
        .build()?;
    let spin = SpinSystemSpec::from_fn(graph, Complex64::new(0.0, 0.0), |e| {
        let s = if e.vertices.len() == 3 { "XZX" } else { "ZZ" };
        pauli_string(s)
    })?;
    let bound = spin_conditions(&spin).bound;
    let spin = spin.with_beta(Complex64::from_polar(0.9 * bound, 0.7));
    println!("|beta| = {:.6} (bound {bound:.6})", spin.beta().norm());

    for epsilon in [1e-2, 1e-3] {
        let (z, report) = approximate_partition(&spin, &ApproxOptions::new(epsilon))?;
        let exact = exact_partition(&spin)?;
        println!(
            "eps = {epsilon:.0e}: m = {}, Z = {z:.12}, relative error = {:.2e}",
            report.truncation_order.unwrap_or(0),
            relative_error(z, exact)
        );
    }
    Ok(())
}
