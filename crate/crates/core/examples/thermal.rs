//! Thermal expectation value `tr[Ψ e^{-βH}] / tr[e^{-βH}]` as the ratio of
//! two cluster expansions, each run at half the error budget.

use num_complex::Complex64;

use clusterx::hypergraph::MultiHypergraph;
use clusterx::linalg::{pauli_string, Matrix};
use clusterx::oracle::exact_thermal;
use clusterx::quantum::{approximate_thermal, SpinSystemSpec, VertexObservables};
use clusterx::report::{relative_error, ApproxOptions};

fn main() -> clusterx::Result<()> {
    let graph = MultiHypergraph::qubits(4)
        .edge(1, ["q0", "q1"])
        .edge(2, ["q1", "q2"])
        .edge(3, ["q2", "q3"])
        .edge(4, ["q3", "q0"])
        .build()?;
    let h = (pauli_string("XX")? + pauli_string("YY")? + pauli_string("ZZ")?) * Complex64::new(0.3, 0.0);
    let spin = SpinSystemSpec::from_fn(graph.clone(), Complex64::new(0.008, 0.002), |_| Ok(h.clone()))?;

    // Ψ(v) = diag(1 + t, 1 − t) has normalized trace 1.
    let psi = (0..4)
        .map(|v| {
            let t = 0.2 * v as f64;
            let mut m = Matrix::zeros(2, 2);
            m[(0, 0)] = Complex64::new(1.0 + t, 0.0);
            m[(1, 1)] = Complex64::new(1.0 - t, 0.0);
            m
        })
        .collect();
    let obs = VertexObservables::thermal(&graph, psi)?;

    let (value, report) = approximate_thermal(&spin, &obs, &ApproxOptions::new(1e-4))?;
    let exact = exact_thermal(&spin, &obs)?;
    println!(
        "m = {}: <Psi> = {value:.12}, exact = {exact:.12}, relative error = {:.2e}",
        report.truncation_order.unwrap_or(0),
        relative_error(value, exact)
    );
    Ok(())
}
