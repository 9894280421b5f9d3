//! `⟨0|U|0⟩` for a ring of small two-qubit rotations, by the truncated
//! cluster expansion and by statevector simulation.

use clusterx::hypergraph::MultiHypergraph;
use clusterx::linalg::pauli_rotation;
use clusterx::oracle::exact_amplitude;
use clusterx::quantum::{amplitude_conditions, approximate_amplitude, CircuitSpec};
use clusterx::report::{relative_error, ApproxOptions};

fn main() -> clusterx::Result<()> {
    let n = 6;
    let edges = (0..n).map(|i| (i as u64 + 1, vec![i, (i + 1) % n])).collect();
    let graph = MultiHypergraph::qubits(n).build()?.with_edges(edges)?;
    let circuit = CircuitSpec::from_fn(graph, |e| {
        let pauli = if e.label % 2 == 0 { "XY" } else { "XX" };
        pauli_rotation(0.004 * e.label as f64, pauli)
    })?;

    let conditions = amplitude_conditions(&circuit);
    println!(
        "bound 1/(e^3 D C(r,2)) = {:.6}, satisfied: {}",
        conditions.bound,
        conditions.passed()
    );

    for epsilon in [1e-2, 1e-4, 1e-6] {
        let (value, report) = approximate_amplitude(&circuit, &ApproxOptions::new(epsilon))?;
        let exact = exact_amplitude(&circuit)?;
        println!(
            "eps = {epsilon:.0e}: m = {:2}, value = {value:.12}, relative error = {:.2e}",
            report.truncation_order.unwrap_or(0),
            relative_error(value, exact)
        );
    }
    Ok(())
}
