//! Expectation value of a product observable after a brickwork circuit. The
//! expansion runs on the causal intersection hypergraph, whose edges are the
//! causal cones of the vertices.

use num_complex::Complex64;

use clusterx::hypergraph::{causal_cone, causal_intersection_hypergraph, MultiHypergraph};
use clusterx::linalg::{identity_plus, pauli_rotation};
use clusterx::oracle::exact_expectation;
use clusterx::quantum::{approximate_expectation, expectation_conditions, CircuitSpec, VertexObservables};
use clusterx::report::{relative_error, ApproxOptions};

fn main() -> clusterx::Result<()> {
    let graph = MultiHypergraph::qubits(5)
        .edge(1, ["q0", "q1"])
        .edge(2, ["q2", "q3"])
        .edge(3, ["q1", "q2"])
        .edge(4, ["q3", "q4"])
        .build()?;
    let circuit = CircuitSpec::from_fn(graph.clone(), |e| pauli_rotation(0.3 + 0.1 * e.label as f64, "XY"))?;

    for v in ["q0", "q2", "q4"] {
        let cone = causal_cone(&graph, v)?;
        println!(
            "cone of {v}: edges {:?}, {} vertices",
            cone.edges.labels(&graph),
            cone.vertices.len()
        );
    }
    let host = causal_intersection_hypergraph(&graph);
    println!(
        "causal intersection hypergraph: degree {}, rank {}",
        host.max_degree(),
        host.rank()
    );

    let ops = (0..5)
        .map(|v| identity_plus(Complex64::new(0.0, 0.0003 * (v + 1) as f64), "Z"))
        .collect::<clusterx::Result<Vec<_>>>()?;
    let obs = VertexObservables::expectation(&graph, ops)?;
    println!(
        "condition satisfied: {}",
        expectation_conditions(&circuit, &obs).passed()
    );

    let (value, report) = approximate_expectation(&circuit, &obs, &ApproxOptions::new(1e-6))?;
    let exact = exact_expectation(&circuit, &obs)?;
    println!(
        "m = {}: <O> = {value:.10}, exact = {exact:.10}, relative error = {:.2e}",
        report.truncation_order.unwrap_or(0),
        relative_error(value, exact)
    );
    Ok(())
}
