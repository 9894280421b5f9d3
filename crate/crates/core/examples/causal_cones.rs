//! Causal cones of a depth-2 GHZ circuit and the degree and rank of its
//! causal intersection hypergraph, which stay below `k^d`.

use clusterx::hypergraph::{causal_cone, causal_intersection_hypergraph};
use clusterx::quantum::ghz_circuit;

fn main() -> clusterx::Result<()> {
    for (k, d) in [(2, 1), (2, 2), (2, 3), (3, 2)] {
        let circuit = ghz_circuit(k, d)?;
        let g = circuit.graph();
        let host = causal_intersection_hypergraph(g);
        println!(
            "k = {k}, d = {d}: {} qubits, cone hypergraph degree {}, rank {} (k^d = {})",
            g.order(),
            host.max_degree(),
            host.rank(),
            k.pow(d as u32)
        );
    }
    let circuit = ghz_circuit(2, 2)?;
    for v in ["q0", "q1", "q2", "q3"] {
        let cone = causal_cone(circuit.graph(), v)?;
        println!("cone of {v}: gates {:?}", cone.edges.labels(circuit.graph()));
    }
    Ok(())
}
