//! Connected edge subsets through a vertex, counted by size and compared
//! with the bound `(e Δ (r − 1))^m / 2`.

use std::f64::consts::E;

use clusterx::hypergraph::{enumerate_connected_subgraphs, MultiHypergraph};

fn main() -> clusterx::Result<()> {
    let g = MultiHypergraph::qubits(6)
        .edge(1, ["q0", "q1", "q2"])
        .edge(2, ["q2", "q3"])
        .edge(3, ["q3", "q4", "q5"])
        .edge(4, ["q5", "q0"])
        .edge(5, ["q1", "q4"])
        .build()?;
    let (delta, r) = (g.max_degree() as f64, g.rank() as f64);
    for m in 1..=5 {
        let all = enumerate_connected_subgraphs(&g, "q0", m)?;
        let exact = all.iter().filter(|s| s.len() == m).count();
        let bound = (E * delta * (r - 1.0)).powi(m as i32) / 2.0;
        println!("m = {m}: {exact:3} subsets of size m through q0, bound {bound:.0}");
    }
    Ok(())
}
