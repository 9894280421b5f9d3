//! Ursell functions of small graphs, by spanning connected subsets and by
//! the Tutte polynomial at (1, 0), and the multiset form used for clusters.

use clusterx::polymer::{multiset_phi_hat, ursell_by_subsets, ursell_by_tutte, IncompatibilityGraph};

fn main() -> clusterx::Result<()> {
    let graphs = [
        ("one node", IncompatibilityGraph::complete(1)),
        ("K2", IncompatibilityGraph::complete(2)),
        ("K3", IncompatibilityGraph::complete(3)),
        ("P3", IncompatibilityGraph::path(3)),
        ("C4", IncompatibilityGraph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0)])?),
        ("K5", IncompatibilityGraph::complete(5)),
    ];
    for (name, h) in &graphs {
        let a = ursell_by_subsets(h)?;
        let b = ursell_by_tutte(h)?;
        println!("{name:>8}: phi = {a} (Tutte route {b})");
    }
    // Two incompatible polymers taken twice and once.
    let hat = multiset_phi_hat(&IncompatibilityGraph::complete(2), &[2, 1])?;
    println!("phi_hat of the cluster {{g1: 2, g2: 1}} = {hat}");
    Ok(())
}
