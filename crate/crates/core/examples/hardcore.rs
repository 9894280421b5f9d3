//! The hard-core model: polymers are single vertices, so this exercises the
//! expansion engine on a model that is not built from edge subsets.

use num_complex::Complex64;

use clusterx::classical::{approximate_hardcore, hardcore_conditions, hardcore_universe, HardCoreSpec};
use clusterx::hypergraph::MultiHypergraph;
use clusterx::oracle::exact_independence_poly;
use clusterx::polymer::{brute_force_z, truncated_expansion};
use clusterx::report::{relative_error, ApproxOptions};

fn main() -> clusterx::Result<()> {
    let path = MultiHypergraph::qubits(3)
        .edge(1, ["q0", "q1"])
        .edge(2, ["q1", "q2"])
        .build()?;
    let x = Complex64::new(0.01, 0.0);
    let p3 = HardCoreSpec::new(path, x)?;
    let u = hardcore_universe(&p3);
    println!("I(P3; x) by compatible sets: {:.6}", brute_force_z(&u, 1)?);
    for m in [2, 4, 6] {
        println!(
            "T_{m} = {:.12}  (log I = {:.12})",
            truncated_expansion(&u, m)?,
            1.0301f64.ln()
        );
    }

    let edges = (0..8).map(|i| (i as u64 + 1, vec![i, (i + 1) % 8])).collect();
    let ring = MultiHypergraph::qubits(8).build()?.with_edges(edges)?;
    let h = HardCoreSpec::new(ring, Complex64::new(0.004, 0.003))?;
    println!("C8 bound on |x|: {:.6}", hardcore_conditions(&h).bound);
    let (z, _) = approximate_hardcore(&h, &ApproxOptions::new(1e-6))?;
    let exact = exact_independence_poly(&h)?;
    println!(
        "I(C8; x) = {z:.12}, exact {exact:.12}, relative error {:.1e}",
        relative_error(z, exact)
    );
    Ok(())
}
