//! Ising partition functions at complex inverse temperature: the polymer
//! approximation, the thickening identity and the link to circuit
//! amplitudes of `XX` rotations.

use num_complex::Complex64;

use clusterx::classical::{approximate_ising, thickening_identity_check, IsingSpec};
use clusterx::hypergraph::MultiHypergraph;
use clusterx::linalg::pauli_rotation;
use clusterx::oracle::{exact_amplitude, exact_ising, exact_ising_unnormalized};
use clusterx::quantum::CircuitSpec;
use clusterx::report::{relative_error, ApproxOptions};

fn main() -> clusterx::Result<()> {
    let edges = (0..6).map(|i| (i as u64 + 1, vec![i, (i + 1) % 6])).collect();
    let cycle = MultiHypergraph::qubits(6).build()?.with_edges(edges)?;

    let spin = IsingSpec::uniform(cycle.clone(), Complex64::new(0.005, 0.0))?;
    let (z, report) = approximate_ising(&spin, &ApproxOptions::new(1e-4))?;
    let exact = exact_ising(&spin)?;
    println!(
        "C6, beta = 0.005: Z = {z:.12}, exact {exact:.12}, relative error {:.1e}",
        relative_error(z, exact)
    );
    println!("  unnormalized value {:?}", report.unnormalized_value);

    let theta = 0.7;
    let rotated = IsingSpec::uniform(cycle.clone(), Complex64::new(0.0, theta))?;
    for k in 1..=3 {
        let r = thickening_identity_check(&rotated, k)?;
        println!(
            "thickening k = {k}: |Z(G; i theta) - Z(G_k; i theta / k)| = {:.1e}",
            r.difference
        );
    }

    let circuit = CircuitSpec::from_fn(cycle, |_| pauli_rotation(theta, "XX"))?;
    let amplitude = exact_amplitude(&circuit)?;
    let z = exact_ising_unnormalized(&rotated)?;
    println!("2^6 * amplitude = {:.12}, Z(i theta) = {z:.12}", amplitude * 64.0);
    Ok(())
}
