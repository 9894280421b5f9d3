//! Seeded random instances shared by the integration tests. Every generator
//! is deterministic in its seed.

#![allow(dead_code)]

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use clusterx::classical::{hardcore_conditions, ising_conditions, HardCoreSpec, IsingSpec};
use clusterx::hypergraph::MultiHypergraph;
use clusterx::linalg::{exp_hermitian, spectral_norm, Matrix};
use clusterx::quantum::{
    amplitude_conditions, expectation_conditions, spin_conditions, CircuitSpec, SpinSystemSpec, VertexObservables,
};

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random qubit multihypergraph on `n` vertices with up to `edges` edges,
/// degree at most `max_degree` and edge sizes in `2..=max_rank`. Parallel
/// edges are allowed. Labels are `1..`.
pub fn random_host(rng: &mut TestRng, n: usize, max_degree: usize, max_rank: usize, edges: usize) -> MultiHypergraph {
    let mut degree = vec![0usize; n];
    let mut list = Vec::new();
    for _ in 0..edges * 4 {
        if list.len() == edges {
            break;
        }
        let free: Vec<usize> = (0..n).filter(|&v| degree[v] < max_degree).collect();
        let size = rng.gen_range(2..=max_rank.max(2));
        if free.len() < size {
            break;
        }
        let mut chosen: Vec<usize> = free.choose_multiple(rng, size).copied().collect();
        chosen.sort_unstable();
        for &v in &chosen {
            degree[v] += 1;
        }
        list.push((list.len() as u64 + 1, chosen));
    }
    MultiHypergraph::qubits(n).build().unwrap().with_edges(list).unwrap()
}

/// As [`random_host`] with rank 2 and no parallel edges.
pub fn random_simple_graph(rng: &mut TestRng, n: usize, max_degree: usize, edges: usize) -> MultiHypergraph {
    let g = random_host(rng, n, max_degree, 2, edges);
    let mut seen = Vec::new();
    for e in g.edges() {
        if !seen.contains(&e.vertices) {
            seen.push(e.vertices.clone());
        }
    }
    let list = seen.into_iter().enumerate().map(|(i, vs)| (i as u64 + 1, vs)).collect();
    g.with_edges(list).unwrap()
}

fn random_complex(rng: &mut TestRng, dim: usize) -> Matrix {
    Matrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

/// Hermitian with spectral norm exactly 1.
pub fn random_hermitian(rng: &mut TestRng, dim: usize) -> Matrix {
    let a = random_complex(rng, dim);
    let h = (&a + a.adjoint()) * Complex64::new(0.5, 0.0);
    let norm = spectral_norm(&h).unwrap();
    h / Complex64::new(norm, 0.0)
}

/// Unitary `e^{−itH}` with `‖U − I‖ = distance` (at most 2).
pub fn random_unitary(rng: &mut TestRng, dim: usize, distance: f64) -> Matrix {
    let h = random_hermitian(rng, dim);
    let t = 2.0 * (distance / 2.0).asin();
    exp_hermitian(&h, Complex64::new(0.0, -t)).unwrap()
}

/// `I + distance · A / ‖A‖` for a random complex `A`.
pub fn random_near_identity(rng: &mut TestRng, dim: usize, distance: f64) -> Matrix {
    let a = random_complex(rng, dim);
    let norm = spectral_norm(&a).unwrap();
    Matrix::identity(dim, dim) + a * Complex64::new(distance / norm, 0.0)
}

/// `I + s·K` with `K` Hermitian, traceless and of norm 1, `s ∈ [0, 1)`:
/// positive semidefinite with normalized trace 1.
pub fn random_density(rng: &mut TestRng, dim: usize) -> Matrix {
    let h = random_hermitian(rng, dim);
    let shift = h.trace() / Complex64::new(dim as f64, 0.0);
    let k = h - Matrix::identity(dim, dim) * shift;
    let norm = spectral_norm(&k).unwrap();
    let s = rng.gen_range(0.0..1.0);
    Matrix::identity(dim, dim) + k * Complex64::new(s / norm, 0.0)
}

/// A complex number of modulus `fraction · bound · u` with `u ∈ (0.5, 1]`
/// and random phase.
pub fn random_parameter(rng: &mut TestRng, bound: f64, fraction: f64) -> Complex64 {
    let r = fraction * bound * rng.gen_range(0.5..=1.0);
    Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
}

pub fn random_size(rng: &mut TestRng, min: usize, max: usize) -> usize {
    rng.gen_range(min..=max)
}

pub fn random_hosted(rng: &mut TestRng, max_n: usize) -> MultiHypergraph {
    let n = rng.gen_range(3..=max_n);
    let edges = rng.gen_range(2..=n + 2);
    random_host(rng, n, 3, 3, edges)
}

/// Gates within `fraction` of the amplitude bound of `g`.
pub fn conditioned_circuit(rng: &mut TestRng, g: MultiHypergraph, fraction: f64) -> CircuitSpec {
    let identity = CircuitSpec::from_fn(g.clone(), |e| {
        Ok(Matrix::identity(1 << e.vertices.len(), 1 << e.vertices.len()))
    })
    .unwrap();
    let bound = amplitude_conditions(&identity).bound;
    let gates = g
        .edges()
        .iter()
        .map(|e| {
            let d = random_parameter(rng, bound, fraction).norm();
            random_unitary(rng, 1 << e.vertices.len(), d)
        })
        .collect();
    let c = CircuitSpec::new(g, gates).unwrap();
    assert!(amplitude_conditions(&c).passed());
    c
}

/// Arbitrary gates; observables within `fraction` of the causal bound.
pub fn conditioned_expectation(
    rng: &mut TestRng,
    g: MultiHypergraph,
    fraction: f64,
) -> (CircuitSpec, VertexObservables) {
    let gates = g
        .edges()
        .iter()
        .map(|e| {
            let d = rng.gen_range(0.0..2.0);
            random_unitary(rng, 1 << e.vertices.len(), d)
        })
        .collect();
    let c = CircuitSpec::new(g.clone(), gates).unwrap();
    let ones = VertexObservables::expectation(&g, vec![Matrix::identity(2, 2); g.order()]).unwrap();
    let bound = expectation_conditions(&c, &ones).bound;
    let ops = (0..g.order())
        .map(|_| {
            let d = random_parameter(rng, bound, fraction).norm();
            random_near_identity(rng, 2, d)
        })
        .collect();
    let obs = VertexObservables::expectation(&g, ops).unwrap();
    assert!(expectation_conditions(&c, &obs).passed());
    (c, obs)
}

/// Random norm-1 interactions with `|β|` within `fraction` of the bound.
pub fn conditioned_spin(rng: &mut TestRng, g: MultiHypergraph, fraction: f64) -> SpinSystemSpec {
    let interactions = g
        .edges()
        .iter()
        .map(|e| random_hermitian(rng, 1 << e.vertices.len()))
        .collect();
    let s = SpinSystemSpec::new(g, interactions, Complex64::new(0.0, 0.0)).unwrap();
    let beta = random_parameter(rng, spin_conditions(&s).bound, fraction);
    let s = s.with_beta(beta);
    assert!(spin_conditions(&s).passed());
    s
}

pub fn random_densities(rng: &mut TestRng, g: &MultiHypergraph) -> VertexObservables {
    let ops = (0..g.order()).map(|_| random_density(rng, 2)).collect();
    VertexObservables::thermal(g, ops).unwrap()
}

/// Couplings in `[−1, 1]`, `|β|` within `fraction` of the Ising bound.
pub fn conditioned_ising(rng: &mut TestRng, g: MultiHypergraph, fraction: f64) -> IsingSpec {
    let couplings = (0..g.size()).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    let s = IsingSpec::new(g, couplings, Complex64::new(0.0, 0.0)).unwrap();
    let beta = random_parameter(rng, ising_conditions(&s).bound, fraction);
    let s = s.with_beta(beta);
    assert!(ising_conditions(&s).passed());
    s
}

pub fn conditioned_hardcore(rng: &mut TestRng, g: MultiHypergraph, fraction: f64) -> HardCoreSpec {
    let probe = HardCoreSpec::new(g.clone(), Complex64::new(0.0, 0.0)).unwrap();
    let x = random_parameter(rng, hardcore_conditions(&probe).bound, fraction);
    let h = HardCoreSpec::new(g, x).unwrap();
    assert!(hardcore_conditions(&h).passed());
    h
}

/// Conditioned instances at 0.9 of their bound on random hosts with at most
/// `max_n` vertices, `Δ <= 3` and `r <= 3`.
pub const FRACTION: f64 = 0.9;

pub fn circuit_instance(rng: &mut TestRng, max_n: usize) -> CircuitSpec {
    let g = random_hosted(rng, max_n);
    conditioned_circuit(rng, g, FRACTION)
}

pub fn expectation_instance(rng: &mut TestRng, max_n: usize) -> (CircuitSpec, VertexObservables) {
    let g = random_hosted(rng, max_n);
    conditioned_expectation(rng, g, FRACTION)
}

pub fn spin_instance(rng: &mut TestRng, max_n: usize) -> SpinSystemSpec {
    let g = random_hosted(rng, max_n);
    conditioned_spin(rng, g, FRACTION)
}

pub fn thermal_instance(rng: &mut TestRng, max_n: usize) -> (SpinSystemSpec, VertexObservables) {
    let s = spin_instance(rng, max_n);
    let psi = random_densities(rng, s.graph());
    (s, psi)
}

pub fn ising_instance(rng: &mut TestRng, max_n: usize) -> IsingSpec {
    let n = rng.gen_range(3..=max_n);
    let g = random_host(rng, n, 3, 2, n + 2);
    conditioned_ising(rng, g, FRACTION)
}

pub fn hardcore_instance(rng: &mut TestRng, max_n: usize) -> HardCoreSpec {
    let n = rng.gen_range(3..=max_n);
    let g = random_simple_graph(rng, n, 3, n + 2);
    conditioned_hardcore(rng, g, FRACTION)
}
