//! Exact reference values by brute force: full statevectors, dense
//! Hamiltonians, spin enumeration and subset enumeration.
//!
//! None of these touch the cluster engine. Every oracle checks its size guard
//! first and fails with [`Error::Guard`] instead of attempting exponential
//! work beyond desk scale.

use num_complex::Complex64;

use crate::classical::{HardCoreSpec, IsingSpec};
use crate::error::{Error, Result};
use crate::hypergraph::MultiHypergraph;
use crate::linalg::{embed, exp_hermitian, hermitian_eigenvalues, kron, Matrix, StateVector};
use crate::quantum::{CircuitSpec, ObservableMode, SpinSystemSpec, VertexObservables};

/// Largest statevector dimension for circuit oracles.
pub const STATE_DIM_LIMIT: usize = 1 << 20;
/// Largest Hilbert-space dimension for dense Hamiltonian oracles.
pub const DENSE_DIM_LIMIT: usize = 1 << 12;
/// Largest vertex count for Ising spin enumeration.
pub const ISING_VERTEX_LIMIT: usize = 20;
/// Largest vertex count for independent-set enumeration.
pub const INDEPENDENCE_VERTEX_LIMIT: usize = 24;

/// Statevector over all vertices of a graph, in declaration order.
pub type DenseState = StateVector;

fn total_dim(g: &MultiHypergraph, limit: usize) -> Result<usize> {
    g.dims()
        .iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d).filter(|&n| n <= limit))
        .ok_or_else(|| Error::Guard(format!("Hilbert-space dimension exceeds {limit}")))
}

/// `U_G |0…0⟩`, gates applied in increasing label order.
pub fn circuit_state(c: &CircuitSpec) -> Result<DenseState> {
    let g = c.graph();
    total_dim(g, STATE_DIM_LIMIT)?;
    let mut psi = StateVector::zero_on(g, (0..g.order()).collect());
    for gate in c.gates() {
        psi.apply(gate)?;
    }
    Ok(psi)
}

/// `⟨0…0| U_G |0…0⟩`.
pub fn exact_amplitude(c: &CircuitSpec) -> Result<Complex64> {
    Ok(circuit_state(c)?.amplitude(0))
}

/// `⟨ψ| ⊗_v O_v |ψ⟩` with `ψ = U_G |0…0⟩`.
pub fn exact_expectation(c: &CircuitSpec, obs: &VertexObservables) -> Result<Complex64> {
    obs.require(ObservableMode::Expectation)?;
    let psi = circuit_state(c)?;
    let mut phi = psi.clone();
    for op in obs.ops() {
        phi.apply(op)?;
    }
    Ok(psi.inner(&phi))
}

fn hamiltonian(s: &SpinSystemSpec) -> Result<Matrix> {
    let g = s.graph();
    let d = total_dim(g, DENSE_DIM_LIMIT)?;
    let order: Vec<usize> = (0..g.order()).collect();
    let dims = g.dims();
    let mut h = Matrix::zeros(d, d);
    for op in s.interactions() {
        h += embed(op.support(), op.matrix(), &order, &dims)?;
    }
    Ok(h)
}

/// Normalized `tr e^{−β H_G}`.
pub fn exact_partition(s: &SpinSystemSpec) -> Result<Complex64> {
    let h = hamiltonian(s)?;
    let d = h.nrows() as f64;
    let values = hermitian_eigenvalues(&h)?;
    let sum: Complex64 = values.iter().map(|&l| (-s.beta() * l).exp()).sum();
    Ok(sum / d)
}

/// Normalized numerator `tr[Ψ_G e^{−β H_G}]` and denominator
/// `tr[e^{−β H_G}]` of a thermal expectation value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalParts {
    pub numerator: Complex64,
    pub denominator: Complex64,
}

impl ThermalParts {
    pub fn ratio(&self) -> Result<Complex64> {
        if self.denominator == Complex64::new(0.0, 0.0) {
            return Err(Error::Numerical("partition function vanishes".into()));
        }
        Ok(self.numerator / self.denominator)
    }
}

pub fn exact_thermal_parts(s: &SpinSystemSpec, obs: &VertexObservables) -> Result<ThermalParts> {
    obs.require(ObservableMode::Thermal)?;
    let h = hamiltonian(s)?;
    let d = h.nrows() as f64;
    let e = exp_hermitian(&h, -s.beta())?;
    let denominator = e.trace() / d;
    let identity = obs.ops().iter().all(|op| {
        let m = op.matrix();
        *m == Matrix::identity(m.nrows(), m.ncols())
    });
    let numerator = if identity {
        denominator
    } else {
        let psi = obs
            .ops()
            .iter()
            .map(|op| op.matrix().clone())
            .fold(Matrix::identity(1, 1), |a, b| kron(&a, &b));
        (psi * e).trace() / d
    };
    Ok(ThermalParts { numerator, denominator })
}

/// `tr[Ψ_G e^{−β H_G}] / tr[e^{−β H_G}]`.
pub fn exact_thermal(s: &SpinSystemSpec, obs: &VertexObservables) -> Result<Complex64> {
    exact_thermal_parts(s, obs)?.ratio()
}

/// `Σ_σ e^{−β Σ_{uv} φ(uv) σ_u σ_v}` over all `2^{|V|}` spin assignments.
pub fn exact_ising_unnormalized(s: &IsingSpec) -> Result<Complex64> {
    let g = s.graph();
    let n = g.order();
    if n > ISING_VERTEX_LIMIT {
        return Err(Error::Guard(format!(
            "spin enumeration is limited to {ISING_VERTEX_LIMIT} vertices, got {n}"
        )));
    }
    let edges: Vec<(usize, usize, f64)> = g
        .edges()
        .iter()
        .zip(s.couplings())
        .map(|(e, &phi)| (e.vertices[0], e.vertices[1], phi))
        .collect();
    let mut total = Complex64::new(0.0, 0.0);
    for sigma in 0u64..(1u64 << n) {
        let energy: f64 = edges
            .iter()
            .map(
                |&(a, b, phi)| {
                    if (sigma >> a ^ sigma >> b) & 1 == 0 {
                        phi
                    } else {
                        -phi
                    }
                },
            )
            .sum();
        total += (-s.beta() * energy).exp();
    }
    Ok(total)
}

/// `2^{−|V|} Σ_σ e^{−β Σ φ σ σ'}`, equal to 1 at `β = 0`.
pub fn exact_ising(s: &IsingSpec) -> Result<Complex64> {
    Ok(exact_ising_unnormalized(s)? / 2f64.powi(s.graph().order() as i32))
}

/// `I(G; x) = Σ_{I independent} x^{|I|}`.
pub fn exact_independence_poly(h: &HardCoreSpec) -> Result<Complex64> {
    let n = h.graph().order();
    if n > INDEPENDENCE_VERTEX_LIMIT {
        return Err(Error::Guard(format!(
            "independent-set enumeration is limited to {INDEPENDENCE_VERTEX_LIMIT} vertices, got {n}"
        )));
    }
    let masks: Vec<u32> = (0..n)
        .map(|v| h.neighbours(v).iter().fold(0u32, |m, &u| m | 1 << u))
        .collect();
    // counts[k] = number of independent sets of size k.
    let mut counts = vec![0u64; n + 1];
    for set in 0u32..(1u32 << n) {
        let independent = (0..n).all(|v| set >> v & 1 == 0 || masks[v] & set == 0);
        if independent {
            counts[set.count_ones() as usize] += 1;
        }
    }
    let x = h.activity();
    // Horner from the top degree.
    Ok(counts
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c as f64))
}
