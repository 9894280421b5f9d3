//! Instances where the quantity being approximated is exactly zero, just
//! outside the convergence region.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{CircuitSpec, SpinSystemSpec, VertexObservables};
use crate::error::{validation, Error, Result};
use crate::hypergraph::MultiHypergraph;
use crate::linalg::{identity_plus, kron, pauli_string, Matrix};

/// Largest GHZ instance the constructor will build; the oracle check needs
/// the full statevector.
const GHZ_QUBIT_LIMIT: usize = 16;

/// Depth-`d` circuit of `k`-qubit gates preparing `(|0…0⟩ + |1…1⟩)/√2` on
/// `k^d` qubits: the first gate applies a Hadamard to `q0` and fans it out to
/// `k − 1` fresh qubits, and every later layer fans each existing qubit out
/// to `k − 1` fresh ones.
pub fn ghz_circuit(k: usize, d: usize) -> Result<CircuitSpec> {
    if k < 2 || d < 1 {
        return Err(validation(format!(
            "GHZ construction needs k >= 2 and d >= 1, got k={k}, d={d}"
        )));
    }
    let n = k
        .checked_pow(d as u32)
        .filter(|&n| n <= GHZ_QUBIT_LIMIT)
        .ok_or_else(|| Error::Guard(format!("k^d exceeds {GHZ_QUBIT_LIMIT} qubits")))?;

    let mut builder = MultiHypergraph::qubits(n);
    let mut gates = Vec::new();
    let mut label = 1u64;
    let mut active = vec![0usize];
    let mut next_fresh = 1usize;
    let fan = fanout(k);
    for layer in 0..d {
        let mut grown = Vec::new();
        for &control in &active {
            let targets: Vec<usize> = (next_fresh..next_fresh + k - 1).collect();
            next_fresh += k - 1;
            let names: Vec<String> = std::iter::once(control)
                .chain(targets.iter().copied())
                .map(|q| format!("q{q}"))
                .collect();
            builder = builder.edge(label, names);
            label += 1;
            gates.push(if layer == 0 {
                let h = hadamard();
                let rest = Matrix::identity(1 << (k - 1), 1 << (k - 1));
                &fan * kron(&h, &rest)
            } else {
                fan.clone()
            });
            grown.push(control);
            grown.extend(targets);
        }
        active = grown;
    }
    CircuitSpec::new(builder.build()?, gates)
}

/// [`ghz_circuit`] with `O_v = I + i·tan(π/(2k^d))·Z` on every qubit; the
/// exact expectation of `⊗ O_v` is 0 while `‖O_v − I‖ = tan(π/(2k^d))`.
pub fn ghz_counterexample(k: usize, d: usize) -> Result<(CircuitSpec, VertexObservables)> {
    let circuit = ghz_circuit(k, d)?;
    let n = circuit.graph().order();
    let t = (PI / (2.0 * n as f64)).tan();
    let op = identity_plus(Complex64::new(0.0, t), "Z")?;
    let obs = VertexObservables::expectation(circuit.graph(), vec![op; n])?;
    Ok((circuit, obs))
}

/// Two qubits joined by `delta` parallel edges, each carrying
/// `¼(XX − YY − ZZ)`, at `β = iπ/Δ` with `Ψ(v) = 2|0⟩⟨0|`. The thermal
/// numerator `ntr[Ψ_G e^{−βH_G}]` vanishes.
pub fn thermal_counterexample(delta: usize) -> Result<(SpinSystemSpec, VertexObservables)> {
    if delta == 0 {
        return Err(validation("thermal counterexample needs at least one edge"));
    }
    let mut builder = MultiHypergraph::qubits(2);
    for l in 1..=delta as u64 {
        builder = builder.edge(l, ["q0", "q1"]);
    }
    let g = builder.build()?;
    let phi = (pauli_string("XX")? - pauli_string("YY")? - pauli_string("ZZ")?) * Complex64::new(0.25, 0.0);
    let beta = Complex64::new(0.0, PI / delta as f64);
    let spin = SpinSystemSpec::new(g.clone(), vec![phi; delta], beta)?;
    let mut psi = Matrix::zeros(2, 2);
    psi[(0, 0)] = Complex64::new(2.0, 0.0);
    let obs = VertexObservables::thermal(&g, vec![psi.clone(), psi])?;
    Ok((spin, obs))
}

fn hadamard() -> Matrix {
    let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    Matrix::from_row_slice(2, 2, &[s, s, s, -s])
}

// |c, t⟩ ↦ |c, t ⊕ c…c⟩ with the control as the most significant qubit.
fn fanout(k: usize) -> Matrix {
    let dim = 1usize << k;
    let mask = (1usize << (k - 1)) - 1;
    let mut m = Matrix::zeros(dim, dim);
    for i in 0..dim {
        let control = i >> (k - 1);
        let out = if control == 1 { i ^ mask } else { i };
        m[(out, i)] = Complex64::new(1.0, 0.0);
    }
    m
}
