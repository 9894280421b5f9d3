//! Polymer weights of the four quantum problems. Every computation lives on
//! the space of the polymer's own vertices.

use std::collections::HashMap;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{CircuitSpec, ObservableMode, SpinSystemSpec, VertexObservables};
use crate::error::{validation, Result};
use crate::hypergraph::{causal_cone_of_set, EdgeSubset, MultiHypergraph};
use crate::linalg::{embed, exp_hermitian, hermitian_eigenvalues, kron, Matrix, StateVector};
use crate::polymer::SubgraphWeight;

/// `⟨0|∏_{e∈γ} (U_e − I)|0⟩` with the smallest label acting first.
pub fn amplitude_weight(c: &CircuitSpec, gamma: &EdgeSubset) -> Result<Complex64> {
    let g = c.graph();
    gamma.validate_against(g)?;
    let mut state = StateVector::zero_on(g, gamma.vertex_set(g));
    for &e in gamma.positions() {
        state.apply_minus_identity(c.gate(e))?;
    }
    Ok(state.amplitude(0))
}

/// For a polymer `γ` of the causal intersection hypergraph, whose edge
/// positions are a vertex set `W` of the circuit graph:
/// `⟨ψ|∏_{v∈W} (O_v − I)|ψ⟩` with `ψ = U_{C_W}|0⟩` on the vertices of the
/// joint causal cone `C_W`.
pub fn expectation_weight(c: &CircuitSpec, obs: &VertexObservables, gamma: &EdgeSubset) -> Result<Complex64> {
    obs.require(ObservableMode::Expectation)?;
    let g = c.graph();
    if gamma.positions().last().is_some_and(|&v| v >= g.order()) {
        return Err(validation(
            "polymer does not belong to the causal intersection hypergraph",
        ));
    }
    let roots = gamma.positions();
    let (cone, vertices) = causal_cone_of_set(g, roots);
    let mut psi = StateVector::zero_on(g, vertices);
    for &e in cone.positions() {
        psi.apply(c.gate(e))?;
    }
    let mut phi = psi.clone();
    for &v in roots {
        phi.apply_minus_identity(obs.op(v))?;
    }
    Ok(psi.inner(&phi))
}

/// `Σ_{T⊆γ} (−1)^{‖γ‖−|T|} ntr[e^{−β H_T}]` over the vertices of `γ`.
pub fn partition_weight(s: &SpinSystemSpec, gamma: &EdgeSubset) -> Result<Complex64> {
    SpinWeights::partition(s).weight(gamma)
}

/// As [`partition_weight`] with `⊗_{v∈V(γ)} Ψ(v)` inside the normalized
/// trace.
pub fn thermal_weight(s: &SpinSystemSpec, obs: &VertexObservables, gamma: &EdgeSubset) -> Result<Complex64> {
    SpinWeights::thermal(s, obs).weight(gamma)
}

pub struct AmplitudeWeights<'a> {
    circuit: &'a CircuitSpec,
}

impl<'a> AmplitudeWeights<'a> {
    pub fn new(circuit: &'a CircuitSpec) -> Self {
        AmplitudeWeights { circuit }
    }
}

impl SubgraphWeight for AmplitudeWeights<'_> {
    fn weight(&self, polymer: &EdgeSubset) -> Result<Complex64> {
        amplitude_weight(self.circuit, polymer)
    }
}

pub struct ExpectationWeights<'a> {
    circuit: &'a CircuitSpec,
    obs: &'a VertexObservables,
}

impl<'a> ExpectationWeights<'a> {
    pub fn new(circuit: &'a CircuitSpec, obs: &'a VertexObservables) -> Self {
        ExpectationWeights { circuit, obs }
    }
}

impl SubgraphWeight for ExpectationWeights<'_> {
    fn weight(&self, polymer: &EdgeSubset) -> Result<Complex64> {
        expectation_weight(self.circuit, self.obs, polymer)
    }
}

/// Partition (`psi = None`) or thermal-numerator weights.
///
/// The normalized trace over `V(γ)` of `Ψ e^{−β H_T}` factorizes over the
/// connected components of `T` (vertices outside `T` contribute
/// `ntr Ψ(v) = 1`), so a weight only needs one exponential per connected
/// edge subset. Batch evaluation computes those factors once per polymer of
/// the batch and reuses them across all weights.
pub struct SpinWeights<'a> {
    system: &'a SpinSystemSpec,
    psi: Option<&'a VertexObservables>,
}

impl<'a> SpinWeights<'a> {
    pub fn partition(system: &'a SpinSystemSpec) -> Self {
        SpinWeights { system, psi: None }
    }

    pub fn thermal(system: &'a SpinSystemSpec, psi: &'a VertexObservables) -> Self {
        SpinWeights { system, psi: Some(psi) }
    }

    /// `ntr[Ψ_{V(C)} e^{−β H_C}]` for a connected edge subset `C`.
    pub fn component_factor(&self, c: &EdgeSubset) -> Result<Complex64> {
        let g = self.system.graph();
        let order = c.vertex_set(g);
        let dims: Vec<usize> = order.iter().map(|&v| g.dim(v)).collect();
        let d: usize = dims.iter().product();
        let mut h = Matrix::zeros(d, d);
        for &e in c.positions() {
            let op = self.system.interaction(e);
            h += embed(op.support(), op.matrix(), &order, &dims)?;
        }
        let beta = self.system.beta();
        let scale = d as f64;
        // Ψ equal to the identity on V(C) contributes nothing; taking the
        // partition path keeps thermal and partition weights bit-identical.
        let psi = self.psi.filter(|obs| {
            !order.iter().all(|&v| {
                let m = obs.op(v).matrix();
                *m == Matrix::identity(m.nrows(), m.ncols())
            })
        });
        match psi {
            None => {
                let values = hermitian_eigenvalues(&h)?;
                let sum: Complex64 = values.iter().map(|&l| (-beta * l).exp()).sum();
                Ok(sum / scale)
            }
            Some(obs) => {
                let e = exp_hermitian(&h, -beta)?;
                let psi = order
                    .iter()
                    .map(|&v| obs.op(v).matrix().clone())
                    .reduce(|a, b| kron(&a, &b))
                    .expect("a component has vertices");
                Ok((psi * e).trace() / scale)
            }
        }
    }

    fn validate(&self, gamma: &EdgeSubset) -> Result<()> {
        if let Some(obs) = self.psi {
            obs.require(ObservableMode::Thermal)?;
        }
        gamma.validate_against(self.system.graph())
    }
}

impl SubgraphWeight for SpinWeights<'_> {
    fn weight(&self, polymer: &EdgeSubset) -> Result<Complex64> {
        self.validate(polymer)?;
        let mut cache: HashMap<EdgeSubset, Complex64> = HashMap::new();
        inclusion_exclusion(self.system.graph(), polymer, |c| {
            if let Some(&f) = cache.get(c) {
                return Ok(f);
            }
            let f = self.component_factor(c)?;
            cache.insert(c.clone(), f);
            Ok(f)
        })
    }

    fn weights(&self, polymers: &[EdgeSubset]) -> Result<Vec<Complex64>> {
        for p in polymers {
            self.validate(p)?;
        }
        let factors: HashMap<&EdgeSubset, Complex64> = polymers
            .par_iter()
            .map(|p| Ok((p, self.component_factor(p)?)))
            .collect::<Result<_>>()?;
        polymers
            .par_iter()
            .map(|p| {
                inclusion_exclusion(self.system.graph(), p, |c| match factors.get(c) {
                    Some(&f) => Ok(f),
                    None => self.component_factor(c),
                })
            })
            .collect()
    }
}

// Σ_{T⊆γ} (−1)^{|γ|−|T|} ∏_{components C of T} factor(C).
fn inclusion_exclusion(
    g: &MultiHypergraph,
    gamma: &EdgeSubset,
    mut factor: impl FnMut(&EdgeSubset) -> Result<Complex64>,
) -> Result<Complex64> {
    let edges = gamma.positions();
    let k = edges.len();
    if k > 30 {
        return Err(validation(format!("polymer with {k} edges is too large to weigh")));
    }
    let vertices = gamma.vertex_set(g);
    let local: Vec<Vec<usize>> = edges
        .iter()
        .map(|&e| {
            g.edge(e)
                .vertices
                .iter()
                .map(|v| vertices.binary_search(v).expect("edge vertex in V(γ)"))
                .collect()
        })
        .collect();

    let mut total = Complex64::new(0.0, 0.0);
    let mut parent = vec![0usize; vertices.len()];
    for mask in 0u32..(1u32 << k) {
        for (i, p) in parent.iter_mut().enumerate() {
            *p = i;
        }
        for (j, vs) in local.iter().enumerate() {
            if mask >> j & 1 == 1 {
                let r0 = find(&mut parent, vs[0]);
                for &v in &vs[1..] {
                    let r = find(&mut parent, v);
                    if r != r0 {
                        parent[r] = r0;
                    }
                }
            }
        }
        let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
        for (j, vs) in local.iter().enumerate() {
            if mask >> j & 1 == 1 {
                let r = find(&mut parent, vs[0]);
                match groups.iter_mut().find(|(root, _)| *root == r) {
                    Some((_, list)) => list.push(edges[j]),
                    None => groups.push((r, vec![edges[j]])),
                }
            }
        }
        let mut term = Complex64::new(1.0, 0.0);
        for (_, list) in groups {
            term *= factor(&EdgeSubset::new(list))?;
        }
        if (k - mask.count_ones() as usize) % 2 == 1 {
            total -= term;
        } else {
            total += term;
        }
    }
    Ok(total)
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}
