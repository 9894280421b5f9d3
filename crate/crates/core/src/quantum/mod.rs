//! Quantum problems on multihypergraphs: circuit amplitudes, circuit
//! expectation values of product observables, partition functions of local
//! Hamiltonians and thermal expectation values of product operators.
//!
//! Each problem is mapped to a [`SubgraphUniverse`] whose polymer weights
//! come from [`weights`], then handed to the cluster-expansion engine. Gates
//! act in increasing label order: the smallest label is the rightmost factor
//! of `U_G` and acts on the ket first.

mod counterexamples;
pub mod weights;

use num_complex::Complex64;

use crate::error::{validation, Result};
use crate::hypergraph::{causal_intersection_hypergraph, Edge, MultiHypergraph};
use crate::linalg::{LocalOperator, Matrix, ADMISSION_TOL};
use crate::polymer::SubgraphUniverse;
use crate::report::{
    circuit_bound, pair, run_cluster, spin_bound, ApproxOptions, ApproximationReport, ConditionItem, ConditionReport,
};

pub use counterexamples::{ghz_circuit, ghz_counterexample, thermal_counterexample};
pub use weights::{
    amplitude_weight, expectation_weight, partition_weight, thermal_weight, AmplitudeWeights, ExpectationWeights,
    SpinWeights,
};

/// A gate on every edge; gate `i` acts on the vertices of edge position `i`
/// in their declared order.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitSpec {
    graph: MultiHypergraph,
    gates: Vec<LocalOperator>,
}

impl CircuitSpec {
    /// `gates[i]` belongs to edge position `i`; every gate must be unitary.
    pub fn new(graph: MultiHypergraph, gates: Vec<Matrix>) -> Result<Self> {
        let gates = edge_operators(&graph, gates, "gate")?;
        for (op, e) in gates.iter().zip(graph.edges()) {
            if !op.is_unitary(ADMISSION_TOL) {
                return Err(validation(format!("gate on edge {} is not unitary", e.label)));
            }
        }
        Ok(CircuitSpec { graph, gates })
    }

    /// Builds each gate from its edge.
    pub fn from_fn(graph: MultiHypergraph, f: impl Fn(&Edge) -> Result<Matrix>) -> Result<Self> {
        let gates = graph.edges().iter().map(f).collect::<Result<Vec<_>>>()?;
        CircuitSpec::new(graph, gates)
    }

    pub fn graph(&self) -> &MultiHypergraph {
        &self.graph
    }

    pub fn gates(&self) -> &[LocalOperator] {
        &self.gates
    }

    pub fn gate(&self, position: usize) -> &LocalOperator {
        &self.gates[position]
    }
}

/// A self-adjoint interaction of norm at most 1 on every edge, and a complex
/// inverse temperature.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinSystemSpec {
    graph: MultiHypergraph,
    interactions: Vec<LocalOperator>,
    beta: Complex64,
}

impl SpinSystemSpec {
    pub fn new(graph: MultiHypergraph, interactions: Vec<Matrix>, beta: Complex64) -> Result<Self> {
        let interactions = edge_operators(&graph, interactions, "interaction")?;
        for (op, e) in interactions.iter().zip(graph.edges()) {
            if !op.is_self_adjoint(ADMISSION_TOL) {
                return Err(validation(format!(
                    "interaction on edge {} is not self-adjoint",
                    e.label
                )));
            }
            let norm = op.spectral_norm();
            if norm > 1.0 + ADMISSION_TOL {
                return Err(validation(format!(
                    "interaction on edge {} has norm {norm} > 1",
                    e.label
                )));
            }
        }
        if !(beta.re.is_finite() && beta.im.is_finite()) {
            return Err(validation("beta must be finite"));
        }
        Ok(SpinSystemSpec {
            graph,
            interactions,
            beta,
        })
    }

    pub fn from_fn(graph: MultiHypergraph, beta: Complex64, f: impl Fn(&Edge) -> Result<Matrix>) -> Result<Self> {
        let ops = graph.edges().iter().map(f).collect::<Result<Vec<_>>>()?;
        SpinSystemSpec::new(graph, ops, beta)
    }

    pub fn graph(&self) -> &MultiHypergraph {
        &self.graph
    }

    pub fn interactions(&self) -> &[LocalOperator] {
        &self.interactions
    }

    pub fn interaction(&self, position: usize) -> &LocalOperator {
        &self.interactions[position]
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    pub fn with_beta(&self, beta: Complex64) -> Self {
        SpinSystemSpec { beta, ..self.clone() }
    }
}

fn edge_operators(g: &MultiHypergraph, ms: Vec<Matrix>, what: &str) -> Result<Vec<LocalOperator>> {
    if ms.len() != g.size() {
        return Err(validation(format!("{} {what}s given for {} edges", ms.len(), g.size())));
    }
    ms.into_iter()
        .zip(g.edges())
        .map(|(m, e)| {
            LocalOperator::new(g, e.vertices.clone(), m)
                .map_err(|err| validation(format!("{what} on edge {}: {err}", e.label)))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObservableMode {
    /// Arbitrary single-vertex operators `O_v`; the product `⊗ O_v` is
    /// measured.
    Expectation,
    /// Positive-semidefinite `Ψ(v)` with normalized trace 1.
    Thermal,
}

/// One single-vertex operator per vertex of the graph.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexObservables {
    mode: ObservableMode,
    ops: Vec<LocalOperator>,
}

impl VertexObservables {
    /// `ops[v]` acts on vertex index `v`. Expectation mode does not require
    /// self-adjointness; thermal mode requires PSD with normalized trace 1.
    pub fn new(g: &MultiHypergraph, mode: ObservableMode, ops: Vec<Matrix>) -> Result<Self> {
        if ops.len() != g.order() {
            return Err(validation(format!(
                "{} vertex operators given for {} vertices",
                ops.len(),
                g.order()
            )));
        }
        let ops = ops
            .into_iter()
            .enumerate()
            .map(|(v, m)| {
                let id = &g.vertices()[v].id;
                let op = LocalOperator::new(g, vec![v], m)
                    .map_err(|err| validation(format!("operator on vertex `{id}`: {err}")))?;
                if mode == ObservableMode::Thermal {
                    if !op.is_psd(ADMISSION_TOL) {
                        return Err(validation(format!(
                            "operator on vertex `{id}` is not positive semidefinite"
                        )));
                    }
                    let ntr = op.normalized_trace();
                    if (ntr - Complex64::new(1.0, 0.0)).norm() > ADMISSION_TOL {
                        return Err(validation(format!(
                            "operator on vertex `{id}` has normalized trace {ntr}, expected 1"
                        )));
                    }
                }
                Ok(op)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(VertexObservables { mode, ops })
    }

    pub fn expectation(g: &MultiHypergraph, ops: Vec<Matrix>) -> Result<Self> {
        VertexObservables::new(g, ObservableMode::Expectation, ops)
    }

    pub fn thermal(g: &MultiHypergraph, ops: Vec<Matrix>) -> Result<Self> {
        VertexObservables::new(g, ObservableMode::Thermal, ops)
    }

    /// Identity on every vertex.
    pub fn identity(g: &MultiHypergraph, mode: ObservableMode) -> Self {
        let ops = (0..g.order()).map(|v| Matrix::identity(g.dim(v), g.dim(v))).collect();
        VertexObservables::new(g, mode, ops).expect("identities are admissible")
    }

    pub fn mode(&self) -> ObservableMode {
        self.mode
    }

    pub fn ops(&self) -> &[LocalOperator] {
        &self.ops
    }

    pub fn op(&self, v: usize) -> &LocalOperator {
        &self.ops[v]
    }

    pub(crate) fn require(&self, mode: ObservableMode) -> Result<()> {
        if self.mode == mode {
            Ok(())
        } else {
            Err(validation(format!(
                "{mode:?} observables required, got {:?}",
                self.mode
            )))
        }
    }
}

/// `‖U_e − I‖ <= 1/(e^3 Δ C(r,2))` for every gate, with Δ and r of the
/// circuit graph.
pub fn amplitude_conditions(c: &CircuitSpec) -> ConditionReport {
    let g = c.graph();
    let bound = circuit_bound(g.max_degree(), g.rank());
    let items = c
        .gates()
        .iter()
        .zip(g.edges())
        .map(|(op, e)| {
            ConditionItem::at_most(
                format!("gate {}: |U - I|", e.label),
                op.minus_identity().spectral_norm(),
                bound,
            )
        })
        .collect();
    ConditionReport {
        host: "circuit graph".into(),
        max_degree: g.max_degree(),
        rank: g.rank(),
        bound,
        items,
    }
}

/// `‖O_v − I‖ <= 1/(e^3 Δ C(r,2))` for every vertex, with Δ and r of the
/// causal intersection hypergraph.
pub fn expectation_conditions(c: &CircuitSpec, obs: &VertexObservables) -> ConditionReport {
    let g = c.graph();
    let cg = causal_intersection_hypergraph(g);
    let bound = circuit_bound(cg.max_degree(), cg.rank());
    let items = obs
        .ops()
        .iter()
        .zip(g.vertices())
        .map(|(op, v)| {
            ConditionItem::at_most(
                format!("vertex {}: |O - I|", v.id),
                op.minus_identity().spectral_norm(),
                bound,
            )
        })
        .collect();
    ConditionReport {
        host: "causal intersection hypergraph".into(),
        max_degree: cg.max_degree(),
        rank: cg.rank(),
        bound,
        items,
    }
}

/// `|β| <= 1/(e^4 Δ C(r,2))`; shared by partition functions and thermal
/// expectation values.
pub fn spin_conditions(s: &SpinSystemSpec) -> ConditionReport {
    let g = s.graph();
    let bound = spin_bound(g.max_degree(), g.rank());
    ConditionReport {
        host: "interaction graph".into(),
        max_degree: g.max_degree(),
        rank: g.rank(),
        bound,
        items: vec![ConditionItem::at_most("|beta|", s.beta().norm(), bound)],
    }
}

/// `⟨0|U_G|0⟩` as `exp(T_m)` over connected gate subsets.
pub fn approximate_amplitude(c: &CircuitSpec, opts: &ApproxOptions) -> Result<(Complex64, ApproximationReport)> {
    let conditions = amplitude_conditions(c);
    let u = SubgraphUniverse::new(c.graph(), AmplitudeWeights::new(c));
    let (approx, report) = run_cluster("amplitude", &u, c.graph().order(), opts, &conditions)?;
    Ok((approx.value, report))
}

/// `⟨0|U_G† (⊗ O_v) U_G|0⟩` as `exp(T_m)` over connected subsets of the
/// causal intersection hypergraph.
pub fn approximate_expectation(
    c: &CircuitSpec,
    obs: &VertexObservables,
    opts: &ApproxOptions,
) -> Result<(Complex64, ApproximationReport)> {
    obs.require(ObservableMode::Expectation)?;
    let conditions = expectation_conditions(c, obs);
    let host = causal_intersection_hypergraph(c.graph());
    let u = SubgraphUniverse::new(&host, ExpectationWeights::new(c, obs));
    let (approx, report) = run_cluster("expectation", &u, host.order(), opts, &conditions)?;
    Ok((approx.value, report))
}

/// Normalized `tr e^{-β H_G}` as `exp(T_m)`.
pub fn approximate_partition(s: &SpinSystemSpec, opts: &ApproxOptions) -> Result<(Complex64, ApproximationReport)> {
    let conditions = spin_conditions(s);
    let u = SubgraphUniverse::new(s.graph(), SpinWeights::partition(s));
    let (approx, report) = run_cluster("partition", &u, s.graph().order(), opts, &conditions)?;
    Ok((approx.value, report))
}

/// `tr[Ψ_G e^{-β H_G}] / tr[e^{-β H_G}]` as `exp(T^Ψ_m − T_m)`, each series
/// truncated for a log error of ε/4 so the ratio stays within ε.
pub fn approximate_thermal(
    s: &SpinSystemSpec,
    obs: &VertexObservables,
    opts: &ApproxOptions,
) -> Result<(Complex64, ApproximationReport)> {
    obs.require(ObservableMode::Thermal)?;
    let conditions = spin_conditions(s);
    let n = s.graph().order();
    let half = ApproxOptions {
        order: Some(opts.order_for(n, 0.5)?),
        ..*opts
    };
    let num_u = SubgraphUniverse::new(s.graph(), SpinWeights::thermal(s, obs));
    let den_u = SubgraphUniverse::new(s.graph(), SpinWeights::partition(s));
    let (num, num_report) = run_cluster("thermal", &num_u, n, &half, &conditions)?;
    let (den, den_report) = run_cluster("thermal", &den_u, n, &half, &conditions)?;
    let value = (num.log_value - den.log_value).exp();
    let report = ApproximationReport {
        value: pair(value),
        clusters_evaluated: num_report.clusters_evaluated + den_report.clusters_evaluated,
        polymers: num_report.polymers,
        elapsed: num_report.elapsed + den_report.elapsed,
        ..num_report
    };
    Ok((value, report))
}
