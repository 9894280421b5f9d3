//! Problem files: a strict JSON schema describing one instance of any of the
//! six problem types, and its conversion to the library's spec types.
//!
//! Complex numbers are `[re, im]` pairs. Operators are dense row-major
//! matrices of pairs or named constructs:
//!
//! ```json
//! {"kind": "pauli_rotation", "angle": 0.02, "pauli": "XX"}
//! {"kind": "identity_plus", "coefficient": [0.0, 0.1], "pauli": "Z"}
//! {"kind": "pauli_sum", "terms": [{"coefficient": 0.25, "pauli": "XX"}]}
//! ```
//!
//! Unknown fields and fields that do not belong to the declared problem type
//! are rejected rather than ignored.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize};

use crate::classical::{HardCoreSpec, IsingSpec};
use crate::error::{validation, Error, Result};
use crate::hypergraph::MultiHypergraph;
use crate::linalg::{identity_plus, pauli_rotation, pauli_string, Matrix};
use crate::quantum::{CircuitSpec, ObservableMode, SpinSystemSpec, VertexObservables};
use crate::report::{from_pair, pair};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub format_version: u32,
    pub problem: ProblemKind,
    pub graph: GraphSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex_operators: Option<BTreeMap<String, OperatorSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub activity: Option<[f64; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    Amplitude,
    Expectation,
    Partition,
    Thermal,
    Ising,
    Hardcore,
}

impl ProblemKind {
    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::Amplitude => "amplitude",
            ProblemKind::Expectation => "expectation",
            ProblemKind::Partition => "partition",
            ProblemKind::Thermal => "thermal",
            ProblemKind::Ising => "ising",
            ProblemKind::Hardcore => "hardcore",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSpec {
    pub vertices: Vec<VertexSpec>,
    pub edges: Vec<EdgeSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexSpec {
    pub id: String,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub label: u64,
    pub vertices: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operator: Option<OperatorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupling: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum OperatorSpec {
    /// Row-major rows of `[re, im]` entries.
    Dense(Vec<Vec<[f64; 2]>>),
    Named(NamedOperator),
}

// Dispatching on the JSON shape keeps serde's field-level messages, which an
// untagged derive would replace by a generic "no variant matched".
impl<'de> Deserialize<'de> for OperatorSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let value = serde_json::Value::deserialize(d)?;
        match value {
            serde_json::Value::Array(_) => serde_json::from_value(value)
                .map(OperatorSpec::Dense)
                .map_err(D::Error::custom),
            serde_json::Value::Object(_) => serde_json::from_value(value)
                .map(OperatorSpec::Named)
                .map_err(D::Error::custom),
            other => Err(D::Error::custom(format!(
                "an operator is a matrix or an object with a `kind`, got {other}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NamedOperator {
    /// `exp(−i·angle·P)`.
    PauliRotation { angle: f64, pauli: String },
    /// `I + coefficient·P`.
    IdentityPlus { coefficient: [f64; 2], pauli: String },
    /// `Σ c_k P_k` with real coefficients.
    PauliSum { terms: Vec<PauliTerm> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PauliTerm {
    pub coefficient: f64,
    pub pauli: String,
}

impl OperatorSpec {
    pub fn dense(m: &Matrix) -> Self {
        OperatorSpec::Dense(
            (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| pair(m[(i, j)])).collect())
                .collect(),
        )
    }

    pub fn matrix(&self) -> Result<Matrix> {
        match self {
            OperatorSpec::Dense(rows) => {
                let n = rows.len();
                if n == 0 {
                    return Err(validation("dense operator has no rows"));
                }
                let mut m = Matrix::zeros(n, n);
                for (i, row) in rows.iter().enumerate() {
                    if row.len() != n {
                        return Err(validation(format!(
                            "dense operator row {i} has {} entries, expected {n}",
                            row.len()
                        )));
                    }
                    for (j, &z) in row.iter().enumerate() {
                        if !z[0].is_finite() || !z[1].is_finite() {
                            return Err(validation(format!("non-finite entry ({i}, {j})")));
                        }
                        m[(i, j)] = from_pair(z);
                    }
                }
                Ok(m)
            }
            OperatorSpec::Named(NamedOperator::PauliRotation { angle, pauli }) => pauli_rotation(*angle, pauli),
            OperatorSpec::Named(NamedOperator::IdentityPlus { coefficient, pauli }) => {
                identity_plus(from_pair(*coefficient), pauli)
            }
            OperatorSpec::Named(NamedOperator::PauliSum { terms }) => {
                let first = terms
                    .first()
                    .ok_or_else(|| validation("pauli_sum needs at least one term"))?;
                let mut sum = pauli_string(&first.pauli)? * Complex64::new(first.coefficient, 0.0);
                for t in &terms[1..] {
                    if t.pauli.len() != first.pauli.len() {
                        return Err(validation(format!(
                            "pauli_sum mixes `{}` and `{}`",
                            first.pauli, t.pauli
                        )));
                    }
                    sum += pauli_string(&t.pauli)? * Complex64::new(t.coefficient, 0.0);
                }
                Ok(sum)
            }
        }
    }
}

/// A validated instance, ready for the approximators and oracles.
#[derive(Debug, Clone, PartialEq)]
pub enum Problem {
    Amplitude(CircuitSpec),
    Expectation(CircuitSpec, VertexObservables),
    Partition(SpinSystemSpec),
    Thermal(SpinSystemSpec, VertexObservables),
    Ising(IsingSpec),
    HardCore(HardCoreSpec),
}

impl Problem {
    pub fn kind(&self) -> ProblemKind {
        match self {
            Problem::Amplitude(_) => ProblemKind::Amplitude,
            Problem::Expectation(..) => ProblemKind::Expectation,
            Problem::Partition(_) => ProblemKind::Partition,
            Problem::Thermal(..) => ProblemKind::Thermal,
            Problem::Ising(_) => ProblemKind::Ising,
            Problem::HardCore(_) => ProblemKind::Hardcore,
        }
    }

    pub fn graph(&self) -> &MultiHypergraph {
        match self {
            Problem::Amplitude(c) | Problem::Expectation(c, _) => c.graph(),
            Problem::Partition(s) | Problem::Thermal(s, _) => s.graph(),
            Problem::Ising(s) => s.graph(),
            Problem::HardCore(h) => h.graph(),
        }
    }
}

impl ProblemFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| validation(format!("problem file: {e}")))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text =
            std::fs::read_to_string(path).map_err(|e| validation(format!("cannot read {}: {e}", path.display())))?;
        ProblemFile::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem files always serialize")
    }

    /// Validates the file and builds the corresponding spec types.
    pub fn to_problem(&self) -> Result<Problem> {
        if self.format_version != FORMAT_VERSION {
            return Err(validation(format!(
                "format_version {} is not supported (expected {FORMAT_VERSION})",
                self.format_version
            )));
        }
        let kind = self.problem;
        let quantum = matches!(
            kind,
            ProblemKind::Amplitude | ProblemKind::Expectation | ProblemKind::Partition | ProblemKind::Thermal
        );
        let observables = matches!(kind, ProblemKind::Expectation | ProblemKind::Thermal);
        let spin = matches!(kind, ProblemKind::Partition | ProblemKind::Thermal | ProblemKind::Ising);
        forbid(
            !observables && self.vertex_operators.is_some(),
            kind,
            "vertex_operators",
        )?;
        forbid(!spin && self.beta.is_some(), kind, "beta")?;
        forbid(
            kind != ProblemKind::Hardcore && self.activity.is_some(),
            kind,
            "activity",
        )?;
        for e in &self.graph.edges {
            let what = format!("edge {}: operator", e.label);
            forbid(!quantum && e.operator.is_some(), kind, &what)?;
            let what = format!("edge {}: coupling", e.label);
            forbid(kind != ProblemKind::Ising && e.coupling.is_some(), kind, &what)?;
        }

        let graph = self.build_graph()?;
        let problem = match kind {
            ProblemKind::Amplitude => Problem::Amplitude(CircuitSpec::new(graph, self.edge_operators()?)?),
            ProblemKind::Expectation => {
                let obs = self.observables(&graph, ObservableMode::Expectation)?;
                Problem::Expectation(CircuitSpec::new(graph, self.edge_operators()?)?, obs)
            }
            ProblemKind::Partition => Problem::Partition(SpinSystemSpec::new(
                graph,
                self.edge_operators()?,
                self.required(self.beta, "beta")?,
            )?),
            ProblemKind::Thermal => {
                let obs = self.observables(&graph, ObservableMode::Thermal)?;
                let beta = self.required(self.beta, "beta")?;
                Problem::Thermal(SpinSystemSpec::new(graph, self.edge_operators()?, beta)?, obs)
            }
            ProblemKind::Ising => {
                let couplings = self
                    .graph
                    .edges
                    .iter()
                    .map(|e| {
                        e.coupling
                            .ok_or_else(|| validation(format!("edge {}: coupling is required", e.label)))
                    })
                    .collect::<Result<_>>()?;
                Problem::Ising(IsingSpec::new(graph, couplings, self.required(self.beta, "beta")?)?)
            }
            ProblemKind::Hardcore => {
                Problem::HardCore(HardCoreSpec::new(graph, self.required(self.activity, "activity")?)?)
            }
        };
        Ok(problem)
    }

    /// A file describing `problem`, with every operator written densely.
    pub fn from_problem(problem: &Problem) -> Self {
        let g = problem.graph();
        let vertices = g
            .vertices()
            .iter()
            .map(|v| VertexSpec {
                id: v.id.clone(),
                dim: v.dim,
            })
            .collect();
        let operators: Option<Vec<Matrix>> = match problem {
            Problem::Amplitude(c) | Problem::Expectation(c, _) => {
                Some(c.gates().iter().map(|op| op.matrix().clone()).collect())
            }
            Problem::Partition(s) | Problem::Thermal(s, _) => {
                Some(s.interactions().iter().map(|op| op.matrix().clone()).collect())
            }
            _ => None,
        };
        let edges = g
            .edges()
            .iter()
            .enumerate()
            .map(|(i, e)| EdgeSpec {
                label: e.label,
                vertices: e.vertices.iter().map(|&v| g.vertices()[v].id.clone()).collect(),
                operator: operators.as_ref().map(|ops| OperatorSpec::dense(&ops[i])),
                coupling: match problem {
                    Problem::Ising(s) => Some(s.coupling(i)),
                    _ => None,
                },
            })
            .collect();
        let vertex_operators = match problem {
            Problem::Expectation(_, obs) | Problem::Thermal(_, obs) => Some(
                obs.ops()
                    .iter()
                    .zip(g.vertices())
                    .map(|(op, v)| (v.id.clone(), OperatorSpec::dense(op.matrix())))
                    .collect(),
            ),
            _ => None,
        };
        let beta = match problem {
            Problem::Partition(s) | Problem::Thermal(s, _) => Some(pair(s.beta())),
            Problem::Ising(s) => Some(pair(s.beta())),
            _ => None,
        };
        let activity = match problem {
            Problem::HardCore(h) => Some(pair(h.activity())),
            _ => None,
        };
        ProblemFile {
            format_version: FORMAT_VERSION,
            problem: problem.kind(),
            graph: GraphSpec { vertices, edges },
            vertex_operators,
            beta,
            activity,
        }
    }

    fn build_graph(&self) -> Result<MultiHypergraph> {
        let mut b = MultiHypergraph::builder();
        for v in &self.graph.vertices {
            b = b.vertex(v.id.clone(), v.dim);
        }
        for e in &self.graph.edges {
            b = b.edge(e.label, e.vertices.iter().cloned());
        }
        b.build()
    }

    fn edge_operators(&self) -> Result<Vec<Matrix>> {
        self.graph
            .edges
            .iter()
            .map(|e| {
                let op = e
                    .operator
                    .as_ref()
                    .ok_or_else(|| validation(format!("edge {}: operator is required", e.label)))?;
                let m = op
                    .matrix()
                    .map_err(|err| in_context(&format!("edge {}", e.label), err))?;
                let expected: usize = e.vertices.iter().map(|id| self.dim_of(id)).product();
                if m.nrows() != expected {
                    return Err(validation(format!(
                        "edge {}: operator is {}x{} but its vertices span dimension {expected}",
                        e.label,
                        m.nrows(),
                        m.ncols()
                    )));
                }
                Ok(m)
            })
            .collect()
    }

    fn observables(&self, g: &MultiHypergraph, mode: ObservableMode) -> Result<VertexObservables> {
        let mut ops: Vec<Matrix> = g.vertices().iter().map(|v| Matrix::identity(v.dim, v.dim)).collect();
        for (id, spec) in self.vertex_operators.iter().flatten() {
            let v = g.vertex_index(id)?;
            let m = spec
                .matrix()
                .map_err(|err| in_context(&format!("vertex `{id}`"), err))?;
            if m.nrows() != g.dim(v) {
                return Err(validation(format!(
                    "vertex `{id}`: operator is {}x{} but the vertex has dimension {}",
                    m.nrows(),
                    m.ncols(),
                    g.dim(v)
                )));
            }
            ops[v] = m;
        }
        VertexObservables::new(g, mode, ops)
    }

    fn dim_of(&self, id: &str) -> usize {
        self.graph.vertices.iter().find(|v| v.id == id).map_or(0, |v| v.dim)
    }

    fn required(&self, value: Option<[f64; 2]>, field: &str) -> Result<Complex64> {
        value
            .map(from_pair)
            .ok_or_else(|| validation(format!("{} problems require `{field}`", self.problem.name())))
    }
}

fn forbid(present: bool, kind: ProblemKind, field: &str) -> Result<()> {
    if present {
        Err(validation(format!(
            "{field} is not allowed in {} problems",
            kind.name()
        )))
    } else {
        Ok(())
    }
}

fn in_context(context: &str, err: Error) -> Error {
    match err {
        Error::Validation(msg) => validation(format!("{context}: {msg}")),
        other => other,
    }
}
