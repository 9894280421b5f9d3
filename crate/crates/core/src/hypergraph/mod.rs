//! Multihypergraphs with uniquely labelled edges and per-vertex local
//! dimensions.
//!
//! Every problem in this crate lives on a [`MultiHypergraph`]: circuits put a
//! gate on each edge, spin systems an interaction term, Ising models a
//! coupling. Parallel edges are allowed and edges may contain any number of
//! vertices. Edges are kept in strictly increasing label order, so an edge's
//! storage position doubles as its rank in the label order; [`EdgeSubset`]
//! stores those positions.

pub mod causal;
pub mod enumerate;

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

pub use causal::{causal_cone, causal_cone_of_set, causal_intersection_hypergraph, cone_vertex_of_edge, CausalCone};
pub use enumerate::{connected_components, enumerate_connected_subgraphs, is_connected};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub id: String,
    pub dim: usize,
}

/// A labelled edge. `vertices` holds vertex indices in declared order; that
/// order fixes the tensor-factor order of any operator placed on the edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub label: u64,
    pub vertices: Vec<usize>,
}

impl Edge {
    pub fn contains(&self, v: usize) -> bool {
        self.vertices.contains(&v)
    }

    pub fn intersects(&self, other: &Edge) -> bool {
        self.vertices.iter().any(|v| other.vertices.contains(v))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphStats {
    /// Number of vertices.
    pub order: usize,
    /// Number of edges.
    pub size: usize,
    pub max_degree: usize,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiHypergraph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    index: HashMap<String, usize>,
    incidence: Vec<Vec<usize>>,
    edge_adjacency: Vec<Vec<usize>>,
}

/// Collects vertices and edges by name; [`GraphBuilder::build`] validates.
#[derive(Debug, Clone, Default)]
pub struct GraphBuilder {
    vertices: Vec<(String, usize)>,
    edges: Vec<(u64, Vec<String>)>,
}

impl GraphBuilder {
    pub fn vertex(mut self, id: impl Into<String>, dim: usize) -> Self {
        self.vertices.push((id.into(), dim));
        self
    }

    pub fn edge<I, S>(mut self, label: u64, vertices: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.edges.push((label, vertices.into_iter().map(Into::into).collect()));
        self
    }

    pub fn build(self) -> Result<MultiHypergraph> {
        let mut index = HashMap::with_capacity(self.vertices.len());
        let mut vertices = Vec::with_capacity(self.vertices.len());
        for (id, dim) in self.vertices {
            if dim == 0 {
                return Err(Error::validation(format!("vertex `{id}` has local dimension 0")));
            }
            if index.insert(id.clone(), vertices.len()).is_some() {
                return Err(Error::validation(format!("duplicate vertex id `{id}`")));
            }
            vertices.push(Vertex { id, dim });
        }

        let mut edges: Vec<Edge> = Vec::with_capacity(self.edges.len());
        for (label, names) in self.edges {
            if label == 0 {
                return Err(Error::validation("edge label 0: labels must be positive"));
            }
            if let Some(prev) = edges.last() {
                if prev.label == label {
                    return Err(Error::validation(format!("duplicate edge label {label}")));
                }
                if prev.label > label {
                    return Err(Error::validation(format!(
                        "edge label {label} follows {}: labels must be strictly increasing",
                        prev.label
                    )));
                }
            }
            if names.is_empty() {
                return Err(Error::validation(format!("edge {label} has no vertices")));
            }
            let mut members = Vec::with_capacity(names.len());
            for name in &names {
                let v = *index
                    .get(name)
                    .ok_or_else(|| Error::validation(format!("edge {label} references unknown vertex `{name}`")))?;
                if members.contains(&v) {
                    return Err(Error::validation(format!("edge {label} lists vertex `{name}` twice")));
                }
                members.push(v);
            }
            edges.push(Edge {
                label,
                vertices: members,
            });
        }
        Ok(MultiHypergraph::from_validated(vertices, edges, index))
    }
}

impl MultiHypergraph {
    pub fn builder() -> GraphBuilder {
        GraphBuilder::default()
    }

    /// `n` qubits named `q0 … q{n-1}` with no edges yet; edges are added by
    /// index through [`MultiHypergraph::with_edges`].
    pub fn qubits(n: usize) -> GraphBuilder {
        (0..n).fold(GraphBuilder::default(), |b, i| b.vertex(format!("q{i}"), 2))
    }

    /// Same vertices, new edge list given as (label, vertex indices).
    pub fn with_edges(&self, edges: Vec<(u64, Vec<usize>)>) -> Result<MultiHypergraph> {
        let mut b = GraphBuilder {
            vertices: self.vertices.iter().map(|v| (v.id.clone(), v.dim)).collect(),
            edges: Vec::new(),
        };
        for (label, vs) in edges {
            let mut names = Vec::with_capacity(vs.len());
            for v in vs {
                let vert = self
                    .vertices
                    .get(v)
                    .ok_or_else(|| Error::validation(format!("edge {label} references vertex index {v}")))?;
                names.push(vert.id.clone());
            }
            b = b.edge(label, names);
        }
        b.build()
    }

    fn from_validated(vertices: Vec<Vertex>, edges: Vec<Edge>, index: HashMap<String, usize>) -> Self {
        let mut incidence = vec![Vec::new(); vertices.len()];
        for (i, e) in edges.iter().enumerate() {
            for &v in &e.vertices {
                incidence[v].push(i);
            }
        }
        let edge_adjacency = (0..edges.len())
            .map(|i| {
                let mut adj: Vec<usize> = edges[i]
                    .vertices
                    .iter()
                    .flat_map(|&v| incidence[v].iter().copied())
                    .filter(|&j| j != i)
                    .collect();
                adj.sort_unstable();
                adj.dedup();
                adj
            })
            .collect();
        MultiHypergraph {
            vertices,
            edges,
            index,
            incidence,
            edge_adjacency,
        }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> &Edge {
        &self.edges[i]
    }

    pub fn dim(&self, v: usize) -> usize {
        self.vertices[v].dim
    }

    pub fn dims(&self) -> Vec<usize> {
        self.vertices.iter().map(|v| v.dim).collect()
    }

    pub fn vertex_index(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    /// Storage position of the edge carrying `label`.
    pub fn edge_position(&self, label: u64) -> Option<usize> {
        self.edges.binary_search_by_key(&label, |e| e.label).ok()
    }

    /// Edges (by position) containing vertex `v`, in label order.
    pub fn incident_edges(&self, v: usize) -> &[usize] {
        &self.incidence[v]
    }

    /// Edges sharing at least one vertex with edge `i`, excluding `i`.
    pub fn adjacent_edges(&self, i: usize) -> &[usize] {
        &self.edge_adjacency[i]
    }

    pub fn order(&self) -> usize {
        self.vertices.len()
    }

    pub fn size(&self) -> usize {
        self.edges.len()
    }

    pub fn max_degree(&self) -> usize {
        self.incidence.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn rank(&self) -> usize {
        self.edges.iter().map(|e| e.vertices.len()).max().unwrap_or(0)
    }

    pub fn stats(&self) -> GraphStats {
        GraphStats {
            order: self.order(),
            size: self.size(),
            max_degree: self.max_degree(),
            rank: self.rank(),
        }
    }

    /// Every edge as a one-element subset, in label order.
    pub fn all_edges(&self) -> EdgeSubset {
        EdgeSubset((0..self.edges.len()).collect())
    }

    /// Replaces every edge by `k` parallel copies. Copy `j` of label `l` is
    /// labelled `l * k + j`, which keeps the original relative order.
    pub fn k_thicken(&self, k: usize) -> Result<MultiHypergraph> {
        if k == 0 {
            return Err(Error::validation("thickening factor must be positive"));
        }
        if let Some(e) = self.edges.iter().find(|e| e.vertices.len() != 2) {
            return Err(Error::validation(format!(
                "k-thickening needs a multigraph; edge {} has {} vertices",
                e.label,
                e.vertices.len()
            )));
        }
        let k64 = k as u64;
        let mut edges = Vec::with_capacity(self.edges.len() * k);
        for e in &self.edges {
            let base = e
                .label
                .checked_mul(k64)
                .ok_or_else(|| Error::validation(format!("label {} overflows when thickened", e.label)))?;
            for j in 0..k64 {
                edges.push(Edge {
                    label: base + j,
                    vertices: e.vertices.clone(),
                });
            }
        }
        Ok(MultiHypergraph::from_validated(
            self.vertices.clone(),
            edges,
            self.index.clone(),
        ))
    }
}

impl fmt::Display for MultiHypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G(|V|={}, |E|={})", self.order(), self.size())
    }
}

/// A set of edges of some host graph, stored as sorted edge positions.
///
/// Sorting positions is the same as sorting labels, so the derived `Ord` is
/// the lexicographic order of sorted label lists.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct EdgeSubset(Vec<usize>);

impl EdgeSubset {
    pub fn new(mut positions: Vec<usize>) -> Self {
        positions.sort_unstable();
        positions.dedup();
        EdgeSubset(positions)
    }

    /// Subset given by edge labels; unknown labels are rejected.
    pub fn from_labels(g: &MultiHypergraph, labels: &[u64]) -> Result<Self> {
        let positions = labels
            .iter()
            .map(|&l| {
                g.edge_position(l)
                    .ok_or_else(|| Error::validation(format!("no edge with label {l}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(EdgeSubset::new(positions))
    }

    pub fn positions(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, position: usize) -> bool {
        self.0.binary_search(&position).is_ok()
    }

    pub fn labels(&self, g: &MultiHypergraph) -> Vec<u64> {
        self.0.iter().map(|&i| g.edge(i).label).collect()
    }

    /// Induced vertex set, sorted by vertex index.
    pub fn vertex_set(&self, g: &MultiHypergraph) -> Vec<usize> {
        let mut vs: Vec<usize> = self
            .0
            .iter()
            .flat_map(|&i| g.edge(i).vertices.iter().copied())
            .collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    pub(crate) fn validate_against(&self, g: &MultiHypergraph) -> Result<()> {
        match self.0.last() {
            Some(&last) if last >= g.size() => Err(Error::validation(format!(
                "edge position {last} out of range for a graph with {} edges",
                g.size()
            ))),
            _ => Ok(()),
        }
    }
}

impl FromIterator<usize> for EdgeSubset {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        EdgeSubset::new(iter.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn triangle() -> MultiHypergraph {
        MultiHypergraph::builder()
            .vertex("a", 2)
            .vertex("b", 2)
            .vertex("c", 2)
            .edge(1, ["a", "b"])
            .edge(2, ["b", "c"])
            .edge(3, ["c", "a"])
            .build()
            .unwrap()
    }

    #[test]
    fn triangle_stats() {
        let s = triangle().stats();
        assert_eq!(
            s,
            GraphStats {
                order: 3,
                size: 3,
                max_degree: 2,
                rank: 2
            }
        );
    }

    #[test]
    fn single_hyperedge_stats() {
        let g = MultiHypergraph::builder()
            .vertex("a", 2)
            .vertex("b", 2)
            .vertex("c", 2)
            .edge(1, ["a", "b", "c"])
            .build()
            .unwrap();
        let s = g.stats();
        assert_eq!((s.order, s.size, s.max_degree, s.rank), (3, 1, 1, 3));
    }

    #[test]
    fn rejects_unknown_vertex() {
        let err = MultiHypergraph::builder()
            .vertex("a", 2)
            .vertex("b", 2)
            .edge(1, ["a", "d"])
            .build()
            .unwrap_err();
        assert!(err.to_string().contains("`d`"), "{err}");
    }

    #[test]
    fn rejects_duplicate_and_decreasing_labels() {
        let dup = MultiHypergraph::builder()
            .vertex("a", 2)
            .vertex("b", 2)
            .edge(4, ["a", "b"])
            .edge(4, ["a", "b"])
            .build()
            .unwrap_err();
        assert!(dup.to_string().contains("duplicate edge label 4"));
        let dec = MultiHypergraph::builder()
            .vertex("a", 2)
            .vertex("b", 2)
            .edge(5, ["a", "b"])
            .edge(2, ["a", "b"])
            .build()
            .unwrap_err();
        assert!(dec.to_string().contains("strictly increasing"));
    }

    #[test]
    fn rejects_empty_edge_and_zero_dim() {
        let empty = MultiHypergraph::builder()
            .vertex("a", 2)
            .edge(1, Vec::<String>::new())
            .build()
            .unwrap_err();
        assert!(empty.to_string().contains("no vertices"));
        let zero = MultiHypergraph::builder().vertex("a", 0).build().unwrap_err();
        assert!(zero.to_string().contains("dimension 0"));
    }

    #[test]
    fn parallel_edges_are_allowed() {
        let g = MultiHypergraph::builder()
            .vertex("a", 2)
            .vertex("b", 3)
            .edge(1, ["a", "b"])
            .edge(2, ["b", "a"])
            .build()
            .unwrap();
        assert_eq!(g.max_degree(), 2);
        assert_eq!(g.edge(1).vertices, vec![1, 0]);
    }

    #[test]
    fn thickening() {
        let single = MultiHypergraph::builder()
            .vertex("a", 2)
            .vertex("b", 2)
            .edge(1, ["a", "b"])
            .build()
            .unwrap();
        let t = single.k_thicken(3).unwrap();
        assert_eq!(t.size(), 3);
        assert_eq!(t.max_degree(), 3);

        let tri = triangle();
        let t2 = tri.k_thicken(2).unwrap();
        assert_eq!((t2.size(), t2.max_degree()), (6, 4));
        let labels: Vec<u64> = t2.edges().iter().map(|e| e.label).collect();
        assert_eq!(labels, vec![2, 3, 4, 5, 6, 7]);

        let t1 = tri.k_thicken(1).unwrap();
        assert_eq!(t1, tri);
    }

    #[test]
    fn thickening_rejects_hyperedges() {
        let g = MultiHypergraph::builder()
            .vertex("a", 2)
            .vertex("b", 2)
            .vertex("c", 2)
            .edge(1, ["a", "b", "c"])
            .build()
            .unwrap();
        assert!(g.k_thicken(2).is_err());
    }

    #[test]
    fn subset_from_labels() {
        let g = triangle();
        let s = EdgeSubset::from_labels(&g, &[3, 1]).unwrap();
        assert_eq!(s.positions(), &[0, 2]);
        assert_eq!(s.vertex_set(&g), vec![0, 1, 2]);
        assert!(EdgeSubset::from_labels(&g, &[9]).is_err());
    }
}
