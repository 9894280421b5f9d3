use super::{Edge, EdgeSubset, MultiHypergraph};
use crate::error::Result;

/// Gates that can influence an observable supported on `root`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CausalCone {
    pub root: usize,
    pub edges: EdgeSubset,
    /// Sorted vertex indices; always contains `root`.
    pub vertices: Vec<usize>,
}

/// Backward scan: starting from `{v}`, walk the edges in decreasing label
/// order and keep an edge iff it touches the current support, which then
/// absorbs the edge.
pub fn causal_cone(g: &MultiHypergraph, v: &str) -> Result<CausalCone> {
    let v = g.vertex_index(v)?;
    Ok(cone_at(g, v))
}

pub(crate) fn cone_at(g: &MultiHypergraph, v: usize) -> CausalCone {
    let (edges, vertices) = backward_scan(g, &[v]);
    CausalCone {
        root: v,
        edges,
        vertices,
    }
}

/// Cone of a vertex set; equals the union of the single-vertex cones.
pub fn causal_cone_of_set(g: &MultiHypergraph, roots: &[usize]) -> (EdgeSubset, Vec<usize>) {
    backward_scan(g, roots)
}

fn backward_scan(g: &MultiHypergraph, roots: &[usize]) -> (EdgeSubset, Vec<usize>) {
    let mut support = vec![false; g.order()];
    for &r in roots {
        support[r] = true;
    }
    let mut kept = Vec::new();
    for (i, e) in g.edges().iter().enumerate().rev() {
        if e.vertices.iter().any(|&u| support[u]) {
            for &u in &e.vertices {
                support[u] = true;
            }
            kept.push(i);
        }
    }
    let vertices = (0..g.order()).filter(|&u| support[u]).collect();
    (EdgeSubset::new(kept), vertices)
}

/// One edge per vertex `v` of `g`, with vertex set `V(C_v)`. The edge for
/// vertex index `i` carries label `i + 1`; see [`cone_vertex_of_edge`].
pub fn causal_intersection_hypergraph(g: &MultiHypergraph) -> MultiHypergraph {
    let edges = (0..g.order())
        .map(|v| Edge {
            label: v as u64 + 1,
            vertices: cone_at(g, v).vertices,
        })
        .collect();
    MultiHypergraph::from_validated(g.vertices.clone(), edges, g.index.clone())
}

/// Vertex of the circuit graph identified with edge position `position` of
/// its causal intersection hypergraph.
pub fn cone_vertex_of_edge(position: usize) -> usize {
    position
}
