//! Classical models: the Ising model with complex inverse temperature on a
//! multigraph, and the hard-core model (independence polynomial) on a simple
//! graph.
//!
//! Spins take values `±1`. The Ising partition function is normalized by
//! `2^{-|V|}`, so `Z(G; 0) = 1`, and its polymers are connected edge subsets
//! with weight `2^{-|V(γ)|} Σ_σ ∏_{uv ∈ γ} (e^{-β φ(uv) σ_u σ_v} − 1)`.

use std::collections::HashSet;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{validation, Error, Result};
use crate::hypergraph::{EdgeSubset, MultiHypergraph};
use crate::oracle;
use crate::polymer::{PolymerUniverse, SubgraphUniverse, SubgraphWeight};
use crate::report::{
    circuit_bound, ising_bound, pair, run_cluster, ApproxOptions, ApproximationReport, ConditionItem, ConditionReport,
};

/// A single weight sums over at most `2^24` spin assignments or even
/// subgraphs.
const WEIGHT_ENUMERATION_LIMIT: usize = 24;

/// Largest host accepted by [`thickening_identity_check`].
pub const THICKENING_VERTEX_LIMIT: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct IsingSpec {
    graph: MultiHypergraph,
    couplings: Vec<f64>,
    beta: Complex64,
}

impl IsingSpec {
    /// `couplings[i]` belongs to edge position `i`. Every edge must join two
    /// distinct vertices and every coupling must satisfy `|φ| <= 1`.
    pub fn new(graph: MultiHypergraph, couplings: Vec<f64>, beta: Complex64) -> Result<Self> {
        require_pairs(&graph)?;
        if couplings.len() != graph.size() {
            return Err(validation(format!(
                "{} couplings for {} edges",
                couplings.len(),
                graph.size()
            )));
        }
        for (phi, e) in couplings.iter().zip(graph.edges()) {
            if !phi.is_finite() || phi.abs() > 1.0 {
                return Err(validation(format!(
                    "coupling {phi} on edge {} is outside [-1, 1]",
                    e.label
                )));
            }
        }
        if !beta.re.is_finite() || !beta.im.is_finite() {
            return Err(validation("beta must be finite"));
        }
        Ok(IsingSpec { graph, couplings, beta })
    }

    /// Ferromagnetic couplings `φ ≡ 1`.
    pub fn uniform(graph: MultiHypergraph, beta: Complex64) -> Result<Self> {
        let n = graph.size();
        IsingSpec::new(graph, vec![1.0; n], beta)
    }

    pub fn graph(&self) -> &MultiHypergraph {
        &self.graph
    }

    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    pub fn coupling(&self, position: usize) -> f64 {
        self.couplings[position]
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    pub fn with_beta(&self, beta: Complex64) -> Self {
        IsingSpec { beta, ..self.clone() }
    }

    /// The `k`-thickened instance at `β / k`: every edge becomes `k` parallel
    /// copies with the same coupling.
    pub fn thicken(&self, k: usize) -> Result<IsingSpec> {
        let graph = self.graph.k_thicken(k)?;
        let couplings = self
            .couplings
            .iter()
            .flat_map(|&phi| std::iter::repeat_n(phi, k))
            .collect();
        IsingSpec::new(graph, couplings, self.beta / k as f64)
    }
}

fn require_pairs(g: &MultiHypergraph) -> Result<()> {
    match g.edges().iter().find(|e| e.vertices.len() != 2) {
        Some(e) => Err(validation(format!(
            "edge {} has {} vertices; a graph needs exactly 2",
            e.label,
            e.vertices.len()
        ))),
        None => Ok(()),
    }
}

/// Ising polymer weight of the edge subset `gamma`.
///
/// Each factor is `a + b·σσ'` with `a = cosh(βφ) − 1` and `b = −sinh(βφ)`,
/// so the spin sum keeps exactly the even subgraphs `F ⊆ γ`:
/// `w = Σ_F ∏_{e∈F} b_e ∏_{e∉F} a_e`. The even subgraphs form the cycle
/// space, of dimension `‖γ‖ − |V(γ)| + c`; whichever of that sum and the
/// direct spin sum is smaller is evaluated.
pub fn ising_weight(s: &IsingSpec, gamma: &EdgeSubset) -> Result<Complex64> {
    gamma.validate_against(s.graph())?;
    let order = gamma.vertex_set(s.graph());
    let n = order.len();
    let local = |v: usize| order.binary_search(&v).expect("edge vertex lies in V(γ)");
    // Per edge: local endpoints and the factor values for equal and opposite
    // spins.
    let edges: Vec<(usize, usize, Complex64, Complex64)> = gamma
        .positions()
        .iter()
        .map(|&p| {
            let e = s.graph().edge(p);
            let x = s.beta() * s.coupling(p);
            (
                local(e.vertices[0]),
                local(e.vertices[1]),
                (-x).exp() - 1.0,
                x.exp() - 1.0,
            )
        })
        .collect();
    let cycles = cycle_basis(n, &edges);
    let dimension = if edges.len() <= 64 { cycles.len() } else { usize::MAX };
    if dimension.min(n) > WEIGHT_ENUMERATION_LIMIT {
        return Err(Error::Guard(format!(
            "polymer spans {n} vertices and {} independent cycles; enumeration is limited to 2^{WEIGHT_ENUMERATION_LIMIT}",
            cycles.len()
        )));
    }
    Ok(if dimension < n {
        even_subgraph_sum(&edges, &cycles)
    } else {
        spin_sum(n, &edges)
    })
}

/// `2^{−n} Σ_σ ∏_e x_e(σσ')` by enumerating spins.
fn spin_sum(n: usize, edges: &[(usize, usize, Complex64, Complex64)]) -> Complex64 {
    let mut total = Complex64::new(0.0, 0.0);
    for sigma in 0u64..(1u64 << n) {
        let mut term = Complex64::new(1.0, 0.0);
        for &(a, b, same, opposite) in edges {
            term *= if (sigma >> a ^ sigma >> b) & 1 == 0 {
                same
            } else {
                opposite
            };
        }
        total += term;
    }
    total / (1u64 << n) as f64
}

/// Fundamental cycles of a spanning forest, as edge bitmasks. Only valid for
/// at most 64 edges; longer lists are never summed over cycles.
fn cycle_basis(n: usize, edges: &[(usize, usize, Complex64, Complex64)]) -> Vec<u64> {
    let mut adj = vec![Vec::new(); n];
    for (i, &(a, b, ..)) in edges.iter().enumerate() {
        adj[a].push((b, i));
        adj[b].push((a, i));
    }
    // BFS forest: parent edge and depth per vertex.
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut depth = vec![usize::MAX; n];
    let mut tree = vec![false; edges.len()];
    for root in 0..n {
        if depth[root] != usize::MAX {
            continue;
        }
        depth[root] = 0;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &(u, i) in &adj[v] {
                if depth[u] == usize::MAX {
                    depth[u] = depth[v] + 1;
                    parent[u] = Some((v, i));
                    tree[i] = true;
                    queue.push_back(u);
                }
            }
        }
    }
    let bit = |i: usize| if i < 64 { 1u64 << i } else { 0 };
    let mut basis = Vec::new();
    for (i, &(a, b, ..)) in edges.iter().enumerate() {
        if tree[i] {
            continue;
        }
        let mut mask = bit(i);
        let (mut x, mut y) = (a, b);
        while x != y {
            if depth[x] < depth[y] {
                std::mem::swap(&mut x, &mut y);
            }
            let (p, e) = parent[x].expect("non-root vertex has a parent");
            mask ^= bit(e);
            x = p;
        }
        basis.push(mask);
    }
    basis
}

/// `Σ_F ∏_{e∈F} b_e ∏_{e∉F} a_e` over the span of `basis`, visited in Gray
/// code order.
fn even_subgraph_sum(edges: &[(usize, usize, Complex64, Complex64)], basis: &[u64]) -> Complex64 {
    let ab: Vec<(Complex64, Complex64)> = edges
        .iter()
        .map(|&(_, _, same, opposite)| ((same + opposite) * 0.5, (same - opposite) * 0.5))
        .collect();
    let term = |f: u64| {
        ab.iter()
            .enumerate()
            .fold(Complex64::new(1.0, 0.0), |acc, (i, &(a, b))| {
                acc * if f >> i & 1 == 1 { b } else { a }
            })
    };
    let mut f = 0u64;
    let mut total = term(f);
    for step in 1u64..(1u64 << basis.len()) {
        f ^= basis[step.trailing_zeros() as usize];
        total += term(f);
    }
    total
}

pub struct IsingWeights<'a> {
    spec: &'a IsingSpec,
}

impl<'a> IsingWeights<'a> {
    pub fn new(spec: &'a IsingSpec) -> Self {
        IsingWeights { spec }
    }
}

impl SubgraphWeight for IsingWeights<'_> {
    fn weight(&self, polymer: &EdgeSubset) -> Result<Complex64> {
        ising_weight(self.spec, polymer)
    }
}

/// Polymer model of the normalized Ising partition function.
pub fn ising_universe(s: &IsingSpec) -> SubgraphUniverse<'_, IsingWeights<'_>> {
    SubgraphUniverse::new(s.graph(), IsingWeights::new(s))
}

/// `|β| <= 1/(e^4 Δ)`.
pub fn ising_conditions(s: &IsingSpec) -> ConditionReport {
    let g = s.graph();
    let bound = ising_bound(g.max_degree());
    ConditionReport {
        host: "ising graph".into(),
        max_degree: g.max_degree(),
        rank: g.rank(),
        bound,
        items: vec![ConditionItem::at_most("|beta|", s.beta().norm(), bound)],
    }
}

/// Normalized `Z_Ising(G; β)` as `exp(T_m)`; the report also carries the
/// unnormalized value `2^{|V|} Z`.
pub fn approximate_ising(s: &IsingSpec, opts: &ApproxOptions) -> Result<(Complex64, ApproximationReport)> {
    let conditions = ising_conditions(s);
    let u = ising_universe(s);
    let (approx, mut report) = run_cluster("ising", &u, s.graph().order(), opts, &conditions)?;
    report.unnormalized_value = Some(pair(approx.value * unnormalization(s.graph())));
    Ok((approx.value, report))
}

/// `2^{|V|}`, the factor between the unnormalized and normalized Ising
/// partition functions.
pub fn unnormalization(g: &MultiHypergraph) -> f64 {
    2f64.powi(g.order() as i32)
}

/// Both sides of `Z(G; β) = Z(G_k; β/k)`, computed by spin enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThickeningReport {
    pub k: usize,
    pub original: [f64; 2],
    pub thickened: [f64; 2],
    pub difference: f64,
}

pub fn thickening_identity_check(s: &IsingSpec, k: usize) -> Result<ThickeningReport> {
    if s.graph().order() > THICKENING_VERTEX_LIMIT {
        return Err(Error::Guard(format!(
            "thickening check is limited to {THICKENING_VERTEX_LIMIT} vertices, got {}",
            s.graph().order()
        )));
    }
    let thick = s.thicken(k)?;
    let original = oracle::exact_ising(s)?;
    let thickened = oracle::exact_ising(&thick)?;
    Ok(ThickeningReport {
        k,
        original: pair(original),
        thickened: pair(thickened),
        difference: (original - thickened).norm(),
    })
}

/// Simple graph with a uniform vertex activity.
#[derive(Debug, Clone, PartialEq)]
pub struct HardCoreSpec {
    graph: MultiHypergraph,
    activity: Complex64,
    neighbours: Vec<Vec<usize>>,
}

impl HardCoreSpec {
    /// Rejects edges that are not vertex pairs and parallel edges.
    pub fn new(graph: MultiHypergraph, activity: Complex64) -> Result<Self> {
        require_pairs(&graph)?;
        if !activity.re.is_finite() || !activity.im.is_finite() {
            return Err(validation("activity must be finite"));
        }
        let mut seen = HashSet::new();
        let mut neighbours = vec![Vec::new(); graph.order()];
        for e in graph.edges() {
            let (a, b) = (e.vertices[0], e.vertices[1]);
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(validation(format!(
                    "edge {} duplicates an earlier edge; hard-core graphs are simple",
                    e.label
                )));
            }
            neighbours[a].push(b);
            neighbours[b].push(a);
        }
        for list in &mut neighbours {
            list.sort_unstable();
        }
        Ok(HardCoreSpec {
            graph,
            activity,
            neighbours,
        })
    }

    pub fn graph(&self) -> &MultiHypergraph {
        &self.graph
    }

    pub fn activity(&self) -> Complex64 {
        self.activity
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.neighbours[v]
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.neighbours[a].binary_search(&b).is_ok()
    }
}

/// Polymers are vertex indices of size 1 and weight `x`; two are
/// incompatible iff equal or adjacent, so `Z` is the independence
/// polynomial.
pub struct HardCoreUniverse<'a> {
    spec: &'a HardCoreSpec,
}

pub fn hardcore_universe(h: &HardCoreSpec) -> HardCoreUniverse<'_> {
    HardCoreUniverse { spec: h }
}

impl PolymerUniverse for HardCoreUniverse<'_> {
    type Polymer = usize;

    fn polymers(&self, max_size: usize) -> Vec<usize> {
        if max_size == 0 {
            Vec::new()
        } else {
            (0..self.spec.graph().order()).collect()
        }
    }

    fn size(&self, _: &usize) -> usize {
        1
    }

    fn incompatible(&self, a: &usize, b: &usize) -> bool {
        a == b || self.spec.adjacent(*a, *b)
    }

    fn incompatible_with(&self, p: &usize, max_size: usize) -> Vec<usize> {
        if max_size == 0 {
            return Vec::new();
        }
        let mut out = self.spec.neighbours(*p).to_vec();
        let at = out.binary_search(p).unwrap_or_else(|i| i);
        out.insert(at, *p);
        out
    }

    fn weight(&self, _: &usize) -> Result<Complex64> {
        Ok(self.spec.activity())
    }
}

/// The hard-core model embeds into a subgraph model on the incidence
/// hypergraph (one vertex per edge of `G`, one hyperedge per vertex of `G`
/// covering its incident edges) with `Δ = 2` and `r = Δ_G + 1`; the
/// amplitude-style bound `1/(e^3 Δ C(r,2))` on `|x|` then certifies the
/// expansion.
pub fn hardcore_conditions(h: &HardCoreSpec) -> ConditionReport {
    let rank = h.graph().max_degree() + 1;
    let bound = circuit_bound(2, rank);
    ConditionReport {
        host: "vertex-edge incidence hypergraph".into(),
        max_degree: 2,
        rank,
        bound,
        items: vec![ConditionItem::at_most("|x|", h.activity().norm(), bound)],
    }
}

/// `I(G; x)` as `exp(T_m)`. The truncation order uses `|V| + |E|`, the
/// order of the incidence hypergraph the bound refers to.
pub fn approximate_hardcore(h: &HardCoreSpec, opts: &ApproxOptions) -> Result<(Complex64, ApproximationReport)> {
    let conditions = hardcore_conditions(h);
    let u = hardcore_universe(h);
    let n = h.graph().order() + h.graph().size();
    let (approx, report) = run_cluster("hardcore", &u, n, opts, &conditions)?;
    Ok((approx.value, report))
}
