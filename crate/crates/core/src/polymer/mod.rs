//! Abstract polymer models and the truncated cluster expansion.
//!
//! A model is anything implementing [`PolymerUniverse`]: a family of polymers
//! with positive integer sizes, a symmetric incompatibility relation under
//! which every polymer is incompatible with itself, and a complex weight per
//! polymer. Its partition function sums the weight products of all pairwise
//! compatible polymer sets, and `log Z` expands as a sum over clusters
//! (multisets of polymers with connected incompatibility graph).
//!
//! The engine only talks to the trait, so the same code handles the
//! connected-subgraph models of [`SubgraphUniverse`] and non-geometric models
//! such as the hard-core model in [`crate::classical`].

mod cluster;
mod expansion;
mod graded;
mod ursell;

use std::collections::{BTreeSet, HashMap};
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::atomic::{AtomicUsize, Ordering};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hypergraph::{enumerate, EdgeSubset, MultiHypergraph};

pub use cluster::{cluster_counts, cluster_term, enumerate_clusters, Cluster, ClusterCounts};
pub use expansion::{
    approximate_z, approximate_z_at_order, brute_force_z, cluster_sums, expansion_terms, truncated_expansion,
    truncation_order, weight_decay_check, Admission, AdmissionEvidence, Approximation, ClusterSums, ExpansionTerms,
    WeightDecayReport, WeightViolation, BRUTE_FORCE_POLYMER_LIMIT,
};
pub use ursell::{
    multiset_phi_hat, phi_hat_by_subsets, tutte_at_one_zero, ursell, ursell_by_subsets, ursell_by_tutte,
    IncompatibilityGraph,
};

pub trait PolymerUniverse: Sync {
    type Polymer: Clone + Ord + Hash + Debug + Send + Sync;

    /// Every polymer of size at most `max_size`, each once, sorted.
    fn polymers(&self, max_size: usize) -> Vec<Self::Polymer>;

    fn size(&self, p: &Self::Polymer) -> usize;

    /// Symmetric; `incompatible(p, p)` must hold.
    fn incompatible(&self, a: &Self::Polymer, b: &Self::Polymer) -> bool;

    /// Polymers of size at most `max_size` incompatible with `p` (including
    /// `p` itself when it fits).
    fn incompatible_with(&self, p: &Self::Polymer, max_size: usize) -> Vec<Self::Polymer> {
        self.polymers(max_size)
            .into_iter()
            .filter(|q| self.incompatible(p, q))
            .collect()
    }

    /// For each polymer in `polymers`, the indices of the *other* entries it
    /// is incompatible with, sorted. Fails with [`Error::Guard`] once the
    /// lists would hold more than [`ADJACENCY_LIMIT`] entries.
    fn incompatibility_lists(&self, polymers: &[Self::Polymer]) -> Result<Vec<Vec<usize>>> {
        let index: HashMap<&Self::Polymer, usize> = polymers.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let max_size = polymers.iter().map(|p| self.size(p)).max().unwrap_or(0);
        collect_lists(polymers.len(), |i| {
            self.incompatible_with(&polymers[i], max_size)
                .iter()
                .filter_map(|q| index.get(q).copied())
                .filter(|&j| j != i)
                .collect()
        })
    }

    fn weight(&self, p: &Self::Polymer) -> Result<Complex64>;

    fn weights(&self, polymers: &[Self::Polymer]) -> Result<Vec<Complex64>> {
        polymers.par_iter().map(|p| self.weight(p)).collect()
    }
}

/// Weight function for polymers that are connected edge subsets.
pub trait SubgraphWeight: Sync {
    fn weight(&self, polymer: &EdgeSubset) -> Result<Complex64>;

    fn weights(&self, polymers: &[EdgeSubset]) -> Result<Vec<Complex64>> {
        polymers.par_iter().map(|p| self.weight(p)).collect()
    }
}

impl<F> SubgraphWeight for F
where
    F: Fn(&EdgeSubset) -> Result<Complex64> + Sync,
{
    fn weight(&self, polymer: &EdgeSubset) -> Result<Complex64> {
        self(polymer)
    }
}

/// Polymers are the connected edge subsets of `host`; two polymers are
/// compatible iff their vertex sets are disjoint; size is the edge count.
pub struct SubgraphUniverse<'g, W> {
    host: &'g MultiHypergraph,
    weights: W,
}

impl<'g, W: SubgraphWeight> SubgraphUniverse<'g, W> {
    pub fn new(host: &'g MultiHypergraph, weights: W) -> Self {
        SubgraphUniverse { host, weights }
    }

    pub fn host(&self) -> &'g MultiHypergraph {
        self.host
    }

    pub fn weight_source(&self) -> &W {
        &self.weights
    }
}

impl<W: SubgraphWeight> PolymerUniverse for SubgraphUniverse<'_, W> {
    type Polymer = EdgeSubset;

    fn polymers(&self, max_size: usize) -> Vec<EdgeSubset> {
        let all: BTreeSet<EdgeSubset> = (0..self.host.order())
            .into_par_iter()
            .map(|v| enumerate::connected_subgraphs_at(self.host, v, max_size))
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect();
        all.into_iter().collect()
    }

    fn size(&self, p: &EdgeSubset) -> usize {
        p.len()
    }

    fn incompatible(&self, a: &EdgeSubset, b: &EdgeSubset) -> bool {
        let va = a.vertex_set(self.host);
        let vb = b.vertex_set(self.host);
        sorted_intersect(&va, &vb)
    }

    fn incompatible_with(&self, p: &EdgeSubset, max_size: usize) -> Vec<EdgeSubset> {
        let found: BTreeSet<EdgeSubset> = p
            .vertex_set(self.host)
            .into_iter()
            .flat_map(|v| enumerate::connected_subgraphs_at(self.host, v, max_size))
            .collect();
        found.into_iter().collect()
    }

    fn incompatibility_lists(&self, polymers: &[EdgeSubset]) -> Result<Vec<Vec<usize>>> {
        let vsets: Vec<Vec<usize>> = polymers.iter().map(|p| p.vertex_set(self.host)).collect();
        let mut containing = vec![Vec::new(); self.host.order()];
        for (i, vs) in vsets.iter().enumerate() {
            for &v in vs {
                containing[v].push(i);
            }
        }
        collect_lists(polymers.len(), |i| {
            vsets[i]
                .iter()
                .flat_map(|&v| containing[v].iter().copied())
                .filter(|&j| j != i)
                .collect()
        })
    }

    fn weight(&self, p: &EdgeSubset) -> Result<Complex64> {
        self.weights.weight(p)
    }

    fn weights(&self, polymers: &[EdgeSubset]) -> Result<Vec<Complex64>> {
        self.weights.weights(polymers)
    }
}

/// Total entries the incompatibility lists of one expansion may hold (8
/// bytes each). Dense polymer graphs reach it long before the expansion's
/// running time becomes the obstacle.
pub const ADJACENCY_LIMIT: usize = 1 << 27;

/// Lists `0..n` in parallel, each sorted and deduplicated, under
/// [`ADJACENCY_LIMIT`].
fn collect_lists<F>(n: usize, list: F) -> Result<Vec<Vec<usize>>>
where
    F: Fn(usize) -> Vec<usize> + Sync,
{
    let total = AtomicUsize::new(0);
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut adj = list(i);
            adj.sort_unstable();
            adj.dedup();
            adj.shrink_to_fit();
            if total.fetch_add(adj.len(), Ordering::Relaxed) + adj.len() > ADJACENCY_LIMIT {
                return Err(Error::Guard(format!(
                    "incompatibility lists of {n} polymers exceed {ADJACENCY_LIMIT} entries; lower the order"
                )));
            }
            Ok(adj)
        })
        .collect()
}

fn sorted_intersect(a: &[usize], b: &[usize]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

/// Polymers of a universe up to some size with their sizes, weights and
/// incompatibility lists, indexed in canonical order.
pub(crate) struct PolymerTable<P> {
    pub polymers: Vec<P>,
    pub sizes: Vec<usize>,
    pub weights: Vec<Complex64>,
    pub adjacency: Vec<Vec<usize>>,
}

impl<P: Clone + Ord + Hash + Debug + Send + Sync> PolymerTable<P> {
    pub fn build<U>(u: &U, max_size: usize, with_weights: bool) -> Result<Self>
    where
        U: PolymerUniverse<Polymer = P> + ?Sized,
    {
        if max_size == 0 {
            return Ok(PolymerTable {
                polymers: Vec::new(),
                sizes: Vec::new(),
                weights: Vec::new(),
                adjacency: Vec::new(),
            });
        }
        let polymers = u.polymers(max_size);
        let sizes = polymers.iter().map(|p| u.size(p)).collect();
        let adjacency = u.incompatibility_lists(&polymers)?;
        let weights = if with_weights {
            u.weights(&polymers)?
        } else {
            Vec::new()
        };
        Ok(PolymerTable {
            polymers,
            sizes,
            weights,
            adjacency,
        })
    }

    pub fn len(&self) -> usize {
        self.polymers.len()
    }
}
