use std::collections::HashMap;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::ursell::{bitmask_connected, UrsellMemo};
use super::{PolymerTable, PolymerUniverse};
use crate::error::{validation, Error, Result};

/// Multiset of polymers: distinct polymers in canonical order, each with a
/// positive multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cluster<P> {
    members: Vec<(P, u32)>,
}

impl<P: Ord + Clone> Cluster<P> {
    /// Merges repeated polymers and sorts; zero multiplicities are rejected.
    pub fn new(members: impl IntoIterator<Item = (P, u32)>) -> Result<Self> {
        let mut merged: Vec<(P, u32)> = Vec::new();
        let mut all: Vec<(P, u32)> = members.into_iter().collect();
        all.sort_by(|a, b| a.0.cmp(&b.0));
        for (p, k) in all {
            if k == 0 {
                return Err(validation("cluster multiplicity must be positive"));
            }
            match merged.last_mut() {
                Some((q, c)) if *q == p => *c += k,
                _ => merged.push((p, k)),
            }
        }
        if merged.is_empty() {
            return Err(validation("cluster must be non-empty"));
        }
        Ok(Cluster { members: merged })
    }

    pub fn members(&self) -> &[(P, u32)] {
        &self.members
    }

    /// Number of polymer instances, counted with multiplicity.
    pub fn instances(&self) -> usize {
        self.members.iter().map(|&(_, k)| k as usize).sum()
    }

    pub fn total_size<U>(&self, u: &U) -> usize
    where
        U: PolymerUniverse<Polymer = P> + ?Sized,
    {
        self.members.iter().map(|(p, k)| *k as usize * u.size(p)).sum()
    }

    /// Incompatibility graph of the distinct members (one node per polymer).
    pub fn support_graph<U>(&self, u: &U) -> super::IncompatibilityGraph
    where
        U: PolymerUniverse<Polymer = P> + ?Sized,
    {
        let n = self.members.len();
        let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)));
        let edges: Vec<_> = edges
            .filter(|&(a, b)| u.incompatible(&self.members[a].0, &self.members[b].0))
            .collect();
        super::IncompatibilityGraph::new(n, edges).expect("pairs are distinct and ordered")
    }

    /// Expanded incompatibility graph: one node per instance.
    pub fn incompatibility_graph<U>(&self, u: &U) -> super::IncompatibilityGraph
    where
        U: PolymerUniverse<Polymer = P> + ?Sized,
    {
        let mut owner = Vec::new();
        for (i, &(_, k)) in self.members.iter().enumerate() {
            owner.extend(std::iter::repeat_n(i, k as usize));
        }
        let mut edges = Vec::new();
        for x in 0..owner.len() {
            for y in x + 1..owner.len() {
                let (a, b) = (owner[x], owner[y]);
                if a == b || u.incompatible(&self.members[a].0, &self.members[b].0) {
                    edges.push((x, y));
                }
            }
        }
        super::IncompatibilityGraph::new(owner.len(), edges).expect("pairs are distinct and ordered")
    }
}

/// `phi_hat(H) * prod w^k / k!` for a cluster whose expanded incompatibility
/// graph is connected.
pub fn cluster_term<U>(c: &Cluster<U::Polymer>, u: &U) -> Result<Complex64>
where
    U: PolymerUniverse + ?Sized,
{
    let support = c.support_graph(u);
    if !support.is_connected() {
        return Err(validation("cluster incompatibility graph is disconnected"));
    }
    if support.nodes() > 64 {
        return Err(Error::Guard("clusters are limited to 64 distinct polymers".into()));
    }
    let mut rows = vec![0u64; support.nodes()];
    for &(a, b) in support.edges() {
        rows[a] |= 1 << b;
        rows[b] |= 1 << a;
    }
    let counts: Vec<u32> = c.members.iter().map(|&(_, k)| k).collect();
    let hat = UrsellMemo::default().phi_hat(&rows, &counts);
    let hat = hat.to_f64().unwrap_or(f64::NAN);
    let mut term = Complex64::new(hat, 0.0);
    for (p, k) in &c.members {
        term *= u.weight(p)?.powu(*k) / factorial_f64(*k);
    }
    Ok(term)
}

pub(crate) fn factorial_f64(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// Every cluster with `total_size <= m`, each once, sorted.
pub fn enumerate_clusters<U>(u: &U, m: usize) -> Result<Vec<Cluster<U::Polymer>>>
where
    U: PolymerUniverse + ?Sized,
{
    let table = PolymerTable::build(u, m, false)?;
    let mut scratch = Scratch::new(table.len());
    let mut out = Vec::new();
    for root in 0..table.len() {
        walk_root(&table, m, root, &mut scratch, |support, _rows, counts, _size| {
            let members = support
                .iter()
                .zip(counts)
                .map(|(&i, &k)| (table.polymers[i].clone(), k));
            out.push(Cluster::new(members).expect("walk emits positive counts"));
            true
        })?;
    }
    out.sort();
    Ok(out)
}

/// Polymers and multiset clusters counted by total size; index 0 is unused.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClusterCounts {
    pub polymers_by_size: Vec<u64>,
    pub clusters_by_size: Vec<u64>,
}

/// Counts clusters with total size at most `max_size`, failing with
/// [`Error::Guard`] once more than `limit` clusters have been seen.
pub fn cluster_counts<U>(u: &U, max_size: usize, limit: u64) -> Result<ClusterCounts>
where
    U: PolymerUniverse + ?Sized,
{
    let table = PolymerTable::build(u, max_size, false)?;
    let mut polymers_by_size = vec![0u64; max_size + 1];
    for &s in &table.sizes {
        polymers_by_size[s] += 1;
    }
    let mut clusters_by_size = vec![0u64; max_size + 1];
    let mut seen = 0u64;
    let mut scratch = Scratch::new(table.len());
    for root in 0..table.len() {
        let done = walk_root(&table, max_size, root, &mut scratch, |_, _, _, size| {
            clusters_by_size[size] += 1;
            seen += 1;
            seen <= limit
        })?;
        if !done {
            return Err(Error::Guard(format!(
                "more than {limit} clusters up to size {max_size}; lower the order"
            )));
        }
    }
    Ok(ClusterCounts {
        polymers_by_size,
        clusters_by_size,
    })
}

/// Reusable flags for the support search; left clean after each root.
pub(crate) struct Scratch {
    in_set: Vec<bool>,
    forbidden: Vec<bool>,
    queued: Vec<bool>,
}

impl Scratch {
    pub fn new(n: usize) -> Self {
        Scratch {
            in_set: vec![false; n],
            forbidden: vec![false; n],
            queued: vec![false; n],
        }
    }
}

/// Calls `visit(support, rows, counts, total_size)` for every cluster whose
/// smallest polymer index is `root` and whose total size is at most
/// `budget`. `support` lists distinct polymer indices with `root` first,
/// `rows` is their incompatibility adjacency as bitmasks. The walk stops as
/// soon as `visit` returns `false`; the result says whether it completed.
pub(crate) fn walk_root<P, F>(
    table: &PolymerTable<P>,
    budget: usize,
    root: usize,
    scratch: &mut Scratch,
    visit: F,
) -> Result<bool>
where
    F: FnMut(&[usize], &[u64], &[u32], usize) -> bool,
{
    if table.sizes[root] > budget {
        return Ok(true);
    }
    let mut walk = Walk {
        table,
        budget,
        root,
        scratch,
        support: vec![root],
        rows: vec![0],
        size: table.sizes[root],
        overflow: false,
        stopped: false,
        visit,
    };
    walk.scratch.in_set[root] = true;
    walk.emit();
    let start = walk.fresh_neighbours(root);
    walk.extend(start);
    walk.scratch.in_set[root] = false;
    if walk.overflow {
        return Err(Error::Guard("cluster support exceeds 64 distinct polymers".into()));
    }
    Ok(!walk.stopped)
}

struct Walk<'a, P, F> {
    table: &'a PolymerTable<P>,
    budget: usize,
    root: usize,
    scratch: &'a mut Scratch,
    support: Vec<usize>,
    rows: Vec<u64>,
    size: usize,
    overflow: bool,
    stopped: bool,
    visit: F,
}

impl<P, F> Walk<'_, P, F>
where
    F: FnMut(&[usize], &[u64], &[u32], usize) -> bool,
{
    fn fresh_neighbours(&mut self, e: usize) -> Vec<usize> {
        let mut added = Vec::new();
        for &n in &self.table.adjacency[e] {
            let s = &mut *self.scratch;
            if n > self.root && !s.in_set[n] && !s.forbidden[n] && !s.queued[n] {
                s.queued[n] = true;
                added.push(n);
            }
        }
        added
    }

    // Same extension/exclusion scheme as the edge-subset search, with a
    // size budget: a candidate that does not fit now never fits deeper.
    fn extend(&mut self, mut candidates: Vec<usize>) {
        let mut popped = Vec::new();
        while let Some(e) = candidates.pop() {
            self.scratch.queued[e] = false;
            if self.stopped {
                self.scratch.forbidden[e] = true;
                popped.push(e);
                continue;
            }
            let fits = self.size + self.table.sizes[e] <= self.budget;
            if fits && self.support.len() == 64 {
                self.overflow = true;
            } else if fits {
                self.push(e);
                self.emit();
                let added = self.fresh_neighbours(e);
                let mut next = candidates.clone();
                next.extend_from_slice(&added);
                self.extend(next);
                for n in added {
                    self.scratch.queued[n] = false;
                }
                for &c in &candidates {
                    self.scratch.queued[c] = true;
                }
                self.pop();
            }
            self.scratch.forbidden[e] = true;
            popped.push(e);
        }
        for e in popped {
            self.scratch.forbidden[e] = false;
        }
    }

    fn push(&mut self, e: usize) {
        let t = self.support.len();
        let adj = &self.table.adjacency[e];
        let mut row = 0u64;
        for (j, &s) in self.support.iter().enumerate() {
            if adj.binary_search(&s).is_ok() {
                row |= 1 << j;
                self.rows[j] |= 1 << t;
            }
        }
        self.support.push(e);
        self.rows.push(row);
        self.size += self.table.sizes[e];
        self.scratch.in_set[e] = true;
    }

    fn pop(&mut self) {
        let e = self.support.pop().expect("non-empty support");
        self.rows.pop();
        let t = self.support.len();
        for r in &mut self.rows {
            *r &= !(1 << t);
        }
        self.size -= self.table.sizes[e];
        self.scratch.in_set[e] = false;
    }

    fn emit(&mut self) {
        let mut counts = vec![1u32; self.support.len()];
        let spare = self.budget - self.size;
        self.multiplicities(0, spare, &mut counts);
    }

    fn multiplicities(&mut self, i: usize, spare: usize, counts: &mut Vec<u32>) {
        if self.stopped {
            return;
        }
        if i == counts.len() {
            let total = self.budget - spare;
            self.stopped = !(self.visit)(&self.support, &self.rows, counts, total);
            return;
        }
        let s = self.table.sizes[self.support[i]];
        let mut left = spare;
        loop {
            self.multiplicities(i + 1, left, counts);
            if left < s {
                break;
            }
            left -= s;
            counts[i] += 1;
        }
        counts[i] = 1;
    }
}

/// Per-size sums of cluster terms for one root, with a term memo shared
/// across roots on the same worker.
pub(crate) fn root_sums<P>(
    table: &PolymerTable<P>,
    budget: usize,
    root: usize,
    scratch: &mut Scratch,
    memo: &mut UrsellMemo,
) -> Result<(Vec<Complex64>, Vec<u64>)> {
    let mut sums = vec![super::expansion::Compensated::default(); budget + 1];
    let mut counts_by_size = vec![0u64; budget + 1];
    let mut powers: HashMap<(usize, u32), Complex64> = HashMap::new();
    walk_root(table, budget, root, scratch, |support, rows, counts, size| {
        counts_by_size[size] += 1;
        debug_assert!(bitmask_connected(rows));
        let hat = memo.phi_hat_f64(rows, counts);
        let mut term = Complex64::new(hat, 0.0);
        for (&i, &k) in support.iter().zip(counts) {
            let f = *powers
                .entry((i, k))
                .or_insert_with(|| table.weights[i].powu(k) / factorial_f64(k));
            term *= f;
        }
        sums[size].add(term);
        true
    })?;
    Ok((sums.iter().map(|s| s.value()).collect(), counts_by_size))
}
