//! Ursell functions of incompatibility graphs.
//!
//! `phi_hat(H)` denotes the signed count of spanning connected edge subsets,
//! `sum_S (-1)^|S|`, so that `phi(H) = phi_hat(H) / |V(H)|!`. Three
//! independent routes compute it: direct subset enumeration, the Tutte
//! identity `phi_hat(H) = (-1)^(|V|-1) T_H(1, 0)`, and a multiplicity-aware
//! recursion used by the expansion engine on clusters with repeated polymers.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{validation, Error, Result};

/// Subset enumeration is exponential in the edge count; beyond this the
/// reference route refuses.
const SUBSET_EDGE_LIMIT: usize = 26;

/// Simple undirected graph on `0..nodes`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncompatibilityGraph {
    nodes: usize,
    edges: Vec<(usize, usize)>,
}

impl IncompatibilityGraph {
    /// Loops and duplicate edges are rejected.
    pub fn new(nodes: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut norm: Vec<(usize, usize)> = Vec::new();
        for (a, b) in edges {
            if a >= nodes || b >= nodes {
                return Err(validation(format!("edge ({a}, {b}) out of range")));
            }
            if a == b {
                return Err(validation(format!("loop at node {a}")));
            }
            norm.push((a.min(b), a.max(b)));
        }
        norm.sort_unstable();
        let before = norm.len();
        norm.dedup();
        if norm.len() != before {
            return Err(validation("duplicate edge in incompatibility graph"));
        }
        Ok(IncompatibilityGraph { nodes, edges: norm })
    }

    pub fn complete(nodes: usize) -> Self {
        let edges = (0..nodes).flat_map(|a| (a + 1..nodes).map(move |b| (a, b))).collect();
        IncompatibilityGraph { nodes, edges }
    }

    pub fn path(nodes: usize) -> Self {
        let edges = (1..nodes).map(|b| (b - 1, b)).collect();
        IncompatibilityGraph { nodes, edges }
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_connected(&self) -> bool {
        self.nodes > 0 && spans_connected(self.nodes, self.edges.iter().copied())
    }
}

fn spans_connected(nodes: usize, edges: impl Iterator<Item = (usize, usize)>) -> bool {
    let mut parent: Vec<usize> = (0..nodes).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut components = nodes;
    for (a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            components -= 1;
        }
    }
    components == 1
}

fn require_connected(h: &IncompatibilityGraph) -> Result<()> {
    if h.is_connected() {
        Ok(())
    } else {
        Err(validation("Ursell function needs a non-empty connected graph"))
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `phi_hat` by summing over all edge subsets that span a connected graph.
pub fn phi_hat_by_subsets(h: &IncompatibilityGraph) -> Result<BigInt> {
    require_connected(h)?;
    let m = h.edges.len();
    if m > SUBSET_EDGE_LIMIT {
        return Err(Error::Guard(format!(
            "subset enumeration over {m} edges exceeds {SUBSET_EDGE_LIMIT}"
        )));
    }
    let mut total: i64 = 0;
    for mask in 0u64..(1u64 << m) {
        let chosen = (0..m).filter(|&i| mask >> i & 1 == 1).map(|i| h.edges[i]);
        if spans_connected(h.nodes, chosen) {
            total += if mask.count_ones() % 2 == 0 { 1 } else { -1 };
        }
    }
    Ok(BigInt::from(total))
}

/// `T_H(1, 0)` by deletion and contraction; `H` must be connected.
pub fn tutte_at_one_zero(h: &IncompatibilityGraph) -> Result<BigUint> {
    require_connected(h)?;
    Ok(tutte_rec(h.edges.clone()))
}

// Multigraph recursion at (x, y) = (1, 0): a loop kills the term, a bridge
// contributes x = 1 times the contraction, anything else splits.
fn tutte_rec(edges: Vec<(usize, usize)>) -> BigUint {
    if edges.iter().any(|&(a, b)| a == b) {
        return BigUint::zero();
    }
    let Some(&(a, b)) = edges.first() else {
        return BigUint::one();
    };
    let rest = &edges[1..];
    let contracted: Vec<(usize, usize)> = rest
        .iter()
        .map(|&(x, y)| {
            let x = if x == b { a } else { x };
            let y = if y == b { a } else { y };
            (x, y)
        })
        .collect();
    if is_bridge(a, b, rest) {
        tutte_rec(contracted)
    } else {
        tutte_rec(rest.to_vec()) + tutte_rec(contracted)
    }
}

fn is_bridge(a: usize, b: usize, rest: &[(usize, usize)]) -> bool {
    let mut seen = vec![a];
    let mut stack = vec![a];
    while let Some(x) = stack.pop() {
        for &(u, v) in rest {
            let other = if u == x {
                v
            } else if v == x {
                u
            } else {
                continue;
            };
            if other == b {
                return false;
            }
            if !seen.contains(&other) {
                seen.push(other);
                stack.push(other);
            }
        }
    }
    true
}

/// Ursell function via subset enumeration.
pub fn ursell_by_subsets(h: &IncompatibilityGraph) -> Result<BigRational> {
    let hat = phi_hat_by_subsets(h)?;
    Ok(BigRational::new(hat, factorial(h.nodes)))
}

/// Ursell function via the Tutte polynomial at (1, 0).
pub fn ursell_by_tutte(h: &IncompatibilityGraph) -> Result<BigRational> {
    let t = BigInt::from(tutte_at_one_zero(h)?);
    let signed = if h.nodes % 2 == 1 { t } else { -t };
    Ok(BigRational::new(signed, factorial(h.nodes)))
}

/// Ursell function; uses the Tutte route.
pub fn ursell(h: &IncompatibilityGraph) -> Result<BigRational> {
    ursell_by_tutte(h)
}

/// `phi_hat` of the cluster graph obtained by taking `counts[i]` copies of
/// node `i` of `adjacency` (copies of one node are pairwise adjacent, copies
/// of adjacent nodes are adjacent). `adjacency` must be connected and every
/// count positive.
pub fn multiset_phi_hat(adjacency: &IncompatibilityGraph, counts: &[u32]) -> Result<BigInt> {
    if counts.len() != adjacency.nodes || counts.contains(&0) {
        return Err(validation("counts must be positive, one per node"));
    }
    require_connected(adjacency)?;
    if adjacency.nodes > 64 {
        return Err(Error::Guard("multiset Ursell limited to 64 distinct nodes".into()));
    }
    let mut rows = vec![0u64; adjacency.nodes];
    for &(a, b) in &adjacency.edges {
        rows[a] |= 1 << b;
        rows[b] |= 1 << a;
    }
    let mut memo = UrsellMemo::default();
    Ok(memo.phi_hat(&rows, counts))
}

/// Memo for the multiplicity recursion, keyed on the re-indexed adjacency
/// rows and multiplicities.
#[derive(Default)]
pub(crate) struct UrsellMemo {
    small: HashMap<(Vec<u64>, Vec<u32>), i128>,
    big: HashMap<(Vec<u64>, Vec<u32>), BigInt>,
}

impl UrsellMemo {
    /// Exact `phi_hat`; tries `i128` first and falls back to `BigInt` on
    /// overflow.
    pub fn phi_hat(&mut self, rows: &[u64], counts: &[u32]) -> BigInt {
        match self.phi_hat_small(rows, counts) {
            Some(v) => BigInt::from(v),
            None => self.phi_hat_big(rows, counts),
        }
    }

    pub fn phi_hat_f64(&mut self, rows: &[u64], counts: &[u32]) -> f64 {
        match self.phi_hat_small(rows, counts) {
            Some(v) => v as f64,
            None => self.phi_hat_big(rows, counts).to_f64().unwrap_or(f64::NAN),
        }
    }

    fn phi_hat_small(&mut self, rows: &[u64], counts: &[u32]) -> Option<i128> {
        recurse::<i128>(rows, counts, &mut self.small)
    }

    fn phi_hat_big(&mut self, rows: &[u64], counts: &[u32]) -> BigInt {
        recurse::<BigInt>(rows, counts, &mut self.big).expect("BigInt arithmetic cannot overflow")
    }
}

trait Exact: Clone {
    fn zero() -> Self;
    fn from_u64(v: u64) -> Self;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn neg(&self) -> Self;
}

impl Exact for i128 {
    fn zero() -> Self {
        0
    }
    fn from_u64(v: u64) -> Self {
        v as i128
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl Exact for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn from_u64(v: u64) -> Self {
        BigInt::from(v)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn neg(&self) -> Self {
        -self
    }
}

// c(k) counts signed spanning connected subgraphs of the blown-up graph.
// Removing the component of a distinguished copy of node 0 and grouping the
// remaining spanning connected subgraphs by which copies neighbour it gives
//   c(k) = [k is one copy] - sum_I prod_{i in I} (k_i - [i = 0]) c(k - 1_I)
// over non-empty independent sets I of the node graph, where the blown-up
// graph minus the chosen copies must stay connected.
fn recurse<T: Exact>(rows: &[u64], counts: &[u32], memo: &mut HashMap<(Vec<u64>, Vec<u32>), T>) -> Option<T> {
    let p = counts.len();
    if p == 1 {
        let n = counts[0] as u64;
        let mut f = T::from_u64(1);
        for j in 1..n {
            f = f.mul(&T::from_u64(j))?;
        }
        return Some(if n % 2 == 1 { f } else { f.neg() });
    }
    let key = (rows.to_vec(), counts.to_vec());
    if let Some(v) = memo.get(&key) {
        return Some(v.clone());
    }

    let mut total = T::zero();
    let mut sets = Vec::new();
    independent_sets(rows, 0, 0, 0, &mut sets);
    for set in sets {
        if set & 1 == 1 && counts[0] < 2 {
            continue;
        }
        let mut coeff = T::from_u64(1);
        let mut next = counts.to_vec();
        for (i, c) in next.iter_mut().enumerate() {
            if set >> i & 1 == 1 {
                let avail = *c as u64 - u64::from(i == 0);
                coeff = coeff.mul(&T::from_u64(avail))?;
                *c -= 1;
            }
        }
        let keep: Vec<usize> = (0..p).filter(|&i| next[i] > 0).collect();
        let sub_rows = reindex(rows, &keep);
        if !bitmask_connected(&sub_rows) {
            continue;
        }
        let sub_counts: Vec<u32> = keep.iter().map(|&i| next[i]).collect();
        let inner = recurse(&sub_rows, &sub_counts, memo)?;
        total = total.sub(&coeff.mul(&inner)?)?;
    }
    memo.insert(key, total.clone());
    Some(total)
}

fn independent_sets(rows: &[u64], i: usize, chosen: u64, blocked: u64, out: &mut Vec<u64>) {
    if i == rows.len() {
        if chosen != 0 {
            out.push(chosen);
        }
        return;
    }
    independent_sets(rows, i + 1, chosen, blocked, out);
    if blocked >> i & 1 == 0 {
        independent_sets(rows, i + 1, chosen | 1 << i, blocked | rows[i], out);
    }
}

pub(crate) fn reindex(rows: &[u64], keep: &[usize]) -> Vec<u64> {
    keep.iter()
        .map(|&old| {
            keep.iter()
                .enumerate()
                .filter(|&(_, &o)| rows[old] >> o & 1 == 1)
                .fold(0u64, |acc, (new, _)| acc | 1 << new)
        })
        .collect()
}

pub(crate) fn bitmask_connected(rows: &[u64]) -> bool {
    let p = rows.len();
    if p == 0 {
        return false;
    }
    let full = if p == 64 { u64::MAX } else { (1u64 << p) - 1 };
    let mut seen = 1u64;
    let mut frontier = 1u64;
    while frontier != 0 {
        let i = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let fresh = rows[i] & !seen;
        seen |= fresh;
        frontier |= fresh;
    }
    seen == full
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn small_values() {
        let k1 = IncompatibilityGraph::complete(1);
        let k2 = IncompatibilityGraph::complete(2);
        let k3 = IncompatibilityGraph::complete(3);
        let p3 = IncompatibilityGraph::path(3);
        for f in [ursell_by_subsets, ursell_by_tutte] {
            assert_eq!(f(&k1).unwrap(), rat(1, 1));
            assert_eq!(f(&k2).unwrap(), rat(-1, 2));
            assert_eq!(f(&k3).unwrap(), rat(1, 3));
            assert_eq!(f(&p3).unwrap(), rat(1, 6));
        }
    }

    #[test]
    fn complete_graph_closed_form() {
        for n in 1..=6usize {
            let k = IncompatibilityGraph::complete(n);
            let expect = {
                let f = factorial(n - 1);
                if n % 2 == 1 {
                    f
                } else {
                    -f
                }
            };
            assert_eq!(phi_hat_by_subsets(&k).unwrap(), expect);
            assert_eq!(BigInt::from(tutte_at_one_zero(&k).unwrap()), factorial(n - 1));
        }
    }

    #[test]
    fn disconnected_rejected() {
        let h = IncompatibilityGraph::new(3, [(0, 1)]).unwrap();
        assert!(ursell(&h).is_err());
        assert!(ursell_by_subsets(&h).is_err());
        assert!(!IncompatibilityGraph::new(0, []).unwrap().is_connected());
        assert!(IncompatibilityGraph::new(2, [(0, 0)]).is_err());
        assert!(IncompatibilityGraph::new(2, [(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn multiset_single_node_is_complete_graph() {
        let one = IncompatibilityGraph::complete(1);
        for k in 1..=7u32 {
            let direct = phi_hat_by_subsets(&IncompatibilityGraph::complete(k as usize)).unwrap();
            assert_eq!(multiset_phi_hat(&one, &[k]).unwrap(), direct);
        }
    }

    // Blow up node i into counts[i] copies and compare against the
    // subset-enumeration route.
    fn blown_up(base: &IncompatibilityGraph, counts: &[u32]) -> IncompatibilityGraph {
        let mut owner = Vec::new();
        for (i, &c) in counts.iter().enumerate() {
            for _ in 0..c {
                owner.push(i);
            }
        }
        let adjacent = |a: usize, b: usize| a == b || base.edges().contains(&(a.min(b), a.max(b)));
        let mut edges = Vec::new();
        for x in 0..owner.len() {
            for y in x + 1..owner.len() {
                if adjacent(owner[x], owner[y]) {
                    edges.push((x, y));
                }
            }
        }
        IncompatibilityGraph::new(owner.len(), edges).unwrap()
    }

    #[test]
    fn multiset_matches_blown_up_enumeration() {
        let bases = [
            IncompatibilityGraph::path(2),
            IncompatibilityGraph::path(3),
            IncompatibilityGraph::complete(3),
            IncompatibilityGraph::new(4, [(0, 1), (1, 2), (1, 3)]).unwrap(),
            IncompatibilityGraph::new(4, [(0, 2), (1, 2), (2, 3), (0, 3)]).unwrap(),
        ];
        for base in &bases {
            let n = base.nodes();
            let mut counts = vec![1u32; n];
            loop {
                let big = blown_up(base, &counts);
                if big.edges().len() <= 18 {
                    let expect = phi_hat_by_subsets(&big).unwrap();
                    assert_eq!(multiset_phi_hat(base, &counts).unwrap(), expect, "{counts:?}");
                    let t = BigInt::from(tutte_at_one_zero(&big).unwrap());
                    assert_eq!(t, if big.nodes() % 2 == 1 { expect } else { -expect });
                }
                let mut i = 0;
                while i < n && counts[i] == 3 {
                    counts[i] = 1;
                    i += 1;
                }
                if i == n {
                    break;
                }
                counts[i] += 1;
            }
        }
    }

    #[test]
    fn bigint_fallback_agrees() {
        let one = IncompatibilityGraph::complete(1);
        // 40! overflows i128 range for phi_hat of K_41.
        let v = multiset_phi_hat(&one, &[41]).unwrap();
        assert_eq!(v, factorial(40));
        let mut memo = UrsellMemo::default();
        let rows = vec![0b10, 0b01];
        let small = memo.phi_hat(&rows, &[3, 2]);
        let big = memo.phi_hat_big(&rows, &[3, 2]);
        assert_eq!(small, big);
    }
}
