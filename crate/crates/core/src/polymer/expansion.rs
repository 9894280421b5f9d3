use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::cluster::{root_sums, Scratch};
use super::graded::{root_series, GradedScratch};
use super::ursell::UrsellMemo;
use super::{PolymerTable, PolymerUniverse};
use crate::error::{Error, Result};

/// `brute_force_z` refuses universes with more polymers than this.
pub const BRUTE_FORCE_POLYMER_LIMIT: usize = 25;

/// Relative slack on the weight-decay comparison, absorbing rounding in
/// weights that sit exactly on the bound.
const DECAY_SLACK: f64 = 1e-12;

/// Neumaier-compensated complex accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Compensated {
    sum: Complex64,
    carry: Complex64,
}

impl Compensated {
    pub fn add(&mut self, x: Complex64) {
        let (re, cre) = two_sum(self.sum.re, x.re);
        let (im, cim) = two_sum(self.sum.im, x.im);
        self.sum = Complex64::new(re, im);
        self.carry += Complex64::new(cre, cim);
    }

    pub fn value(&self) -> Complex64 {
        self.sum + self.carry
    }
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = if a.abs() >= b.abs() { (a - s) + b } else { (b - s) + a };
    (s, err)
}

/// Smallest `m` with `graph_order * e^(-m/2) <= epsilon / 2`, i.e.
/// `ceil(2 ln(2 |G| / epsilon))`. The ε/2 log budget keeps the final
/// multiplicative error below ε because `|e^d - 1| <= 2|d|` for `|d| <= 1/2`.
pub fn truncation_order(graph_order: usize, epsilon: f64) -> Result<usize> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::Epsilon(epsilon));
    }
    if graph_order == 0 {
        return Err(crate::error::validation("graph order must be positive"));
    }
    let m = (2.0 * (2.0 * graph_order as f64 / epsilon).ln()).ceil();
    Ok((m as usize).max(1))
}

/// Cluster-term sums grouped by total cluster size, computed root by root
/// as truncated power series.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionTerms {
    /// `by_size[s]` sums the terms of clusters with total size `s`; entry 0
    /// is always zero.
    pub by_size: Vec<Complex64>,
    /// Partial sums evaluated over all roots.
    pub states_evaluated: u64,
    pub polymers: usize,
}

impl ExpansionTerms {
    /// `T_m`: clusters of total size at most `m - 1`.
    pub fn truncated(&self, m: usize) -> Complex64 {
        sum_below(&self.by_size, m)
    }

    pub fn max_size(&self) -> usize {
        self.by_size.len().saturating_sub(1)
    }
}

fn sum_below(by_size: &[Complex64], m: usize) -> Complex64 {
    let mut acc = Compensated::default();
    for &t in by_size.iter().take(m) {
        acc.add(t);
    }
    acc.value()
}

/// Sums of cluster terms for every total size up to `max_size`. Roots are
/// processed in parallel and combined in canonical order, so the result does
/// not depend on the worker count.
pub fn expansion_terms<U>(u: &U, max_size: usize) -> Result<ExpansionTerms>
where
    U: PolymerUniverse + ?Sized,
{
    let table = PolymerTable::build(u, max_size, true)?;
    let n = table.len();
    let per_root: Vec<(Vec<Complex64>, u64)> = (0..n)
        .into_par_iter()
        .map_init(
            || GradedScratch::new(n),
            |scratch, root| root_series(&table, max_size, root, scratch),
        )
        .collect();

    let mut sums = vec![Compensated::default(); max_size + 1];
    let mut states = 0u64;
    for (series, count) in &per_root {
        for (acc, &t) in sums.iter_mut().zip(series) {
            acc.add(t);
        }
        states += count;
    }
    Ok(ExpansionTerms {
        by_size: sums.iter().map(Compensated::value).collect(),
        states_evaluated: states,
        polymers: n,
    })
}

/// The same per-size sums obtained by listing every multiset cluster and
/// evaluating its Ursell term. Exponentially slower than
/// [`expansion_terms`]; kept as an independent reference and for cluster
/// statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterSums {
    pub by_size: Vec<Complex64>,
    pub clusters_by_size: Vec<u64>,
    pub polymers: usize,
}

impl ClusterSums {
    pub fn truncated(&self, m: usize) -> Complex64 {
        sum_below(&self.by_size, m)
    }

    pub fn clusters_below(&self, m: usize) -> u64 {
        self.clusters_by_size.iter().take(m).sum()
    }
}

pub fn cluster_sums<U>(u: &U, max_size: usize) -> Result<ClusterSums>
where
    U: PolymerUniverse + ?Sized,
{
    let table = PolymerTable::build(u, max_size, true)?;
    let n = table.len();
    let per_root: Vec<(Vec<Complex64>, Vec<u64>)> = (0..n)
        .into_par_iter()
        .map_init(
            || (Scratch::new(n), UrsellMemo::default()),
            |(scratch, memo), root| root_sums(&table, max_size, root, scratch, memo),
        )
        .collect::<Result<_>>()?;

    let mut sums = vec![Compensated::default(); max_size + 1];
    let mut counts = vec![0u64; max_size + 1];
    for (root_sum, root_count) in &per_root {
        for s in 0..=max_size {
            sums[s].add(root_sum[s]);
            counts[s] += root_count[s];
        }
    }
    Ok(ClusterSums {
        by_size: sums.iter().map(Compensated::value).collect(),
        clusters_by_size: counts,
        polymers: n,
    })
}

/// `T_m`, the sum of cluster terms over clusters of total size `<= m - 1`.
pub fn truncated_expansion<U>(u: &U, m: usize) -> Result<Complex64>
where
    U: PolymerUniverse + ?Sized,
{
    if m <= 1 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(expansion_terms(u, m - 1)?.truncated(m))
}

/// A verdict on some sufficient condition for convergence: a
/// [`WeightDecayReport`] or a problem-level condition report.
pub trait AdmissionEvidence {
    fn satisfied(&self) -> bool;
    fn describe(&self) -> String;
}

impl AdmissionEvidence for WeightDecayReport {
    fn satisfied(&self) -> bool {
        self.satisfied
    }

    fn describe(&self) -> String {
        WeightDecayReport::describe(self)
    }
}

/// How the convergence hypothesis was established before approximating.
#[derive(Clone, Copy)]
pub enum Admission<'a> {
    Checked(&'a dyn AdmissionEvidence),
    /// Proceed without a passing check; results carry `forced = true`.
    Forced,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Approximation {
    /// `exp(T_m)`.
    pub value: Complex64,
    pub log_value: Complex64,
    pub truncation_order: usize,
    /// Partial sums evaluated by the engine.
    pub states_evaluated: u64,
    pub polymers: usize,
    pub forced: bool,
}

/// `exp(T_m)` with `m = truncation_order(graph_order, epsilon)`.
pub fn approximate_z<U>(u: &U, graph_order: usize, epsilon: f64, admission: Admission<'_>) -> Result<Approximation>
where
    U: PolymerUniverse + ?Sized,
{
    let m = truncation_order(graph_order, epsilon)?;
    approximate_z_at_order(u, m, admission)
}

/// `exp(T_m)` at an explicit truncation order.
pub fn approximate_z_at_order<U>(u: &U, m: usize, admission: Admission<'_>) -> Result<Approximation>
where
    U: PolymerUniverse + ?Sized,
{
    let forced = match admission {
        Admission::Checked(report) if report.satisfied() => false,
        Admission::Checked(report) => {
            return Err(Error::Condition(report.describe()));
        }
        Admission::Forced => true,
    };
    if m == 0 {
        return Err(crate::error::validation("truncation order must be positive"));
    }
    let (log_value, states, polymers) = if m == 1 {
        (Complex64::new(0.0, 0.0), 0, 0)
    } else {
        let terms = expansion_terms(u, m - 1)?;
        (terms.truncated(m), terms.states_evaluated, terms.polymers)
    };
    Ok(Approximation {
        value: log_value.exp(),
        log_value,
        truncation_order: m,
        states_evaluated: states,
        polymers,
        forced,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightViolation {
    pub polymer: String,
    pub size: usize,
    pub weight_abs: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightDecayReport {
    pub satisfied: bool,
    pub bound_base: f64,
    pub max_size: usize,
    pub polymers_checked: usize,
    /// Largest `|w| / bound_base^size` seen.
    pub worst_ratio: f64,
    pub violations: usize,
    pub first_violation: Option<WeightViolation>,
}

impl WeightDecayReport {
    pub fn describe(&self) -> String {
        match &self.first_violation {
            Some(v) => format!(
                "weight decay fails: |w| = {:e} > {:e} for polymer {} of size {} ({} violations)",
                v.weight_abs, v.bound, v.polymer, v.size, self.violations
            ),
            None => format!(
                "weight decay holds with base {:e} up to size {}",
                self.bound_base, self.max_size
            ),
        }
    }
}

/// Checks `|w| <= bound_base^size` for every polymer of size at most
/// `max_size`.
pub fn weight_decay_check<U>(u: &U, bound_base: f64, max_size: usize) -> Result<WeightDecayReport>
where
    U: PolymerUniverse + ?Sized,
{
    let polymers = u.polymers(max_size);
    let weights = u.weights(&polymers)?;
    let mut report = WeightDecayReport {
        satisfied: true,
        bound_base,
        max_size,
        polymers_checked: polymers.len(),
        worst_ratio: 0.0,
        violations: 0,
        first_violation: None,
    };
    for (p, w) in polymers.iter().zip(&weights) {
        let size = u.size(p);
        let bound = bound_base.powi(size as i32);
        let abs = w.norm();
        let ratio = if bound > 0.0 {
            abs / bound
        } else if abs == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        report.worst_ratio = report.worst_ratio.max(ratio);
        if abs.is_nan() || abs > bound * (1.0 + DECAY_SLACK) {
            report.satisfied = false;
            report.violations += 1;
            if report.first_violation.is_none() {
                report.first_violation = Some(WeightViolation {
                    polymer: format!("{p:?}"),
                    size,
                    weight_abs: abs,
                    bound,
                });
            }
        }
    }
    Ok(report)
}

/// Sum over pairwise compatible sets of polymers of size `<= m` of their
/// weight products.
pub fn brute_force_z<U>(u: &U, m: usize) -> Result<Complex64>
where
    U: PolymerUniverse + ?Sized,
{
    let table = PolymerTable::build(u, m, true)?;
    let n = table.len();
    if n > BRUTE_FORCE_POLYMER_LIMIT {
        return Err(Error::Guard(format!(
            "{n} polymers exceed the brute-force limit of {BRUTE_FORCE_POLYMER_LIMIT}"
        )));
    }
    let conflicts: Vec<u32> = table
        .adjacency
        .iter()
        .enumerate()
        .map(|(i, adj)| adj.iter().fold(1u32 << i, |acc, &j| acc | 1 << j))
        .collect();
    let mut acc = Compensated::default();
    compatible_sets(&table.weights, &conflicts, 0, 0, Complex64::new(1.0, 0.0), &mut acc);
    Ok(acc.value())
}

fn compatible_sets(
    weights: &[Complex64],
    conflicts: &[u32],
    i: usize,
    blocked: u32,
    product: Complex64,
    acc: &mut Compensated,
) {
    if i == weights.len() {
        acc.add(product);
        return;
    }
    compatible_sets(weights, conflicts, i + 1, blocked, product, acc);
    if blocked >> i & 1 == 0 {
        compatible_sets(
            weights,
            conflicts,
            i + 1,
            blocked | conflicts[i],
            product * weights[i],
            acc,
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{EdgeSubset, MultiHypergraph};
    use crate::polymer::SubgraphUniverse;

    fn single_edge() -> MultiHypergraph {
        MultiHypergraph::builder()
            .vertex("a", 2)
            .vertex("b", 2)
            .edge(1, ["a", "b"])
            .build()
            .unwrap()
    }

    fn constant(w: Complex64) -> impl Fn(&EdgeSubset) -> Result<Complex64> + Sync {
        move |_| Ok(w)
    }

    #[test]
    fn truncation_order_examples() {
        assert_eq!(truncation_order(10, 0.01).unwrap(), 16);
        assert_eq!(truncation_order(1, 1.0).unwrap(), 2);
        assert_eq!(truncation_order(100, 0.001).unwrap(), 25);
        assert!(truncation_order(1, 0.0).is_err());
        assert!(truncation_order(1, 1.5).is_err());
        assert!(truncation_order(1, f64::NAN).is_err());
        assert!(truncation_order(0, 0.5).is_err());
    }

    #[test]
    fn single_polymer_log_series() {
        let g = single_edge();
        for w in [0.5, -0.3, 0.2] {
            let u = SubgraphUniverse::new(&g, constant(Complex64::new(w, 0.0)));
            for m in 1..=8usize {
                let t = truncated_expansion(&u, m).unwrap();
                let series: f64 = (1..m).map(|k| -(-w).powi(k as i32) / k as f64).sum();
                assert!((t.re - series).abs() < 1e-14, "m={m} w={w}");
                assert_eq!(t.im, 0.0);
            }
        }
    }

    #[test]
    fn order_one_is_zero() {
        let g = single_edge();
        let u = SubgraphUniverse::new(&g, constant(Complex64::new(0.4, 0.0)));
        assert_eq!(truncated_expansion(&u, 1).unwrap(), Complex64::new(0.0, 0.0));
    }

    // Weight depending on the polymer, so that no two sizes share a value.
    fn varied(p: &EdgeSubset) -> Result<Complex64> {
        let s: usize = p.positions().iter().map(|&i| i + 1).sum();
        Ok(Complex64::new(0.03 * (s as f64).sin(), 0.02 * (p.len() as f64).cos()))
    }

    #[test]
    fn series_engine_matches_cluster_listing() {
        let hosts = [
            MultiHypergraph::qubits(4)
                .edge(1, ["q0", "q1"])
                .edge(2, ["q1", "q2"])
                .edge(3, ["q2", "q3"])
                .edge(4, ["q3", "q0"])
                .edge(5, ["q0", "q2"])
                .build()
                .unwrap(),
            MultiHypergraph::qubits(4)
                .edge(1, ["q0", "q1", "q2"])
                .edge(2, ["q1", "q2"])
                .edge(3, ["q2", "q3"])
                .edge(4, ["q2", "q3"])
                .build()
                .unwrap(),
        ];
        for g in &hosts {
            let u = SubgraphUniverse::new(g, varied);
            let fast = expansion_terms(&u, 5).unwrap();
            let slow = cluster_sums(&u, 5).unwrap();
            assert_eq!(fast.polymers, slow.polymers);
            for (s, (a, b)) in fast.by_size.iter().zip(&slow.by_size).enumerate() {
                assert!((a - b).norm() < 1e-15, "size {s}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn series_engine_converges_to_log_z() {
        let g = MultiHypergraph::qubits(3)
            .edge(1, ["q0", "q1"])
            .edge(2, ["q1", "q2"])
            .edge(3, ["q2", "q0"])
            .build()
            .unwrap();
        let u = SubgraphUniverse::new(&g, varied);
        let exact = brute_force_z(&u, 3).unwrap().ln();
        let t = truncated_expansion(&u, 30).unwrap();
        assert!((t - exact).norm() < 1e-15);
    }

    #[test]
    fn approximate_single_edge() {
        let g = single_edge();
        let u = SubgraphUniverse::new(&g, constant(Complex64::new(-0.01, 0.0)));
        let a = approximate_z(&u, 1, 1e-6, Admission::Forced).unwrap();
        assert!(((a.value.re - 0.99) / 0.99).abs() <= 1e-6);
        assert!(a.forced);
    }

    #[test]
    fn zero_weights_give_one() {
        let g = single_edge();
        let u = SubgraphUniverse::new(&g, constant(Complex64::new(0.0, 0.0)));
        let report = weight_decay_check(&u, 0.01, 4).unwrap();
        assert!(report.satisfied);
        let a = approximate_z(&u, 1, 1e-3, Admission::Checked(&report)).unwrap();
        assert_eq!(a.value, Complex64::new(1.0, 0.0));
        assert!(!a.forced);
    }

    #[test]
    fn failing_check_blocks_approximation() {
        let g = single_edge();
        let u = SubgraphUniverse::new(&g, constant(Complex64::new(0.5, 0.0)));
        let report = weight_decay_check(&u, 0.1, 3).unwrap();
        assert!(!report.satisfied);
        let v = report.first_violation.as_ref().unwrap();
        assert_eq!((v.weight_abs, v.bound), (0.5, 0.1));
        assert!(matches!(
            approximate_z(&u, 1, 0.1, Admission::Checked(&report)),
            Err(Error::Condition(_))
        ));
    }

    #[test]
    fn brute_force_basics() {
        let g = single_edge();
        let w = Complex64::new(0.25, -0.5);
        let u = SubgraphUniverse::new(&g, constant(w));
        assert_eq!(brute_force_z(&u, 3).unwrap(), Complex64::new(1.0, 0.0) + w);
        let empty = MultiHypergraph::builder().vertex("a", 2).build().unwrap();
        let u = SubgraphUniverse::new(&empty, constant(w));
        assert_eq!(brute_force_z(&u, 3).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut acc = Compensated::default();
        acc.add(Complex64::new(1.0, 0.0));
        for _ in 0..10 {
            acc.add(Complex64::new(1e-17, 0.0));
        }
        acc.add(Complex64::new(-1.0, 0.0));
        assert!((acc.value().re - 1e-16).abs() < 1e-30);
    }
}
