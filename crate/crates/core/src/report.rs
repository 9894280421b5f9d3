//! Condition verdicts and approximation reports shared by every problem type.

use std::f64::consts::E;
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::polymer::{
    approximate_z_at_order, truncation_order, Admission, AdmissionEvidence, Approximation, PolymerUniverse,
};

/// Accuracy target and overrides for the cluster-expansion approximators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxOptions {
    pub epsilon: f64,
    /// Overrides the truncation order derived from `epsilon`.
    pub order: Option<usize>,
    /// Proceed even when the sufficient condition fails.
    pub force: bool,
}

impl Default for ApproxOptions {
    fn default() -> Self {
        ApproxOptions::new(1e-3)
    }
}

impl ApproxOptions {
    pub fn new(epsilon: f64) -> Self {
        ApproxOptions {
            epsilon,
            order: None,
            force: false,
        }
    }

    pub fn forced(self) -> Self {
        ApproxOptions { force: true, ..self }
    }

    pub fn with_order(self, m: usize) -> Self {
        ApproxOptions { order: Some(m), ..self }
    }

    /// Truncation order for a log budget of `epsilon * share`.
    pub fn order_for(&self, graph_order: usize, share: f64) -> Result<usize> {
        // Validate the user-facing epsilon even when the order is overridden.
        let m = truncation_order(graph_order, self.epsilon)?;
        match self.order {
            Some(m) => Ok(m),
            None if share == 1.0 => Ok(m),
            None => truncation_order(graph_order, self.epsilon * share),
        }
    }

    pub(crate) fn admission<'a>(&self, conditions: &'a ConditionReport) -> Admission<'a> {
        if self.force && !conditions.passed() {
            Admission::Forced
        } else {
            Admission::Checked(conditions)
        }
    }
}

/// Runs the truncated expansion of `u` under `conditions` and assembles the
/// report; `value` is `exp(T_m)`.
pub(crate) fn run_cluster<U: PolymerUniverse + ?Sized>(
    problem: &str,
    u: &U,
    graph_order: usize,
    opts: &ApproxOptions,
    conditions: &ConditionReport,
) -> Result<(Approximation, ApproximationReport)> {
    let start = Instant::now();
    let m = opts.order_for(graph_order, 1.0)?;
    let approx = approximate_z_at_order(u, m, opts.admission(conditions))?;
    let report = ApproximationReport {
        problem: problem.to_string(),
        mode: Mode::Cluster,
        value: pair(approx.value),
        unnormalized_value: None,
        epsilon: Some(opts.epsilon),
        truncation_order: Some(m),
        clusters_evaluated: approx.states_evaluated,
        polymers: approx.polymers,
        condition: conditions.items.clone(),
        forced: approx.forced,
        elapsed: start.elapsed().as_secs_f64(),
        oracle_value: None,
        relative_error: None,
    };
    Ok((approx, report))
}

/// `1 / (e^3 Δ C(r, 2))`: gate and observable bound for amplitudes and
/// expectation values.
pub fn circuit_bound(max_degree: usize, rank: usize) -> f64 {
    1.0 / (E.powi(3) * effective_degree(max_degree) * pairs(rank))
}

/// `1 / (e^4 Δ C(r, 2))`: bound on `|β|` for partition functions and thermal
/// expectation values.
pub fn spin_bound(max_degree: usize, rank: usize) -> f64 {
    1.0 / (E.powi(4) * effective_degree(max_degree) * pairs(rank))
}

/// `1 / (e^4 Δ)`: bound on `|β|` for the Ising model.
pub fn ising_bound(max_degree: usize) -> f64 {
    1.0 / (E.powi(4) * effective_degree(max_degree))
}

// Degree 0 and rank 1 hosts have no interacting polymers; clamping keeps the
// bounds finite (and conservative) there.
fn effective_degree(max_degree: usize) -> f64 {
    max_degree.max(1) as f64
}

fn pairs(rank: usize) -> f64 {
    let r = rank.max(2) as f64;
    r * (r - 1.0) / 2.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionItem {
    pub name: String,
    pub bound: f64,
    pub observed: f64,
    pub pass: bool,
}

impl ConditionItem {
    /// Passes iff `observed <= bound` up to the admission tolerance.
    pub fn at_most(name: impl Into<String>, observed: f64, bound: f64) -> Self {
        ConditionItem {
            name: name.into(),
            bound,
            observed,
            pass: observed <= bound * (1.0 + crate::linalg::ADMISSION_TOL),
        }
    }
}

/// Verdict on a problem's sufficient condition, with the host parameters the
/// bound was computed from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    /// Graph the bound refers to (the causal intersection hypergraph for
    /// expectation values).
    pub host: String,
    pub max_degree: usize,
    pub rank: usize,
    pub bound: f64,
    pub items: Vec<ConditionItem>,
}

impl ConditionReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ConditionItem> {
        self.items.iter().filter(|i| !i.pass)
    }
}

impl AdmissionEvidence for ConditionReport {
    fn satisfied(&self) -> bool {
        self.passed()
    }

    fn describe(&self) -> String {
        let failed: Vec<String> = self
            .failures()
            .map(|i| format!("{} = {:e} exceeds {:e}", i.name, i.observed, i.bound))
            .collect();
        if failed.is_empty() {
            format!("all {} items within {:e}", self.items.len(), self.bound)
        } else {
            failed.join("; ")
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Cluster,
    Oracle,
}

/// Outcome of one approximation or oracle run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproximationReport {
    pub problem: String,
    pub mode: Mode,
    pub value: [f64; 2],
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub unnormalized_value: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub truncation_order: Option<usize>,
    /// Work done by the expansion: partial sums evaluated across all roots
    /// (0 for oracle runs).
    pub clusters_evaluated: u64,
    pub polymers: usize,
    pub condition: Vec<ConditionItem>,
    pub forced: bool,
    pub elapsed: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub oracle_value: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub relative_error: Option<f64>,
}

impl ApproximationReport {
    pub fn value(&self) -> Complex64 {
        from_pair(self.value)
    }

    /// Attaches an exact reference value and the relative error against it.
    pub fn compare_with(&mut self, exact: Complex64) {
        self.oracle_value = Some(pair(exact));
        self.relative_error = Some(relative_error(self.value(), exact));
    }

    /// The report with `elapsed` zeroed, for comparing runs.
    pub fn without_timing(&self) -> Self {
        ApproximationReport {
            elapsed: 0.0,
            ..self.clone()
        }
    }
}

/// `|approx - exact| / |exact|`, or the absolute error when `exact` is 0.
pub fn relative_error(approx: Complex64, exact: Complex64) -> f64 {
    let diff = (approx - exact).norm();
    if exact.norm() == 0.0 {
        diff
    } else {
        diff / exact.norm()
    }
}

pub fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn from_pair(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}
