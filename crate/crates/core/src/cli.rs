//! Command dispatch behind the `clusterx` binary: condition checks, cluster
//! expansion runs, exact oracle runs and cluster statistics for a
//! [`Problem`], each producing a serializable report.

use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;

use crate::classical::{
    approximate_hardcore, approximate_ising, hardcore_conditions, hardcore_universe, ising_conditions, ising_universe,
    unnormalization,
};
use crate::error::{Error, Result};
use crate::hypergraph::causal_intersection_hypergraph;
use crate::oracle;
use crate::polymer::{cluster_counts, ClusterCounts, SubgraphUniverse};
use crate::problem::Problem;
use crate::quantum::{
    amplitude_conditions, approximate_amplitude, approximate_expectation, approximate_partition, approximate_thermal,
    expectation_conditions, spin_conditions, AmplitudeWeights, ExpectationWeights, SpinWeights,
};
use crate::report::{pair, ApproxOptions, ApproximationReport, ConditionReport, Mode};

/// Cap on the clusters listed by [`Command::Clusters`].
pub const CLUSTER_COUNT_LIMIT: u64 = 5_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Sufficient conditions only.
    Check,
    /// Truncated cluster expansion.
    Approx,
    /// Exact brute-force value.
    Oracle,
    /// Polymer and cluster counts per size.
    Clusters,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RunOptions {
    pub approx: ApproxOptions,
    /// With [`Command::Approx`], also run the oracle and report the relative
    /// error.
    pub compare: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub problem: String,
    pub passed: bool,
    pub conditions: ConditionReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterReport {
    pub problem: String,
    pub max_size: usize,
    pub polymers_by_size: Vec<u64>,
    pub clusters_by_size: Vec<u64>,
    pub total_polymers: u64,
    pub total_clusters: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Output {
    Check(CheckReport),
    Report(ApproximationReport),
    Clusters(ClusterReport),
}

impl Output {
    /// 2 for a failed check, 0 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Output::Check(c) if !c.passed => 2,
            _ => 0,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

/// Process exit code for an error: 2 condition, 3 validation, 4 guard.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Condition(_) => 2,
        Error::Validation(_) | Error::UnknownVertex(_) | Error::Epsilon(_) => 3,
        Error::Guard(_) => 4,
        Error::Numerical(_) => 1,
    }
}

pub fn run(command: Command, problem: &Problem, opts: &RunOptions) -> Result<Output> {
    match command {
        Command::Check => {
            let conditions = check_conditions(problem);
            Ok(Output::Check(CheckReport {
                problem: problem.kind().name().into(),
                passed: conditions.passed(),
                conditions,
            }))
        }
        Command::Approx => {
            let mut report = approximate(problem, &opts.approx)?;
            if opts.compare {
                let (exact, _) = exact_value(problem)?;
                report.compare_with(exact);
            }
            Ok(Output::Report(report))
        }
        Command::Oracle => exact(problem).map(Output::Report),
        Command::Clusters => clusters(problem, &opts.approx).map(Output::Clusters),
    }
}

pub fn check_conditions(problem: &Problem) -> ConditionReport {
    match problem {
        Problem::Amplitude(c) => amplitude_conditions(c),
        Problem::Expectation(c, obs) => expectation_conditions(c, obs),
        Problem::Partition(s) | Problem::Thermal(s, _) => spin_conditions(s),
        Problem::Ising(s) => ising_conditions(s),
        Problem::HardCore(h) => hardcore_conditions(h),
    }
}

pub fn approximate(problem: &Problem, opts: &ApproxOptions) -> Result<ApproximationReport> {
    let (_, report) = match problem {
        Problem::Amplitude(c) => approximate_amplitude(c, opts)?,
        Problem::Expectation(c, obs) => approximate_expectation(c, obs, opts)?,
        Problem::Partition(s) => approximate_partition(s, opts)?,
        Problem::Thermal(s, obs) => approximate_thermal(s, obs, opts)?,
        Problem::Ising(s) => approximate_ising(s, opts)?,
        Problem::HardCore(h) => approximate_hardcore(h, opts)?,
    };
    Ok(report)
}

/// Exact value, plus the unnormalized Ising value where it applies.
fn exact_value(problem: &Problem) -> Result<(Complex64, Option<Complex64>)> {
    Ok(match problem {
        Problem::Amplitude(c) => (oracle::exact_amplitude(c)?, None),
        Problem::Expectation(c, obs) => (oracle::exact_expectation(c, obs)?, None),
        Problem::Partition(s) => (oracle::exact_partition(s)?, None),
        Problem::Thermal(s, obs) => (oracle::exact_thermal(s, obs)?, None),
        Problem::Ising(s) => {
            let z = oracle::exact_ising(s)?;
            (z, Some(z * unnormalization(s.graph())))
        }
        Problem::HardCore(h) => (oracle::exact_independence_poly(h)?, None),
    })
}

pub fn exact(problem: &Problem) -> Result<ApproximationReport> {
    let start = Instant::now();
    let (value, unnormalized) = exact_value(problem)?;
    Ok(ApproximationReport {
        problem: problem.kind().name().into(),
        mode: Mode::Oracle,
        value: pair(value),
        unnormalized_value: unnormalized.map(pair),
        epsilon: None,
        truncation_order: None,
        clusters_evaluated: 0,
        polymers: 0,
        condition: check_conditions(problem).items,
        forced: false,
        elapsed: start.elapsed().as_secs_f64(),
        oracle_value: None,
        relative_error: None,
    })
}

/// Counts up to size `m − 1`, with `m` the order `approx` would use.
pub fn clusters(problem: &Problem, opts: &ApproxOptions) -> Result<ClusterReport> {
    let g = problem.graph();
    let max_size = match problem {
        Problem::Thermal(..) => opts.order_for(g.order(), 0.5)?,
        Problem::HardCore(h) => opts.order_for(h.graph().order() + h.graph().size(), 1.0)?,
        _ => opts.order_for(g.order(), 1.0)?,
    }
    .saturating_sub(1);
    let counts = if max_size == 0 {
        ClusterCounts {
            polymers_by_size: vec![0],
            clusters_by_size: vec![0],
        }
    } else {
        count_for(problem, max_size)?
    };
    Ok(ClusterReport {
        problem: problem.kind().name().into(),
        max_size,
        total_polymers: counts.polymers_by_size.iter().sum(),
        total_clusters: counts.clusters_by_size.iter().sum(),
        polymers_by_size: counts.polymers_by_size,
        clusters_by_size: counts.clusters_by_size,
    })
}

fn count_for(problem: &Problem, max_size: usize) -> Result<ClusterCounts> {
    let limit = CLUSTER_COUNT_LIMIT;
    match problem {
        Problem::Amplitude(c) => cluster_counts(
            &SubgraphUniverse::new(c.graph(), AmplitudeWeights::new(c)),
            max_size,
            limit,
        ),
        Problem::Expectation(c, obs) => {
            let host = causal_intersection_hypergraph(c.graph());
            let u = SubgraphUniverse::new(&host, ExpectationWeights::new(c, obs));
            cluster_counts(&u, max_size, limit)
        }
        Problem::Partition(s) | Problem::Thermal(s, _) => cluster_counts(
            &SubgraphUniverse::new(s.graph(), SpinWeights::partition(s)),
            max_size,
            limit,
        ),
        Problem::Ising(s) => cluster_counts(&ising_universe(s), max_size, limit),
        Problem::HardCore(h) => cluster_counts(&hardcore_universe(h), max_size, limit),
    }
}
