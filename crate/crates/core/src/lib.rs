//! Truncated cluster expansions for quantum circuit amplitudes, local
//! expectation values, quantum partition functions and thermal expectation
//! values, and for the classical Ising and hard-core models.
//!
//! Each problem is rewritten as an abstract polymer model
//! ([`polymer::PolymerUniverse`]) over a multihypergraph
//! ([`hypergraph::MultiHypergraph`]). `log Z` is approximated by the sum
//! `T_m` of all cluster terms of total size below `m`. When the problem's
//! sufficient condition holds, `m = ⌈2 ln(2|G|/ε)⌉` gives `|T_m − log Z| ≤ ε/2`
//! and `e^{T_m}` is within relative error `ε` of `Z`.
//!
//! - [`hypergraph`]: hosts, connected edge subsets, causal cones.
//! - [`polymer`]: the expansion engine, Ursell functions, cluster listing.
//! - [`quantum`]: circuits, spin systems and their polymer weights.
//! - [`classical`]: Ising and hard-core models and their reductions.
//! - [`oracle`]: exact brute-force values, guarded by size.
//! - [`problem`], [`report`], [`cli`]: file formats and the `clusterx` binary.

pub mod classical;
pub mod cli;
pub mod error;
pub mod hypergraph;
pub mod linalg;
pub mod oracle;
pub mod polymer;
pub mod problem;
pub mod quantum;
pub mod report;

pub use error::{Error, Result};
