//! Task offloading for hierarchical aerial edge computing.
//!
//! Terrestrial IoT devices offload computation tasks to hovering UAVs, which
//! either compute them or relay them to a single high-altitude platform
//! (HAP). The crate evaluates the link, computing and energy model of such a
//! network, checks candidate offloading plans against every constraint, and
//! provides the matching-based solver pipeline together with baselines and
//! an exhaustive oracle for small instances.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and
//! the benchmark harness live in the `aerial-mec` companion crate.
//!
//! Layout:
//!
//! - [`model`]: entities, link and cost formulas, solutions, feasibility.
//! - [`scenario`]: seeded instance generation and coverage relations.
//! - [`matching`]: IoT-to-UAV many-to-one matching and swap refinement.
//! - [`offload`]: UAV-to-HAP offloading, adjustment and pipeline variants.
//! - [`baselines`]: exact oracle, greedy rule, single-layer modes.

#![no_std]
#![warn(missing_debug_implementations)]
// `!(x > 0.0)` style checks are meant to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod baselines;
pub mod error;
pub mod matching;
mod math;
pub mod model;
pub mod offload;
pub mod rng;
pub mod scenario;
pub mod trace;

pub use error::{Error, Result};
pub use model::{
    check_feasible, objective_value, ConstraintId, ContentionMode, Evaluator, FeasibilityReport,
    Hap, IotDevice, LinkModel, Point, Route, Scenario, ScoreRanges, Solution, SolverWeights, Uav,
    Violation,
};
pub use offload::{run_pipeline, PipelineOutcome, StageCounters, Variant};
pub use scenario::{coverage, generate, CoverageMap, GenConfig, UavLayout};

/// Absolute slack, in natural units, used by every constraint comparison.
pub const FEASIBILITY_TOL: f64 = 1e-9;
