//! System model: entities, link/compute/energy formulas, offloading plans
//! and constraint checking.

mod cost;
mod entities;
mod evaluator;
mod feasibility;
pub mod link;
mod score;
mod solution;

#[cfg(test)]
pub(crate) mod test_support;

pub use cost::{compute_energy_hap, compute_energy_uav, compute_time_hap, compute_time_uav};
pub use entities::{
    ContentionMode, Hap, IotDevice, LinkModel, Point, Scenario, ScoreRanges, SolverWeights, Uav,
};
pub use evaluator::Evaluator;
pub use feasibility::{
    check_feasible, energy_hap, energy_iot, energy_uav, objective_value, total_delay,
    ConstraintId, FeasibilityReport, Violation,
};
pub use link::{
    channel_gain_i2u, db_to_linear, linear_to_db, rate_i2h, rate_i2u, rate_u2h, tx_time_i2u,
    tx_time_u2h,
};
pub use score::{normalize, uav_side_score};
pub use solution::{Derived, Route, Solution};
