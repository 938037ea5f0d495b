//! Reference strategies: an exact oracle for small instances, a greedy
//! rule, and the two single-layer computing modes.

mod exact;
mod greedy;
mod modes;

pub use exact::{exact_optimal, ExactLimits, ExactOutcome, DEFAULT_MAX_IOT};
pub use greedy::greedy;
pub use modes::{mode_hap_only, mode_uav_only};
