use super::{IotDevice, ScoreRanges, SolverWeights};

/// Min-max normalisation of `value` over `[lo, hi]`; a degenerate range maps to 1.
#[inline]
pub fn normalize(value: f64, lo: f64, hi: f64) -> f64 {
    if hi > lo {
        (value - lo) / (hi - lo)
    } else {
        1.0
    }
}

/// UAV-side preference score of a device: large tasks with tolerant
/// deadlines score high. The same score orders serial compute queues.
pub fn uav_side_score(iot: &IotDevice, ranges: &ScoreRanges, weights: &SolverWeights) -> f64 {
    let (s_lo, s_hi) = ranges.data_size_bits;
    let (d_lo, d_hi) = ranges.deadline_s;
    weights.iota1 * normalize(iot.data_size_bits, s_lo, s_hi)
        + weights.iota2 * normalize(iot.deadline_s, d_lo, d_hi)
}
