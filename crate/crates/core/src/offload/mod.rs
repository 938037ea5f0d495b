//! UAV-to-HAP offloading, adjustment, and the four pipeline variants.

mod aa;
mod ha;
mod pipeline;

pub use aa::{run_aa, AaOutcome};
pub use ha::{run_ha, HaOutcome};
pub use pipeline::{run_pipeline, PipelineOutcome, StageCounters, Variant};

use crate::model::Evaluator;

/// Served task with the smallest data size among `tasks`, ties by id.
pub(crate) fn smallest_task(eval: &Evaluator<'_>, tasks: impl Iterator<Item = usize>) -> Option<usize> {
    let iots = &eval.scenario().iots;
    tasks.min_by(|&a, &b| {
        iots[a]
            .data_size_bits
            .total_cmp(&iots[b].data_size_bits)
            .then(a.cmp(&b))
    })
}

