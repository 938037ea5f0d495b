use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use super::{run_aa, run_ha};
use crate::error::{Error, Result};
use crate::matching::{run_eea, run_miu, MatchingContext};
use crate::model::{Route, Scenario, Solution};
use crate::trace::Trace;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

/// Stage composition of the matching pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Variant {
    /// Matching, then offloading.
    Mh,
    /// Matching, swap refinement, offloading.
    Meh,
    /// Matching, offloading, adjustment.
    Mha,
    /// All four stages.
    Meha,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::Mh, Variant::Meh, Variant::Mha, Variant::Meha];

    pub fn as_str(&self) -> &'static str {
        match self {
            Variant::Mh => "mh",
            Variant::Meh => "meh",
            Variant::Mha => "mha",
            Variant::Meha => "meha",
        }
    }

    pub fn uses_eea(&self) -> bool {
        matches!(self, Variant::Meh | Variant::Meha)
    }

    pub fn uses_aa(&self) -> bool {
        matches!(self, Variant::Mha | Variant::Meha)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.as_str().eq_ignore_ascii_case(s))
            .ok_or(Error::InvalidConfig("unknown pipeline variant"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct StageCounters {
    pub proposals: usize,
    pub swaps: usize,
    pub ha_offloads: usize,
    pub ha_drops: usize,
    pub aa_placements: usize,
}

#[derive(Debug, Clone)]
pub struct PipelineOutcome {
    pub solution: Solution,
    pub routes: Vec<Route>,
    pub counters: StageCounters,
    pub trace: Trace,
}

impl PipelineOutcome {
    pub fn objective(&self, scenario: &Scenario) -> f64 {
        crate::model::objective_value(&self.solution, scenario)
    }
}

/// Runs the stages of `variant` on a single-HAP scenario.
pub fn run_pipeline(scenario: &Scenario, variant: Variant, trace_enabled: bool) -> Result<PipelineOutcome> {
    scenario.validate()?;
    scenario.single_hap()?;
    let ctx = MatchingContext::new(scenario)?;
    let eval = ctx.evaluator();
    let mut counters = StageCounters::default();

    let miu = run_miu(&ctx, trace_enabled);
    counters.proposals = miu.proposals;
    let mut trace = miu.trace;
    let mut matching = miu.matching;

    if variant.uses_eea() {
        let eea = run_eea(matching, &ctx, trace_enabled);
        counters.swaps = eea.swaps;
        trace.extend(eea.trace);
        matching = eea.matching;
    }

    let ha = run_ha(&matching, eval, trace_enabled)?;
    counters.ha_offloads = ha.offloads;
    counters.ha_drops = ha.drops;
    trace.extend(ha.trace);
    let (mut routes, mut solution) = (ha.routes, ha.solution);

    if variant.uses_aa() {
        let aa = run_aa(&routes, eval, trace_enabled)?;
        counters.aa_placements = aa.placements;
        trace.extend(aa.trace);
        routes = aa.routes;
        solution = aa.solution;
    }

    Ok(PipelineOutcome {
        solution,
        routes,
        counters,
        trace,
    })
}
