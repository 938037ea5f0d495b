//! Optional per-step event stream of the solvers.

use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "event", rename_all = "snake_case"))]
pub enum TraceEvent {
    /// An IoT device proposed to a UAV during the matching.
    Proposal {
        step: usize,
        iot: usize,
        uav: usize,
        /// Score of the UAV in the proposer's preference list.
        score: f64,
        accepted: bool,
        /// Device pushed out of the full UAV to make room.
        displaced: Option<usize>,
    },
    /// Two matched devices exchanged UAVs.
    Swap {
        step: usize,
        iots: (usize, usize),
        uavs: (usize, usize),
        gain: f64,
        total_utility: f64,
    },
    /// A task moved from UAV computing to HAP computing.
    Offload {
        step: usize,
        iot: usize,
        uav: usize,
        score: f64,
    },
    /// A task lost its assignment.
    Drop { step: usize, iot: usize, data_size_bits: f64 },
    /// The adjustment stage placed an unserved task on a UAV.
    Placement { step: usize, iot: usize, uav: usize },
}

/// Collects events when enabled; recording into a disabled trace is a no-op.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trace {
    enabled: bool,
    events: Vec<TraceEvent>,
}

impl Trace {
    pub fn enabled() -> Self {
        Trace {
            enabled: true,
            events: Vec::new(),
        }
    }

    pub fn disabled() -> Self {
        Trace::default()
    }

    pub fn is_enabled(&self) -> bool {
        self.enabled
    }

    pub fn record(&mut self, event: impl FnOnce() -> TraceEvent) {
        if self.enabled {
            self.events.push(event());
        }
    }

    pub fn events(&self) -> &[TraceEvent] {
        &self.events
    }

    pub fn extend(&mut self, other: Trace) {
        if self.enabled {
            self.events.extend(other.events);
        }
    }

    pub fn into_events(self) -> Vec<TraceEvent> {
        self.events
    }
}
