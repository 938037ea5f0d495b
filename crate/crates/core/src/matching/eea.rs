use alloc::vec::Vec;

use super::{pref_score_iot, Matching, MatchingContext, UavResidual};
use crate::trace::{Trace, TraceEvent};

/// Smallest total utility gain that counts as an improvement.
pub const SWAP_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct EeaOutcome {
    pub matching: Matching,
    pub swaps: usize,
    /// Total utility before the first swap and after each swap.
    pub utility_history: Vec<f64>,
    /// Pairs dropped up front because the device could not use that UAV.
    pub removed: Vec<(usize, usize)>,
    pub trace: Trace,
}

impl EeaOutcome {
    pub fn x_flags(&self) -> Vec<Vec<bool>> {
        self.matching.x_flags()
    }
}

/// Utility of `iot` with its current partner under the current loads; zero
/// when unmatched.
pub fn utility(ctx: &MatchingContext<'_>, matching: &Matching, iot: usize) -> f64 {
    match matching.partner(iot) {
        Some(u) => pref_score_iot(ctx, iot, u, &matching.residuals(ctx)),
        None => 0.0,
    }
}

/// Utility change of `iot` if the devices in `swap` exchanged partners.
pub fn delta_utility(
    ctx: &MatchingContext<'_>,
    matching: &Matching,
    iot: usize,
    swap: (usize, usize),
) -> f64 {
    let (a, b) = swap;
    if a == b || matching.partner(a) == matching.partner(b) {
        return 0.0;
    }
    let mut after = matching.clone();
    after.swap(a, b);
    utility(ctx, &after, iot) - utility(ctx, matching, iot)
}

pub fn total_utility(ctx: &MatchingContext<'_>, matching: &Matching) -> f64 {
    let residuals = matching.residuals(ctx);
    (0..matching.n_iot())
        .filter_map(|i| matching.partner(i).map(|u| pref_score_iot(ctx, i, u, &residuals)))
        .sum()
}

/// Compute time and compute energy committed on each UAV.
#[derive(Debug, Clone, Copy)]
struct Load {
    busy_s: f64,
    energy_j: f64,
}

struct SwapEval {
    gain: f64,
    delta_a: f64,
    delta_b: f64,
}

struct State<'c, 'a> {
    ctx: &'c MatchingContext<'a>,
    loads: Vec<Load>,
    residuals: Vec<UavResidual>,
    utilities: Vec<f64>,
}

impl<'c, 'a> State<'c, 'a> {
    fn new(ctx: &'c MatchingContext<'a>, m: &Matching) -> Self {
        let eval = ctx.evaluator();
        let loads: Vec<Load> = (0..m.n_uav())
            .map(|u| Load {
                busy_s: m.members(u).iter().map(|&i| eval.compute_time_uav(i, u)).sum(),
                energy_j: m.members(u).iter().map(|&i| eval.compute_energy_uav(i, u)).sum(),
            })
            .collect();
        let mut s = State {
            ctx,
            residuals: Vec::new(),
            loads,
            utilities: Vec::new(),
        };
        s.residuals = (0..m.n_uav()).map(|u| s.residual(u, s.loads[u])).collect();
        s.utilities = (0..m.n_iot())
            .map(|i| m.partner(i).map_or(0.0, |u| pref_score_iot(ctx, i, u, &s.residuals)))
            .collect();
        s
    }

    fn residual(&self, u: usize, load: Load) -> UavResidual {
        UavResidual::from_load(self.ctx, u, load.busy_s, load.energy_j)
    }

    /// Loads of `ua` and `ub` once `a` (on `ua`) and `b` (on `ub`) trade places.
    fn swapped_loads(&self, a: usize, ua: usize, b: usize, ub: usize) -> (Load, Load) {
        let e = self.ctx.evaluator();
        let la = self.loads[ua];
        let lb = self.loads[ub];
        (
            Load {
                busy_s: la.busy_s - e.compute_time_uav(a, ua) + e.compute_time_uav(b, ua),
                energy_j: la.energy_j - e.compute_energy_uav(a, ua) + e.compute_energy_uav(b, ua),
            },
            Load {
                busy_s: lb.busy_s - e.compute_time_uav(b, ub) + e.compute_time_uav(a, ub),
                energy_j: lb.energy_j - e.compute_energy_uav(b, ub) + e.compute_energy_uav(a, ub),
            },
        )
    }

    fn evaluate(&self, m: &Matching, a: usize, b: usize, scratch: &mut Vec<UavResidual>) -> SwapEval {
        let ua = m.partner(a).expect("matched");
        let ub = m.partner(b).expect("matched");
        let (la, lb) = self.swapped_loads(a, ua, b, ub);
        scratch.clear();
        scratch.extend_from_slice(&self.residuals);
        scratch[ua] = self.residual(ua, la);
        scratch[ub] = self.residual(ub, lb);

        let mut out = SwapEval {
            gain: 0.0,
            delta_a: 0.0,
            delta_b: 0.0,
        };
        for k in 0..m.n_iot() {
            let Some(pk) = m.partner(k) else { continue };
            if !(self.ctx.is_candidate(k, ua) || self.ctx.is_candidate(k, ub)) {
                continue;
            }
            let partner = if k == a {
                ub
            } else if k == b {
                ua
            } else {
                pk
            };
            let d = pref_score_iot(self.ctx, k, partner, scratch) - self.utilities[k];
            out.gain += d;
            if k == a {
                out.delta_a = d;
            } else if k == b {
                out.delta_b = d;
            }
        }
        out
    }
}

/// Pairwise swap search over a matching.
///
/// A swap of two devices on distinct UAVs is admissible when each device can
/// use the other's UAV, neither of the two loses utility, and the utility of
/// every matched device together rises by more than [`SWAP_TOL`]. The
/// admissible swap with the largest total gain runs first (ties: smallest
/// pair); the search repeats until none is left. Total utility strictly
/// rises with each swap, so the loop ends.
pub fn run_eea(m1: Matching, ctx: &MatchingContext<'_>, trace_enabled: bool) -> EeaOutcome {
    let mut m = m1;
    let mut trace = if trace_enabled {
        Trace::enabled()
    } else {
        Trace::disabled()
    };

    let mut removed = Vec::new();
    for i in 0..m.n_iot() {
        if let Some(u) = m.partner(i) {
            if !ctx.is_candidate(i, u) {
                m.unassign(i);
                removed.push((i, u));
            }
        }
    }

    let mut state = State::new(ctx, &m);
    let mut history = alloc::vec![state.utilities.iter().sum::<f64>()];
    let mut scratch = Vec::with_capacity(m.n_uav());
    let mut swaps = 0;

    loop {
        let mut best: Option<(usize, usize, f64)> = None;
        for a in 0..m.n_iot() {
            let Some(ua) = m.partner(a) else { continue };
            for b in a + 1..m.n_iot() {
                let Some(ub) = m.partner(b) else { continue };
                if ua == ub || !ctx.is_candidate(a, ub) || !ctx.is_candidate(b, ua) {
                    continue;
                }
                let ev = state.evaluate(&m, a, b, &mut scratch);
                if ev.delta_a < 0.0 || ev.delta_b < 0.0 || ev.gain <= SWAP_TOL {
                    continue;
                }
                if best.is_none_or(|(_, _, g)| ev.gain > g) {
                    best = Some((a, b, ev.gain));
                }
            }
        }
        let Some((a, b, gain)) = best else { break };
        let ua = m.partner(a).expect("matched");
        let ub = m.partner(b).expect("matched");
        m.swap(a, b);
        swaps += 1;
        state = State::new(ctx, &m);
        let total: f64 = state.utilities.iter().sum();
        history.push(total);
        trace.record(|| TraceEvent::Swap {
            step: swaps,
            iots: (a, b),
            uavs: (ua, ub),
            gain,
            total_utility: total,
        });
    }

    EeaOutcome {
        matching: m,
        swaps,
        utility_history: history,
        removed,
        trace,
    }
}
