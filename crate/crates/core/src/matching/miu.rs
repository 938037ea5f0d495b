use alloc::vec;
use alloc::vec::Vec;

use super::{Matching, MatchingContext, Preferences};
use crate::trace::{Trace, TraceEvent};

#[derive(Debug, Clone)]
pub struct MiuOutcome {
    pub matching: Matching,
    /// Frozen preference lists the matching is stable against.
    pub preferences: Preferences,
    pub proposals: usize,
    pub trace: Trace,
}

impl MiuOutcome {
    pub fn x_flags(&self) -> Vec<Vec<bool>> {
        self.matching.x_flags()
    }
}

/// Least preferred member of a full UAV.
fn worst_member(prefs: &Preferences, matching: &Matching, uav: usize) -> usize {
    let list = &prefs.uav[uav];
    *matching
        .members(uav)
        .iter()
        .max_by_key(|&&i| list.position(i).unwrap_or(usize::MAX))
        .expect("full UAV has members")
}

/// IoT-proposing deferred acceptance with UAV quotas.
///
/// Unmatched devices propose, in id order and sweep after sweep, to the
/// best UAV still on their list. A UAV with a free slot accepts; a full UAV
/// replaces its worst member if it strictly prefers the proposer. Rejected
/// and displaced devices strike that UAV from their list, so every
/// (device, UAV) pair is proposed at most once.
pub fn run_miu(ctx: &MatchingContext<'_>, trace_enabled: bool) -> MiuOutcome {
    let sc = ctx.scenario();
    let prefs = Preferences::initial(ctx);
    let mut matching = Matching::empty(sc);
    let mut next = vec![0usize; sc.n_iot()];
    let mut proposals = 0;
    let mut trace = if trace_enabled {
        Trace::enabled()
    } else {
        Trace::disabled()
    };

    loop {
        let mut progressed = false;
        for i in 0..sc.n_iot() {
            if matching.partner(i).is_some() {
                continue;
            }
            let Some((u, score)) = prefs.iot[i].get(next[i]) else {
                continue;
            };
            progressed = true;
            proposals += 1;
            let step = proposals;
            if !matching.is_full(u) {
                matching.assign(i, u);
                trace.record(|| TraceEvent::Proposal {
                    step,
                    iot: i,
                    uav: u,
                    score,
                    accepted: true,
                    displaced: None,
                });
                continue;
            }
            let worst = worst_member(&prefs, &matching, u);
            if prefs.uav[u].prefers(i, worst) {
                matching.unassign(worst);
                next[worst] += 1;
                matching.assign(i, u);
                trace.record(|| TraceEvent::Proposal {
                    step,
                    iot: i,
                    uav: u,
                    score,
                    accepted: true,
                    displaced: Some(worst),
                });
            } else {
                next[i] += 1;
                trace.record(|| TraceEvent::Proposal {
                    step,
                    iot: i,
                    uav: u,
                    score,
                    accepted: false,
                    displaced: None,
                });
            }
        }
        if !progressed {
            break;
        }
    }

    MiuOutcome {
        matching,
        preferences: prefs,
        proposals,
        trace,
    }
}

/// Every (IoT, UAV) pair outside the matching that both sides would rather
/// form, judged on the frozen initial preference lists.
pub fn find_blocking_pairs(matching: &Matching, ctx: &MatchingContext<'_>) -> Vec<(usize, usize)> {
    let prefs = Preferences::initial(ctx);
    let mut pairs = Vec::new();
    for (i, list) in prefs.iot.iter().enumerate() {
        let current = matching.partner(i);
        for u in list.ids() {
            if current == Some(u) {
                continue;
            }
            let iot_wants = current.is_none_or(|c| list.prefers(u, c));
            if !iot_wants {
                continue;
            }
            let uav_wants = !matching.is_full(u)
                || matching
                    .members(u)
                    .iter()
                    .any(|&j| prefs.uav[u].prefers(i, j));
            if uav_wants {
                pairs.push((i, u));
            }
        }
    }
    pairs
}

#[cfg(test)]
mod tests {
    use super::super::tests_support::*;
    use super::*;

    // normalised size and deadline of 0.8 and 0.3 give UAV-side scores 0.8 and 0.3
    fn strong() -> crate::model::IotDevice {
        iot(0.0, 0.0, 1e7 + 0.8 * 9e7, 10.0 + 0.8 * 190.0)
    }

    fn weak() -> crate::model::IotDevice {
        iot(0.0, 0.0, 1e7 + 0.3 * 9e7, 10.0 + 0.3 * 190.0)
    }

    #[test]
    fn single_pair() {
        let s = build(vec![iot(0.0, 0.0, 1e8, 100.0)], vec![uav(0.0, 0.0, 1)]);
        let ctx = MatchingContext::new(&s).unwrap();
        let out = run_miu(&ctx, false);
        assert_eq!(out.matching.partner(0), Some(0));
        assert_eq!(out.proposals, 1);
    }

    #[test]
    fn full_uav_keeps_preferred_device() {
        for order in [[strong(), weak()], [weak(), strong()]] {
            let strong_id = if order[0].data_size_bits > order[1].data_size_bits { 0 } else { 1 };
            let s = build(order.to_vec(), vec![uav(0.0, 0.0, 1)]);
            let ctx = MatchingContext::new(&s).unwrap();
            assert!((ctx.evaluator().uav_score(strong_id) - 0.8).abs() < 1e-12);
            assert!((ctx.evaluator().uav_score(1 - strong_id) - 0.3).abs() < 1e-12);
            let out = run_miu(&ctx, true);
            assert_eq!(out.matching.members(0), &[strong_id]);
            assert_eq!(out.matching.partner(1 - strong_id), None);
            assert!(find_blocking_pairs(&out.matching, &ctx).is_empty());
        }
    }

    #[test]
    fn uncovered_device_stays_unmatched() {
        let s = build(
            vec![iot(0.0, 0.0, 1e8, 100.0), iot(9000.0, 9000.0, 1e8, 100.0)],
            vec![uav(0.0, 0.0, 5)],
        );
        let ctx = MatchingContext::new(&s).unwrap();
        let out = run_miu(&ctx, false);
        assert_eq!(out.matching.partner(1), None);
        assert_eq!(out.x_flags()[1], vec![false]);
    }

    #[test]
    fn ignored_free_uav_blocks() {
        let s = build(
            vec![iot(1000.0, 0.0, 1e8, 100.0)],
            vec![uav(0.0, 0.0, 1), uav(3000.0, 0.0, 1)],
        );
        let ctx = MatchingContext::new(&s).unwrap();
        let mut m = Matching::empty(&s);
        m.assign(0, 1);
        // UAV 0 is closer, free, and preferred
        assert_eq!(find_blocking_pairs(&m, &ctx), vec![(0, 0)]);
        let mut empty = Matching::empty(&s);
        assert_eq!(find_blocking_pairs(&empty, &ctx).len(), 2);
        empty.assign(0, 0);
        assert!(find_blocking_pairs(&empty, &ctx).is_empty());
    }

    #[test]
    fn full_uav_with_worse_member_blocks() {
        let s = build(vec![weak(), strong()], vec![uav(0.0, 0.0, 1)]);
        let ctx = MatchingContext::new(&s).unwrap();
        let mut m = Matching::empty(&s);
        m.assign(0, 0);
        assert_eq!(find_blocking_pairs(&m, &ctx), vec![(1, 0)]);
    }
}
