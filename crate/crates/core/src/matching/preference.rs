use alloc::vec::Vec;

use super::MatchingContext;
use crate::model::{normalize, uav_side_score, IotDevice, Scenario, SolverWeights};

/// Spare resources of a UAV under a given load.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UavResidual {
    /// Compute capability scaled by the idle share of the scheduling horizon.
    pub compute_cps: f64,
    /// Energy budget left after computing every assigned task locally.
    pub energy_j: f64,
}

impl UavResidual {
    /// Residual of `uav` when `busy_s` seconds of compute and `load_energy_j`
    /// joules of compute energy are committed.
    pub fn from_load(ctx: &MatchingContext<'_>, uav: usize, busy_s: f64, load_energy_j: f64) -> Self {
        let u = &ctx.scenario().uavs[uav];
        let idle = if ctx.horizon_s() > 0.0 {
            (1.0 - busy_s / ctx.horizon_s()).max(0.0)
        } else {
            0.0
        };
        UavResidual {
            compute_cps: u.compute_cap_cps * idle,
            energy_j: u.energy_budget_j - u.basic_energy_j - load_energy_j,
        }
    }

    pub fn with_members(ctx: &MatchingContext<'_>, uav: usize, members: &[usize]) -> Self {
        let eval = ctx.evaluator();
        let busy: f64 = members.iter().map(|&i| eval.compute_time_uav(i, uav)).sum();
        let energy: f64 = members.iter().map(|&i| eval.compute_energy_uav(i, uav)).sum();
        Self::from_load(ctx, uav, busy, energy)
    }
}

/// Weighted sum of already normalised residual compute, residual energy and
/// link rate terms.
pub fn weighted_iot_score(weights: &SolverWeights, terms: [f64; 3]) -> f64 {
    weights.lambda1 * terms[0] + weights.lambda2 * terms[1] + weights.lambda3 * terms[2]
}

/// IoT-side preference of `iot` for `uav` given every UAV's residual.
///
/// Each term is min-max normalised over the device's admissible UAVs.
pub fn pref_score_iot(
    ctx: &MatchingContext<'_>,
    iot: usize,
    uav: usize,
    residuals: &[UavResidual],
) -> f64 {
    let eval = ctx.evaluator();
    let cands = ctx.candidates(iot);
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for &v in cands {
        let t = [residuals[v].compute_cps, residuals[v].energy_j, eval.rate_i2u(iot, v)];
        for k in 0..3 {
            lo[k] = lo[k].min(t[k]);
            hi[k] = hi[k].max(t[k]);
        }
    }
    let raw = [
        residuals[uav].compute_cps,
        residuals[uav].energy_j,
        eval.rate_i2u(iot, uav),
    ];
    let terms = if cands.is_empty() {
        [1.0; 3]
    } else {
        [
            normalize(raw[0], lo[0], hi[0]),
            normalize(raw[1], lo[1], hi[1]),
            normalize(raw[2], lo[2], hi[2]),
        ]
    };
    weighted_iot_score(&ctx.scenario().weights, terms)
}

/// UAV-side preference for a device; scenario-wide normalisation.
pub fn pref_score_uav(iot: &IotDevice, scenario: &Scenario) -> f64 {
    uav_side_score(iot, &scenario.score_ranges, &scenario.weights)
}

/// Partners ranked by descending score, ties by ascending id.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PreferenceList {
    entries: Vec<(usize, f64)>,
}

impl PreferenceList {
    pub fn from_scores(mut entries: Vec<(usize, f64)>) -> Self {
        entries.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        PreferenceList { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, pos: usize) -> Option<(usize, f64)> {
        self.entries.get(pos).copied()
    }

    pub fn ids(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().map(|e| e.0)
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn position(&self, id: usize) -> Option<usize> {
        self.entries.iter().position(|e| e.0 == id)
    }

    /// Whether `a` ranks strictly above `b`; absent partners rank last.
    pub fn prefers(&self, a: usize, b: usize) -> bool {
        let pa = self.position(a).unwrap_or(usize::MAX);
        let pb = self.position(b).unwrap_or(usize::MAX);
        pa < pb
    }
}

/// Both sides' preference lists, evaluated at the empty matching.
#[derive(Debug, Clone, PartialEq)]
pub struct Preferences {
    pub iot: Vec<PreferenceList>,
    pub uav: Vec<PreferenceList>,
}

impl Preferences {
    pub fn initial(ctx: &MatchingContext<'_>) -> Self {
        let sc = ctx.scenario();
        let residuals: Vec<UavResidual> = (0..sc.n_uav())
            .map(|u| UavResidual::from_load(ctx, u, 0.0, 0.0))
            .collect();
        let iot = (0..sc.n_iot())
            .map(|i| {
                let scored = ctx
                    .candidates(i)
                    .iter()
                    .map(|&u| (u, pref_score_iot(ctx, i, u, &residuals)))
                    .collect();
                PreferenceList::from_scores(scored)
            })
            .collect();
        let mut by_uav: Vec<Vec<(usize, f64)>> = alloc::vec![Vec::new(); sc.n_uav()];
        for i in 0..sc.n_iot() {
            for &u in ctx.candidates(i) {
                by_uav[u].push((i, ctx.evaluator().uav_score(i)));
            }
        }
        let uav = by_uav.into_iter().map(PreferenceList::from_scores).collect();
        Preferences { iot, uav }
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests_support::*;
    use super::*;
    use alloc::vec;

    #[test]
    fn weighted_sum() {
        let w = SolverWeights::default();
        assert!((weighted_iot_score(&w, [1.0, 0.0, 0.5]) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn single_candidate_scores_weight_sum() {
        let s = build(vec![iot(0.0, 0.0, 1e8, 100.0)], vec![uav(0.0, 0.0, 5)]);
        let ctx = MatchingContext::new(&s).unwrap();
        let prefs = Preferences::initial(&ctx);
        let (_, score) = prefs.iot[0].get(0).unwrap();
        assert!((score - 1.0).abs() < 1e-15);
    }

    #[test]
    fn faster_link_ranks_higher() {
        let s = build(
            vec![iot(0.0, 0.0, 1e8, 100.0)],
            vec![uav(3000.0, 0.0, 5), uav(1000.0, 0.0, 5)],
        );
        let ctx = MatchingContext::new(&s).unwrap();
        let prefs = Preferences::initial(&ctx);
        assert_eq!(prefs.iot[0].ids().collect::<Vec<_>>(), [1, 0]);
        assert!(prefs.iot[0].entries()[0].1 > prefs.iot[0].entries()[1].1);
    }

    #[test]
    fn uav_side_score_extremes() {
        let s = build(
            vec![
                iot(0.0, 0.0, 1e8, 200.0),
                iot(0.0, 0.0, 1e7, 10.0),
                iot(0.0, 0.0, 5.5e7, 105.0),
            ],
            vec![uav(0.0, 0.0, 5)],
        );
        assert!((pref_score_uav(&s.iots[0], &s) - 1.0).abs() < 1e-15);
        assert_eq!(pref_score_uav(&s.iots[1], &s), 0.0);
        assert!((pref_score_uav(&s.iots[2], &s) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn ties_break_by_id() {
        let l = PreferenceList::from_scores(alloc::vec![(3, 0.5), (1, 0.5), (2, 0.9)]);
        assert_eq!(l.ids().collect::<Vec<_>>(), [2, 1, 3]);
        assert!(l.prefers(1, 3));
        assert!(l.prefers(3, 7));
    }

    #[test]
    fn residual_shrinks_with_load() {
        let s = build(
            vec![iot(0.0, 0.0, 1e8, 100.0), iot(0.0, 0.0, 1e8, 100.0)],
            vec![uav(0.0, 0.0, 5)],
        );
        let ctx = MatchingContext::new(&s).unwrap();
        let one = UavResidual::with_members(&ctx, 0, &[0]);
        let two = UavResidual::with_members(&ctx, 0, &[0, 1]);
        // horizon 100 s, 27 s per task
        assert!((one.compute_cps - 0.73e9).abs() < 1.0);
        assert!(two.compute_cps < one.compute_cps);
        assert!((one.energy_j - (1e5 - 2.7)).abs() < 1e-9);
    }
}
