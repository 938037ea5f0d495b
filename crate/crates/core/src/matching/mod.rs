//! Many-to-one matching of IoT devices to UAVs.
//!
//! [`run_miu`] runs IoT-proposing deferred acceptance over preference lists
//! frozen at the empty matching. Because an IoT device's preference depends
//! on how loaded each UAV already is, the result can still leave devices
//! wanting to trade places; [`run_eea`] removes those externalities with
//! utility-improving pairwise swaps until no admissible swap is left.

mod eea;
mod miu;
mod preference;

use alloc::vec;
use alloc::vec::Vec;

pub use eea::{delta_utility, run_eea, total_utility, utility, EeaOutcome, SWAP_TOL};
pub use miu::{find_blocking_pairs, run_miu, MiuOutcome};
pub use preference::{
    pref_score_iot, pref_score_uav, weighted_iot_score, PreferenceList, Preferences,
    UavResidual,
};

use crate::error::Result;
use crate::model::{Evaluator, Route, Scenario};
use crate::FEASIBILITY_TOL;

/// Scenario data shared by the matching stages: link rates and each IoT
/// device's admissible UAVs.
#[derive(Debug, Clone)]
pub struct MatchingContext<'a> {
    eval: Evaluator<'a>,
    candidates: Vec<Vec<usize>>,
    horizon_s: f64,
}

impl<'a> MatchingContext<'a> {
    /// Admissible partners are UAVs that cover the device and could serve it
    /// alone: the upload fits the deadline and the device's energy budget.
    pub fn new(scenario: &'a Scenario) -> Result<Self> {
        let eval = Evaluator::new(scenario)?;
        let candidates = (0..scenario.n_iot())
            .map(|i| {
                (0..scenario.n_uav())
                    .filter(|&u| scenario.uav_covers(u, i) && solo_feasible(&eval, i, u))
                    .collect()
            })
            .collect();
        let horizon_s = scenario
            .iots
            .iter()
            .map(|d| d.deadline_s)
            .fold(0.0, f64::max);
        Ok(MatchingContext {
            eval,
            candidates,
            horizon_s,
        })
    }

    pub fn evaluator(&self) -> &Evaluator<'a> {
        &self.eval
    }

    pub fn scenario(&self) -> &'a Scenario {
        self.eval.scenario()
    }

    /// Admissible UAVs of `iot`, ascending id.
    pub fn candidates(&self, iot: usize) -> &[usize] {
        &self.candidates[iot]
    }

    pub fn is_candidate(&self, iot: usize, uav: usize) -> bool {
        self.candidates[iot].binary_search(&uav).is_ok()
    }

    /// Scheduling horizon against which UAV busy time is measured.
    pub fn horizon_s(&self) -> f64 {
        self.horizon_s
    }
}

fn solo_feasible(eval: &Evaluator<'_>, iot: usize, uav: usize) -> bool {
    let d = &eval.scenario().iots[iot];
    eval.iot_energy(iot, Route::Uav(uav)) <= d.energy_budget_j + FEASIBILITY_TOL
        && eval.tx_time_i2u(iot, uav) <= d.deadline_s + FEASIBILITY_TOL
}

/// IoT-to-UAV assignment with per-UAV quotas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    iot_to_uav: Vec<Option<usize>>,
    uav_to_iots: Vec<Vec<usize>>,
    quotas: Vec<usize>,
}

impl Matching {
    pub fn empty(scenario: &Scenario) -> Self {
        Matching {
            iot_to_uav: vec![None; scenario.n_iot()],
            uav_to_iots: vec![Vec::new(); scenario.n_uav()],
            quotas: scenario.uavs.iter().map(|u| u.quota).collect(),
        }
    }

    pub fn partner(&self, iot: usize) -> Option<usize> {
        self.iot_to_uav[iot]
    }

    /// Devices matched to `uav`, ascending id.
    pub fn members(&self, uav: usize) -> &[usize] {
        &self.uav_to_iots[uav]
    }

    pub fn is_full(&self, uav: usize) -> bool {
        self.uav_to_iots[uav].len() >= self.quotas[uav]
    }

    pub fn n_iot(&self) -> usize {
        self.iot_to_uav.len()
    }

    pub fn n_uav(&self) -> usize {
        self.uav_to_iots.len()
    }

    pub fn matched_count(&self) -> usize {
        self.iot_to_uav.iter().flatten().count()
    }

    /// Pairs an unmatched device with a UAV that has a free slot.
    ///
    /// # Panics
    ///
    /// If the device is already matched or the UAV is full.
    pub fn assign(&mut self, iot: usize, uav: usize) {
        assert!(self.iot_to_uav[iot].is_none(), "IoT {iot} already matched");
        assert!(!self.is_full(uav), "UAV {uav} is full");
        self.iot_to_uav[iot] = Some(uav);
        let members = &mut self.uav_to_iots[uav];
        let pos = members.binary_search(&iot).unwrap_err();
        members.insert(pos, iot);
    }

    pub fn unassign(&mut self, iot: usize) -> Option<usize> {
        let uav = self.iot_to_uav[iot].take()?;
        let members = &mut self.uav_to_iots[uav];
        if let Ok(pos) = members.binary_search(&iot) {
            members.remove(pos);
        }
        Some(uav)
    }

    /// Exchanges the partners of two matched devices.
    pub fn swap(&mut self, a: usize, b: usize) {
        let ua = self.unassign(a).expect("swap of unmatched IoT");
        let ub = self.unassign(b).expect("swap of unmatched IoT");
        self.assign(a, ub);
        self.assign(b, ua);
    }

    pub fn routes(&self) -> Vec<Route> {
        self.iot_to_uav
            .iter()
            .map(|p| p.map_or(Route::Unserved, Route::Uav))
            .collect()
    }

    /// IoT-to-UAV upload flags `x[i][u]`.
    pub fn x_flags(&self) -> Vec<Vec<bool>> {
        self.iot_to_uav
            .iter()
            .map(|p| (0..self.n_uav()).map(|u| *p == Some(u)).collect())
            .collect()
    }

    /// Two-way consistency, quotas, and admissibility of every pair.
    pub fn is_consistent(&self, ctx: &MatchingContext<'_>) -> bool {
        let forward = self.iot_to_uav.iter().enumerate().all(|(i, p)| match p {
            Some(u) => self.uav_to_iots[*u].binary_search(&i).is_ok() && ctx.is_candidate(i, *u),
            None => true,
        });
        let backward = self.uav_to_iots.iter().enumerate().all(|(u, members)| {
            members.len() <= self.quotas[u]
                && members.iter().all(|&i| self.iot_to_uav[i] == Some(u))
        });
        forward && backward
    }

    /// Residual compute and energy of every UAV if all matched tasks ran on it.
    pub fn residuals(&self, ctx: &MatchingContext<'_>) -> Vec<UavResidual> {
        (0..self.n_uav())
            .map(|u| UavResidual::with_members(ctx, u, &self.uav_to_iots[u]))
            .collect()
    }
}

#[cfg(test)]
pub(crate) mod tests_support {
    use super::*;
    use crate::model::{ContentionMode, Hap, IotDevice, LinkModel, Point, ScoreRanges, SolverWeights, Uav};

    pub(crate) fn iot(x: f64, y: f64, sigma: f64, deadline: f64) -> IotDevice {
        IotDevice {
            id: 0,
            position: Point::new(x, y),
            data_size_bits: sigma,
            deadline_s: deadline,
            tx_power_w: 0.5,
            energy_budget_j: 100.0,
            basic_energy_j: 0.0,
        }
    }

    pub(crate) fn uav(x: f64, y: f64, quota: usize) -> Uav {
        Uav {
            id: 0,
            position: Point::new(x, y),
            altitude_m: 2000.0,
            compute_cap_cps: 1e9,
            cycles_per_bit: 270.0,
            quota,
            tx_power_w: 10.0,
            energy_budget_j: 1e5,
            basic_energy_j: 0.0,
            chip_coeff: 1e-28,
            coverage_radius_m: 5000.0,
        }
    }

    pub(crate) fn hap() -> Hap {
        Hap {
            id: 0,
            position: Point::new(5000.0, 5000.0),
            altitude_m: 20_000.0,
            compute_cap_cps: 5e10,
            cycles_per_bit: 1100.0,
            energy_budget_j: 1e6,
            basic_energy_j: 0.0,
            chip_coeff: 1e-28,
            coverage_radius_m: 1e5,
        }
    }

    pub(crate) fn build(mut iots: Vec<IotDevice>, mut uavs: Vec<Uav>) -> Scenario {
        for (k, d) in iots.iter_mut().enumerate() {
            d.id = k;
        }
        for (k, u) in uavs.iter_mut().enumerate() {
            u.id = k;
        }
        let s = Scenario {
            iots,
            uavs,
            haps: alloc::vec![hap()],
            link: LinkModel::default(),
            weights: SolverWeights::default(),
            contention_mode: ContentionMode::Dedicated,
            score_ranges: ScoreRanges {
                data_size_bits: (1e7, 1e8),
                deadline_s: (10.0, 200.0),
            },
            region_m: 10_000.0,
            seed: 0,
        };
        s.validate().unwrap();
        s
    }
}

#[cfg(test)]
mod tests {
    use super::tests_support::*;
    use super::*;

    #[test]
    fn assign_and_swap_keep_both_views_consistent() {
        let s = build(
            vec![iot(0.0, 0.0, 1e8, 100.0), iot(10.0, 0.0, 1e8, 100.0)],
            vec![uav(0.0, 0.0, 1), uav(20.0, 0.0, 1)],
        );
        let ctx = MatchingContext::new(&s).unwrap();
        let mut m = Matching::empty(&s);
        m.assign(0, 0);
        m.assign(1, 1);
        assert!(m.is_full(0));
        m.swap(0, 1);
        assert_eq!(m.partner(0), Some(1));
        assert_eq!(m.members(0), &[1]);
        assert!(m.is_consistent(&ctx));
        assert_eq!(m.x_flags(), vec![vec![false, true], vec![true, false]]);
    }

    #[test]
    #[should_panic(expected = "is full")]
    fn quota_is_enforced() {
        let s = build(
            vec![iot(0.0, 0.0, 1e8, 100.0), iot(0.0, 0.0, 1e8, 100.0)],
            vec![uav(0.0, 0.0, 1)],
        );
        let mut m = Matching::empty(&s);
        m.assign(0, 0);
        m.assign(1, 0);
    }

    #[test]
    fn candidates_respect_coverage_and_upload_deadline() {
        let s = build(
            vec![
                iot(0.0, 0.0, 1e8, 100.0),
                iot(9000.0, 0.0, 1e8, 100.0),
                // 26.6 s upload does not fit a 20 s deadline
                iot(0.0, 0.0, 1e8, 20.0),
            ],
            vec![uav(0.0, 0.0, 5)],
        );
        let ctx = MatchingContext::new(&s).unwrap();
        assert_eq!(ctx.candidates(0), &[0]);
        assert!(ctx.candidates(1).is_empty());
        assert!(ctx.candidates(2).is_empty());
    }
}
