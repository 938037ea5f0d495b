//! Constraint evaluation on raw flag matrices.
//!
//! Everything here works from the flags alone, without assuming they form a
//! valid route per IoT, so it can audit any solution including corrupted
//! ones. It shares no code path with [`Evaluator`](super::Evaluator).

use alloc::vec::Vec;
use core::fmt;

use super::cost::{compute_energy_hap, compute_energy_uav, compute_time_hap, compute_time_uav};
use super::link::{rate_i2h, rate_i2u, rate_u2h};
use super::{uav_side_score, ContentionMode, Derived, Scenario, Solution};
use crate::error::{Error, Result};
use crate::FEASIBILITY_TOL;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

/// Constraint identifiers of the offloading problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub enum ConstraintId {
    /// Each IoT uploads to at most one node.
    C12,
    /// Flow conservation at a UAV: compute locally or relay, never both.
    C13,
    /// UAV quota.
    C14,
    /// A HAP only computes data that reached it.
    C15,
    /// IoT energy budget.
    C16,
    /// UAV energy budget.
    C17,
    /// HAP energy budget.
    C18,
    /// IoT deadline.
    C19,
}

impl fmt::Display for ConstraintId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Violation {
    pub constraint: ConstraintId,
    /// Entity indices the constraint is instantiated for, e.g. `[iot, uav]`.
    pub entities: Vec<usize>,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct FeasibilityReport {
    pub feasible: bool,
    pub violations: Vec<Violation>,
}

impl FeasibilityReport {
    pub fn count(&self, constraint: ConstraintId) -> usize {
        self.violations
            .iter()
            .filter(|v| v.constraint == constraint)
            .count()
    }
}

struct FlagModel<'a> {
    sc: &'a Scenario,
    sol: &'a Solution,
    rate_iu: Vec<Vec<f64>>,
    rate_uh: Vec<Vec<f64>>,
    rate_ih: Vec<Vec<f64>>,
    score: Vec<f64>,
}

impl<'a> FlagModel<'a> {
    fn new(sol: &'a Solution, sc: &'a Scenario) -> Result<Self> {
        sol.check_dims(sc)?;
        let link = &sc.link;
        let rate_iu = sc
            .iots
            .iter()
            .map(|d| sc.uavs.iter().map(|u| rate_i2u(d, u, link)).collect())
            .collect();
        let rate_ih = sc
            .iots
            .iter()
            .map(|d| sc.haps.iter().map(|h| rate_i2h(d, h, link)).collect())
            .collect();
        let rate_uh = sc
            .uavs
            .iter()
            .map(|u| sc.haps.iter().map(|h| rate_u2h(u, h, link)).collect())
            .collect::<Result<_>>()?;
        let score = sc
            .iots
            .iter()
            .map(|d| uav_side_score(d, &sc.score_ranges, &sc.weights))
            .collect();
        Ok(FlagModel {
            sc,
            sol,
            rate_iu,
            rate_uh,
            rate_ih,
            score,
        })
    }

    /// Whether `j` precedes `i` in a serial compute queue.
    fn served_before(&self, j: usize, i: usize) -> bool {
        self.score[j] > self.score[i] || (self.score[j] == self.score[i] && j < i)
    }

    /// Arrival group of IoT `j` at HAP `h`: relaying UAV id, direct uploads after all UAVs.
    fn hap_arrival(&self, j: usize, h: usize) -> usize {
        let n_uav = self.sc.n_uav();
        (0..n_uav)
            .find(|&u| self.sol.y[j][u][h])
            .unwrap_or(if self.sol.direct[j][h] { n_uav } else { n_uav + 1 })
    }

    fn delay(&self, i: usize) -> f64 {
        let (sc, sol) = (self.sc, self.sol);
        let d = &sc.iots[i];
        let sigma = d.data_size_bits;
        let mut t = 0.0;
        for (u, uav) in sc.uavs.iter().enumerate() {
            if sol.x[i][u] {
                t += sigma / self.rate_iu[i][u];
            }
            if sol.beta[i][u] {
                t += compute_time_uav(d, uav);
            }
            for h in 0..sc.n_hap() {
                if sol.y[i][u][h] {
                    t += sigma / self.rate_uh[u][h];
                }
            }
        }
        for (h, hap) in sc.haps.iter().enumerate() {
            if sol.gamma[i][h] {
                t += compute_time_hap(d, hap);
            }
            if sol.direct[i][h] {
                t += sigma / self.rate_ih[i][h];
            }
        }
        if sc.contention_mode == ContentionMode::SerialQueue {
            for (u, uav) in sc.uavs.iter().enumerate() {
                if !sol.beta[i][u] {
                    continue;
                }
                for (j, other) in sc.iots.iter().enumerate() {
                    if j != i && sol.beta[j][u] && self.served_before(j, i) {
                        t += compute_time_uav(other, uav);
                    }
                }
            }
            for (h, hap) in sc.haps.iter().enumerate() {
                if !sol.gamma[i][h] {
                    continue;
                }
                let arrival_i = self.hap_arrival(i, h);
                for (j, other) in sc.iots.iter().enumerate() {
                    if j == i || !sol.gamma[j][h] {
                        continue;
                    }
                    let arrival_j = self.hap_arrival(j, h);
                    if arrival_j < arrival_i || (arrival_j == arrival_i && self.served_before(j, i))
                    {
                        t += compute_time_hap(other, hap);
                    }
                }
            }
        }
        t
    }

    fn iot_energy(&self, i: usize) -> f64 {
        let d = &self.sc.iots[i];
        let mut e = d.basic_energy_j;
        for u in 0..self.sc.n_uav() {
            if self.sol.x[i][u] {
                e += d.tx_power_w * d.data_size_bits / self.rate_iu[i][u];
            }
        }
        for h in 0..self.sc.n_hap() {
            if self.sol.direct[i][h] {
                e += d.tx_power_w * d.data_size_bits / self.rate_ih[i][h];
            }
        }
        e
    }

    fn uav_energy(&self, u: usize) -> f64 {
        let uav = &self.sc.uavs[u];
        let mut e = uav.basic_energy_j;
        for (i, d) in self.sc.iots.iter().enumerate() {
            if self.sol.beta[i][u] {
                e += compute_energy_uav(d, uav);
            }
            for h in 0..self.sc.n_hap() {
                if self.sol.y[i][u][h] {
                    e += uav.tx_power_w * d.data_size_bits / self.rate_uh[u][h];
                }
            }
        }
        e
    }

    fn hap_energy(&self, h: usize) -> f64 {
        let hap = &self.sc.haps[h];
        let mut e = hap.basic_energy_j;
        for (i, d) in self.sc.iots.iter().enumerate() {
            if self.sol.gamma[i][h] {
                e += compute_energy_hap(d, hap);
            }
        }
        e
    }

    /// `beta + sum_h y` for one (IoT, UAV) pair.
    fn outflow(&self, i: usize, u: usize) -> usize {
        usize::from(self.sol.beta[i][u]) + self.sol.y[i][u].iter().filter(|&&f| f).count()
    }
}

fn count(flags: &[bool]) -> usize {
    flags.iter().filter(|&&f| f).count()
}

/// Checks every constraint of the offloading problem and reports all violations.
pub fn check_feasible(solution: &Solution, scenario: &Scenario) -> Result<FeasibilityReport> {
    let m = FlagModel::new(solution, scenario)?;
    let sol = solution;
    let mut violations = Vec::new();
    let mut push = |constraint, entities: Vec<usize>, lhs: f64, rhs: f64| {
        violations.push(Violation {
            constraint,
            entities,
            lhs,
            rhs,
        })
    };

    for i in 0..scenario.n_iot() {
        let uploads = count(&sol.x[i]) + count(&sol.direct[i]);
        if uploads > 1 {
            push(ConstraintId::C12, alloc::vec![i], uploads as f64, 1.0);
        }
        for u in 0..scenario.n_uav() {
            let out = m.outflow(i, u);
            let x = usize::from(sol.x[i][u]);
            if out != x {
                push(ConstraintId::C13, alloc::vec![i, u], out as f64, x as f64);
            }
        }
    }
    for (u, uav) in scenario.uavs.iter().enumerate() {
        let load = sol.x.iter().filter(|row| row[u]).count();
        if load > uav.quota {
            push(ConstraintId::C14, alloc::vec![u], load as f64, uav.quota as f64);
        }
    }
    for i in 0..scenario.n_iot() {
        for h in 0..scenario.n_hap() {
            let inflow = (0..scenario.n_uav()).filter(|&u| sol.y[i][u][h]).count()
                + usize::from(sol.direct[i][h]);
            if usize::from(sol.gamma[i][h]) > inflow {
                push(ConstraintId::C15, alloc::vec![i, h], 1.0, inflow as f64);
            }
        }
    }
    for (i, d) in scenario.iots.iter().enumerate() {
        let e = m.iot_energy(i);
        if e > d.energy_budget_j + FEASIBILITY_TOL {
            push(ConstraintId::C16, alloc::vec![i], e, d.energy_budget_j);
        }
    }
    for (u, uav) in scenario.uavs.iter().enumerate() {
        let e = m.uav_energy(u);
        if e > uav.energy_budget_j + FEASIBILITY_TOL {
            push(ConstraintId::C17, alloc::vec![u], e, uav.energy_budget_j);
        }
    }
    for (h, hap) in scenario.haps.iter().enumerate() {
        let e = m.hap_energy(h);
        if e > hap.energy_budget_j + FEASIBILITY_TOL {
            push(ConstraintId::C18, alloc::vec![h], e, hap.energy_budget_j);
        }
    }
    for (i, d) in scenario.iots.iter().enumerate() {
        let t = m.delay(i);
        if t > d.deadline_s + FEASIBILITY_TOL {
            push(ConstraintId::C19, alloc::vec![i], t, d.deadline_s);
        }
    }

    Ok(FeasibilityReport {
        feasible: violations.is_empty(),
        violations,
    })
}

/// Total data computed by UAVs and HAPs, bits.
pub fn objective_value(solution: &Solution, scenario: &Scenario) -> f64 {
    scenario
        .iots
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let flags = count(&solution.beta[i]) + count(&solution.gamma[i]);
            d.data_size_bits * flags as f64
        })
        .sum()
}

/// Completion delay of IoT `iot` under the scenario's contention mode.
///
/// Unassigned devices have zero delay.
pub fn total_delay(iot: usize, solution: &Solution, scenario: &Scenario) -> Result<f64> {
    let m = FlagModel::new(solution, scenario)?;
    check_index(iot, scenario.n_iot())?;
    if (0..scenario.n_uav()).any(|u| m.outflow(iot, u) != usize::from(solution.x[iot][u])) {
        return Err(Error::InconsistentFlags { iot });
    }
    Ok(m.delay(iot))
}

pub fn energy_iot(iot: usize, solution: &Solution, scenario: &Scenario) -> Result<f64> {
    check_index(iot, scenario.n_iot())?;
    Ok(FlagModel::new(solution, scenario)?.iot_energy(iot))
}

pub fn energy_uav(uav: usize, solution: &Solution, scenario: &Scenario) -> Result<f64> {
    check_index(uav, scenario.n_uav())?;
    Ok(FlagModel::new(solution, scenario)?.uav_energy(uav))
}

pub fn energy_hap(hap: usize, solution: &Solution, scenario: &Scenario) -> Result<f64> {
    check_index(hap, scenario.n_hap())?;
    Ok(FlagModel::new(solution, scenario)?.hap_energy(hap))
}

fn check_index(index: usize, len: usize) -> Result<()> {
    if index < len {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            what: "entity index",
            expected: len,
            found: index,
        })
    }
}

pub(super) fn derive(solution: &Solution, scenario: &Scenario) -> Result<Derived> {
    let m = FlagModel::new(solution, scenario)?;
    Ok(Derived {
        delays_s: (0..scenario.n_iot()).map(|i| m.delay(i)).collect(),
        iot_energy_j: (0..scenario.n_iot()).map(|i| m.iot_energy(i)).collect(),
        uav_energy_j: (0..scenario.n_uav()).map(|u| m.uav_energy(u)).collect(),
        hap_energy_j: (0..scenario.n_hap()).map(|h| m.hap_energy(h)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::test_support::{iot_at, scenario, uav_at};
    use crate::model::Route;
    use alloc::vec;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn empty_solution_is_feasible() {
        let s = scenario(vec![iot_at(0.0, 0.0)], vec![uav_at(0.0, 0.0)]);
        let sol = Solution::empty(1, 1, 1);
        let r = check_feasible(&sol, &s).unwrap();
        assert!(r.feasible);
        assert_eq!(objective_value(&sol, &s), 0.0);
        assert_eq!(total_delay(0, &sol, &s).unwrap(), 0.0);
    }

    #[test]
    fn basic_energy_without_assignment() {
        let mut d = iot_at(0.0, 0.0);
        d.basic_energy_j = 5.0;
        let s = scenario(vec![d], vec![uav_at(0.0, 0.0)]);
        let sol = Solution::empty(1, 1, 1);
        assert_eq!(energy_iot(0, &sol, &s).unwrap(), 5.0);
        assert_eq!(energy_uav(0, &sol, &s).unwrap(), 0.0);
        assert_eq!(energy_hap(0, &sol, &s).unwrap(), 0.0);
    }

    #[test]
    fn dedicated_route_delays() {
        let s = scenario(vec![iot_at(0.0, 0.0)], vec![uav_at(0.0, 0.0)]);
        let local = Solution::from_routes(&[Route::Uav(0)], &s).unwrap();
        assert!(rel(total_delay(0, &local, &s).unwrap(), 53.631_956_334_878_9) < 1e-12);
        let relay = Solution::from_routes(&[Route::Relay { uav: 0, hap: 0 }], &s).unwrap();
        assert!(rel(total_delay(0, &relay, &s).unwrap(), 29.423_327_731_741_18) < 1e-9);
    }

    #[test]
    fn route_energies() {
        let s = scenario(vec![iot_at(0.0, 0.0)], vec![uav_at(0.0, 0.0)]);
        let local = Solution::from_routes(&[Route::Uav(0)], &s).unwrap();
        assert!(rel(energy_iot(0, &local, &s).unwrap(), 13.315_978_167_439_45) < 1e-12);
        assert!(rel(energy_uav(0, &local, &s).unwrap(), 2.7) < 1e-12);
        let relay = Solution::from_routes(&[Route::Relay { uav: 0, hap: 0 }], &s).unwrap();
        assert!(rel(energy_uav(0, &relay, &s).unwrap(), 5.913_713_968_622_794) < 1e-9);
        assert!(rel(energy_hap(0, &relay, &s).unwrap(), 27_500.0) < 1e-12);
    }

    #[test]
    fn hap_energy_is_additive() {
        let s = scenario(vec![iot_at(0.0, 0.0), iot_at(0.0, 0.0)], vec![uav_at(0.0, 0.0)]);
        let routes = [Route::Relay { uav: 0, hap: 0 }; 2];
        let sol = Solution::from_routes(&routes, &s).unwrap();
        assert!(rel(energy_hap(0, &sol, &s).unwrap(), 55_000.0) < 1e-12);
    }

    #[test]
    fn double_upload_violates_c12() {
        let s = scenario(vec![iot_at(0.0, 0.0)], vec![uav_at(0.0, 0.0), uav_at(1.0, 0.0)]);
        let mut sol = Solution::from_routes(&[Route::Uav(0)], &s).unwrap();
        sol.x[0][1] = true;
        sol.beta[0][1] = true;
        let r = check_feasible(&sol, &s).unwrap();
        assert!(!r.feasible);
        assert_eq!(r.count(ConstraintId::C12), 1);
        assert_eq!(r.violations[0].entities, vec![0]);
    }

    #[test]
    fn quota_overflow_violates_c14() {
        let mut u = uav_at(0.0, 0.0);
        u.quota = 1;
        let s = scenario(vec![iot_at(0.0, 0.0), iot_at(0.0, 0.0)], vec![u]);
        let sol = Solution::from_routes(&[Route::Uav(0), Route::Uav(0)], &s).unwrap();
        let r = check_feasible(&sol, &s).unwrap();
        assert_eq!(r.count(ConstraintId::C14), 1);
    }

    #[test]
    fn inconsistent_flags() {
        let s = scenario(vec![iot_at(0.0, 0.0)], vec![uav_at(0.0, 0.0)]);
        let mut sol = Solution::empty(1, 1, 1);
        sol.beta[0][0] = true;
        assert_eq!(total_delay(0, &sol, &s), Err(Error::InconsistentFlags { iot: 0 }));
        let r = check_feasible(&sol, &s).unwrap();
        assert_eq!(r.count(ConstraintId::C13), 1);
        sol.beta[0][0] = false;
        sol.gamma[0][0] = true;
        assert_eq!(check_feasible(&sol, &s).unwrap().count(ConstraintId::C15), 1);
    }

    #[test]
    fn objective_counts_only_computed_data() {
        let mut half = iot_at(0.0, 0.0);
        half.data_size_bits = 5e7;
        let s = scenario(vec![iot_at(0.0, 0.0), half, iot_at(0.0, 0.0)], vec![uav_at(0.0, 0.0)]);
        let mut sol = Solution::from_routes(
            &[Route::Uav(0), Route::Relay { uav: 0, hap: 0 }, Route::Relay { uav: 0, hap: 0 }],
            &s,
        )
        .unwrap();
        // relayed but not computed
        sol.gamma[2][0] = false;
        assert_eq!(objective_value(&sol, &s), 1.5e8);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let s = scenario(vec![iot_at(0.0, 0.0)], vec![uav_at(0.0, 0.0)]);
        let sol = Solution::empty(1, 2, 1);
        assert!(matches!(
            check_feasible(&sol, &s),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn deadline_violation_reported() {
        let mut d = iot_at(0.0, 0.0);
        d.deadline_s = 10.0;
        let s = scenario(vec![d], vec![uav_at(0.0, 0.0)]);
        let sol = Solution::from_routes(&[Route::Uav(0)], &s).unwrap();
        let r = check_feasible(&sol, &s).unwrap();
        assert_eq!(r.count(ConstraintId::C19), 1);
        assert!(r.violations[0].lhs > r.violations[0].rhs);
    }
}
