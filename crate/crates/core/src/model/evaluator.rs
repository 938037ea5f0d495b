use alloc::vec;
use alloc::vec::Vec;

use super::cost::{compute_energy_hap, compute_energy_uav, compute_time_hap, compute_time_uav};
use super::link::{rate_i2h, rate_i2u, rate_u2h};
use super::{uav_side_score, ContentionMode, Route, Scenario};
use crate::error::Result;
use crate::FEASIBILITY_TOL;

/// Precomputed link rates, task costs and queue priorities of one scenario.
///
/// Evaluates route vectors (one [`Route`] per IoT) quickly; the solvers use
/// it for every tentative move. [`check_feasible`](super::check_feasible)
/// evaluates raw flag matrices independently of this type.
#[derive(Debug, Clone)]
pub struct Evaluator<'a> {
    scenario: &'a Scenario,
    n_uav: usize,
    n_hap: usize,
    rate_iu: Vec<f64>,
    rate_uh: Vec<f64>,
    rate_ih: Vec<f64>,
    score: Vec<f64>,
    rank: Vec<usize>,
    /// IoT ids by descending score, ties by id.
    priority_order: Vec<usize>,
}

impl<'a> Evaluator<'a> {
    pub fn new(scenario: &'a Scenario) -> Result<Self> {
        let (n_iot, n_uav, n_hap) = (scenario.n_iot(), scenario.n_uav(), scenario.n_hap());
        let link = &scenario.link;
        let mut rate_iu = Vec::with_capacity(n_iot * n_uav);
        let mut rate_ih = Vec::with_capacity(n_iot * n_hap);
        for iot in &scenario.iots {
            rate_iu.extend(scenario.uavs.iter().map(|u| rate_i2u(iot, u, link)));
            rate_ih.extend(scenario.haps.iter().map(|h| rate_i2h(iot, h, link)));
        }
        let mut rate_uh = Vec::with_capacity(n_uav * n_hap);
        for uav in &scenario.uavs {
            for hap in &scenario.haps {
                rate_uh.push(rate_u2h(uav, hap, link)?);
            }
        }
        let score: Vec<f64> = scenario
            .iots
            .iter()
            .map(|d| uav_side_score(d, &scenario.score_ranges, &scenario.weights))
            .collect();
        let mut priority_order: Vec<usize> = (0..n_iot).collect();
        priority_order.sort_by(|&a, &b| score[b].total_cmp(&score[a]).then(a.cmp(&b)));
        let mut rank = vec![0; n_iot];
        for (pos, &i) in priority_order.iter().enumerate() {
            rank[i] = pos;
        }
        Ok(Evaluator {
            scenario,
            n_uav,
            n_hap,
            rate_iu,
            rate_uh,
            rate_ih,
            score,
            rank,
            priority_order,
        })
    }

    pub fn scenario(&self) -> &'a Scenario {
        self.scenario
    }

    pub fn rate_i2u(&self, iot: usize, uav: usize) -> f64 {
        self.rate_iu[iot * self.n_uav + uav]
    }

    pub fn rate_u2h(&self, uav: usize, hap: usize) -> f64 {
        self.rate_uh[uav * self.n_hap + hap]
    }

    pub fn rate_i2h(&self, iot: usize, hap: usize) -> f64 {
        self.rate_ih[iot * self.n_hap + hap]
    }

    fn sigma(&self, iot: usize) -> f64 {
        self.scenario.iots[iot].data_size_bits
    }

    pub fn tx_time_i2u(&self, iot: usize, uav: usize) -> f64 {
        self.sigma(iot) / self.rate_i2u(iot, uav)
    }

    pub fn tx_time_u2h(&self, iot: usize, uav: usize, hap: usize) -> f64 {
        self.sigma(iot) / self.rate_u2h(uav, hap)
    }

    pub fn tx_time_i2h(&self, iot: usize, hap: usize) -> f64 {
        self.sigma(iot) / self.rate_i2h(iot, hap)
    }

    pub fn compute_time_uav(&self, iot: usize, uav: usize) -> f64 {
        compute_time_uav(&self.scenario.iots[iot], &self.scenario.uavs[uav])
    }

    pub fn compute_time_hap(&self, iot: usize, hap: usize) -> f64 {
        compute_time_hap(&self.scenario.iots[iot], &self.scenario.haps[hap])
    }

    pub fn compute_energy_uav(&self, iot: usize, uav: usize) -> f64 {
        compute_energy_uav(&self.scenario.iots[iot], &self.scenario.uavs[uav])
    }

    pub fn compute_energy_hap(&self, iot: usize, hap: usize) -> f64 {
        compute_energy_hap(&self.scenario.iots[iot], &self.scenario.haps[hap])
    }

    pub fn relay_energy(&self, iot: usize, uav: usize, hap: usize) -> f64 {
        self.scenario.uavs[uav].tx_power_w * self.tx_time_u2h(iot, uav, hap)
    }

    /// UAV-side preference score of an IoT device.
    pub fn uav_score(&self, iot: usize) -> f64 {
        self.score[iot]
    }

    /// Position of `iot` in the global priority order (0 = first served).
    pub fn priority_rank(&self, iot: usize) -> usize {
        self.rank[iot]
    }

    pub fn priority_order(&self) -> &[usize] {
        &self.priority_order
    }

    /// Transmission plus compute time of a route, without queueing.
    pub fn base_delay(&self, iot: usize, route: Route) -> f64 {
        match route {
            Route::Unserved => 0.0,
            Route::Uav(u) => self.tx_time_i2u(iot, u) + self.compute_time_uav(iot, u),
            Route::Relay { uav, hap } => {
                self.tx_time_i2u(iot, uav)
                    + self.tx_time_u2h(iot, uav, hap)
                    + self.compute_time_hap(iot, hap)
            }
            Route::Direct { hap } => self.tx_time_i2h(iot, hap) + self.compute_time_hap(iot, hap),
        }
    }

    /// Total completion delay of every IoT under the scenario's contention mode.
    pub fn delays(&self, routes: &[Route]) -> Vec<f64> {
        let mut delays: Vec<f64> = routes
            .iter()
            .enumerate()
            .map(|(i, &r)| self.base_delay(i, r))
            .collect();
        if self.scenario.contention_mode == ContentionMode::SerialQueue {
            for (i, wait) in self.queue_waits(routes) {
                delays[i] += wait;
            }
        }
        delays
    }

    /// Serial-queue waiting time of every served IoT.
    ///
    /// UAV queues run in priority order. HAP queues run in arrival order:
    /// relaying UAV id first (direct uploads last), then priority.
    fn queue_waits(&self, routes: &[Route]) -> Vec<(usize, f64)> {
        let mut waits = Vec::new();
        let mut uav_busy = vec![0.0; self.n_uav];
        for &i in &self.priority_order {
            if let Route::Uav(u) = routes[i] {
                waits.push((i, uav_busy[u]));
                uav_busy[u] += self.compute_time_uav(i, u);
            }
        }
        let mut hap_busy = vec![0.0; self.n_hap];
        for group in 0..=self.n_uav {
            for &i in &self.priority_order {
                let hap = match routes[i] {
                    Route::Relay { uav, hap } if uav == group => hap,
                    Route::Direct { hap } if group == self.n_uav => hap,
                    _ => continue,
                };
                waits.push((i, hap_busy[hap]));
                hap_busy[hap] += self.compute_time_hap(i, hap);
            }
        }
        waits
    }

    /// Energy of one IoT device following `route`.
    pub fn iot_energy(&self, iot: usize, route: Route) -> f64 {
        let d = &self.scenario.iots[iot];
        let tx = match route {
            Route::Unserved => 0.0,
            Route::Uav(u) | Route::Relay { uav: u, .. } => self.tx_time_i2u(iot, u),
            Route::Direct { hap } => self.tx_time_i2h(iot, hap),
        };
        d.basic_energy_j + d.tx_power_w * tx
    }

    pub fn uav_energies(&self, routes: &[Route]) -> Vec<f64> {
        let mut e: Vec<f64> = self.scenario.uavs.iter().map(|u| u.basic_energy_j).collect();
        for (i, &r) in routes.iter().enumerate() {
            match r {
                Route::Uav(u) => e[u] += self.compute_energy_uav(i, u),
                Route::Relay { uav, hap } => e[uav] += self.relay_energy(i, uav, hap),
                _ => {}
            }
        }
        e
    }

    pub fn hap_energies(&self, routes: &[Route]) -> Vec<f64> {
        let mut e: Vec<f64> = self.scenario.haps.iter().map(|h| h.basic_energy_j).collect();
        for (i, &r) in routes.iter().enumerate() {
            if let Some(h) = r.hap() {
                e[h] += self.compute_energy_hap(i, h);
            }
        }
        e
    }

    /// Number of IoT devices uploading to each UAV.
    pub fn uav_loads(&self, routes: &[Route]) -> Vec<usize> {
        let mut load = vec![0; self.n_uav];
        for u in routes.iter().filter_map(Route::uav) {
            load[u] += 1;
        }
        load
    }

    /// Whether the plan satisfies quota, energy and delay constraints.
    pub fn is_feasible(&self, routes: &[Route]) -> bool {
        let sc = self.scenario;
        let quota_ok = self
            .uav_loads(routes)
            .iter()
            .zip(&sc.uavs)
            .all(|(&n, u)| n <= u.quota);
        if !quota_ok {
            return false;
        }
        let iot_ok = routes.iter().enumerate().all(|(i, &r)| {
            self.iot_energy(i, r) <= sc.iots[i].energy_budget_j + FEASIBILITY_TOL
        });
        if !iot_ok {
            return false;
        }
        let uav_ok = self
            .uav_energies(routes)
            .iter()
            .zip(&sc.uavs)
            .all(|(&e, u)| e <= u.energy_budget_j + FEASIBILITY_TOL);
        let hap_ok = self
            .hap_energies(routes)
            .iter()
            .zip(&sc.haps)
            .all(|(&e, h)| e <= h.energy_budget_j + FEASIBILITY_TOL);
        uav_ok && hap_ok && self.late(routes).next().is_none()
    }

    /// Served IoT devices whose delay exceeds their deadline.
    pub fn late<'r>(&'r self, routes: &'r [Route]) -> impl Iterator<Item = usize> + 'r {
        let delays = self.delays(routes);
        (0..routes.len()).filter(move |&i| {
            routes[i].is_served()
                && delays[i] > self.scenario.iots[i].deadline_s + FEASIBILITY_TOL
        })
    }

    /// Total computed data of a plan, bits.
    pub fn objective(&self, routes: &[Route]) -> f64 {
        routes
            .iter()
            .enumerate()
            .filter(|(_, r)| r.is_served())
            .map(|(i, _)| self.sigma(i))
            .sum()
    }
}
