use alloc::vec::Vec;

use super::smallest_task;
use crate::error::Result;
use crate::matching::Matching;
use crate::model::{Evaluator, Route, Solution};
use crate::trace::{Trace, TraceEvent};
use crate::FEASIBILITY_TOL;

#[derive(Debug, Clone)]
pub struct HaOutcome {
    pub routes: Vec<Route>,
    pub solution: Solution,
    pub offloads: usize,
    pub drops: usize,
    pub trace: Trace,
}

struct Run<'e, 'a> {
    eval: &'e Evaluator<'a>,
    routes: Vec<Route>,
    offloads: usize,
    drops: usize,
    trace: Trace,
}

impl Run<'_, '_> {
    fn drop_task(&mut self, i: usize) {
        self.routes[i] = Route::Unserved;
        self.drops += 1;
        let step = self.offloads + self.drops;
        let bits = self.eval.scenario().iots[i].data_size_bits;
        self.trace.record(|| TraceEvent::Drop {
            step,
            iot: i,
            data_size_bits: bits,
        });
    }

    fn uav_over_budget(&self, u: usize) -> bool {
        let uav = &self.eval.scenario().uavs[u];
        self.eval.uav_energies(&self.routes)[u] > uav.energy_budget_j + FEASIBILITY_TOL
    }

    fn hap_over_budget(&self) -> bool {
        let hap = &self.eval.scenario().haps[0];
        self.eval.hap_energies(&self.routes)[0] > hap.energy_budget_j + FEASIBILITY_TOL
    }

    /// Moves late tasks of `u` to the HAP, best-ranked first, until the
    /// tasks left on the UAV all fit. When the UAV's energy budget is
    /// exceeded every local task counts as not fitting.
    fn relieve_uav(&mut self, u: usize) {
        loop {
            let over = self.uav_over_budget(u);
            let late: Vec<usize> = self.eval.late(&self.routes).collect();
            let head = (0..self.routes.len())
                .filter(|&i| self.routes[i] == Route::Uav(u) && (over || late.contains(&i)))
                .min_by_key(|&i| self.eval.priority_rank(i));
            let Some(i) = head else { break };
            self.routes[i] = Route::Relay { uav: u, hap: 0 };
            self.offloads += 1;
            let step = self.offloads + self.drops;
            let score = self.eval.uav_score(i);
            self.trace.record(|| TraceEvent::Offload {
                step,
                iot: i,
                uav: u,
                score,
            });
        }
    }

    /// Drops HAP tasks until every one meets its deadline and the HAP
    /// budget holds. Late tasks go first, smallest data size first; an
    /// energy overrun then sheds the smallest HAP task.
    fn relieve_hap(&mut self) {
        loop {
            let late = smallest_task(
                self.eval,
                self.eval
                    .late(&self.routes)
                    .filter(|&i| self.routes[i].hap().is_some()),
            );
            let victim = match late {
                Some(i) => i,
                None if self.hap_over_budget() => {
                    let on_hap = (0..self.routes.len()).filter(|&i| self.routes[i].hap().is_some());
                    match smallest_task(self.eval, on_hap) {
                        Some(i) => i,
                        None => break,
                    }
                }
                None => break,
            };
            self.drop_task(victim);
        }
    }

    fn shed_uav_energy(&mut self, u: usize) {
        while self.uav_over_budget(u) {
            let on_uav = (0..self.routes.len()).filter(|&i| self.routes[i].uav() == Some(u));
            match smallest_task(self.eval, on_uav) {
                Some(i) => self.drop_task(i),
                None => break,
            }
        }
    }
}

/// Splits matched tasks between UAV and HAP computing.
///
/// Every matched task starts on its UAV. Per UAV, late tasks are offloaded
/// to the HAP in priority order until the rest fit. The HAP then sheds
/// tasks until its deadlines and energy budget hold, and any UAV still over
/// its energy budget sheds its smallest tasks. Shed tasks end unserved.
pub fn run_ha(matching: &Matching, eval: &Evaluator<'_>, trace_enabled: bool) -> Result<HaOutcome> {
    let sc = eval.scenario();
    sc.single_hap()?;
    let mut run = Run {
        eval,
        routes: matching.routes(),
        offloads: 0,
        drops: 0,
        trace: if trace_enabled {
            Trace::enabled()
        } else {
            Trace::disabled()
        },
    };
    for i in 0..run.routes.len() {
        let d = &sc.iots[i];
        if run.routes[i].is_served()
            && eval.iot_energy(i, run.routes[i]) > d.energy_budget_j + FEASIBILITY_TOL
        {
            run.drop_task(i);
        }
    }
    for u in 0..sc.n_uav() {
        run.relieve_uav(u);
    }
    run.relieve_hap();
    for u in 0..sc.n_uav() {
        run.shed_uav_energy(u);
    }
    debug_assert!(eval.is_feasible(&run.routes));

    let solution = Solution::from_routes(&run.routes, sc)?;
    Ok(HaOutcome {
        routes: run.routes,
        solution,
        offloads: run.offloads,
        drops: run.drops,
        trace: run.trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::tests_support::{build, iot, uav};
    use crate::model::{check_feasible, ContentionMode};
    use alloc::vec;

    #[test]
    fn fitting_tasks_stay_local() {
        let s = build(
            vec![iot(0.0, 0.0, 1e8, 100.0), iot(100.0, 0.0, 5e7, 100.0)],
            vec![uav(0.0, 0.0, 5)],
        );
        let eval = Evaluator::new(&s).unwrap();
        let mut m = Matching::empty(&s);
        m.assign(0, 0);
        m.assign(1, 0);
        let out = run_ha(&m, &eval, false).unwrap();
        assert_eq!(out.routes, vec![Route::Uav(0), Route::Uav(0)]);
        assert_eq!(out.offloads + out.drops, 0);
        assert_eq!(out.solution.beta, out.solution.x);
    }

    #[test]
    fn serial_queue_offloads_the_second_task() {
        // 26.6 s upload + 27 s compute fits 60 s once; the queued task
        // would finish at 80.6 s, the relay route takes 29.4 s
        let mut s = build(
            vec![iot(0.0, 0.0, 1e8, 60.0), iot(0.0, 0.0, 1e8, 60.0)],
            vec![uav(0.0, 0.0, 2)],
        );
        s.contention_mode = ContentionMode::SerialQueue;
        let eval = Evaluator::new(&s).unwrap();
        let mut m = Matching::empty(&s);
        m.assign(0, 0);
        m.assign(1, 0);
        let out = run_ha(&m, &eval, true).unwrap();
        assert_eq!(out.offloads, 1);
        assert_eq!(out.drops, 0);
        assert_eq!(out.routes, vec![Route::Uav(0), Route::Relay { uav: 0, hap: 0 }]);
        assert!(check_feasible(&out.solution, &s).unwrap().feasible);
    }

    #[test]
    fn hap_budget_drops_smaller_task() {
        // both tasks miss their deadline locally; the HAP can afford
        // 27.5 kJ + 13.75 kJ only without the second
        let mut s = build(
            vec![iot(0.0, 0.0, 1e8, 40.0), iot(0.0, 0.0, 5e7, 20.0)],
            vec![uav(0.0, 0.0, 2)],
        );
        s.haps[0].energy_budget_j = 30_000.0;
        let eval = Evaluator::new(&s).unwrap();
        let mut m = Matching::empty(&s);
        m.assign(0, 0);
        m.assign(1, 0);
        let out = run_ha(&m, &eval, true).unwrap();
        assert_eq!(out.offloads, 2);
        assert_eq!(out.drops, 1);
        assert_eq!(out.routes, vec![Route::Relay { uav: 0, hap: 0 }, Route::Unserved]);
        assert!(!out.solution.x[1][0]);
        assert!(check_feasible(&out.solution, &s).unwrap().feasible);
    }

    #[test]
    fn late_hap_task_is_dropped_not_a_bystander() {
        // the 5e7-bit task fits the HAP; the 1e8-bit one cannot meet 27 s anywhere
        let s = build(
            vec![iot(0.0, 0.0, 1e8, 27.0), iot(0.0, 0.0, 5e7, 20.0)],
            vec![uav(0.0, 0.0, 2)],
        );
        let eval = Evaluator::new(&s).unwrap();
        let mut m = Matching::empty(&s);
        m.assign(0, 0);
        m.assign(1, 0);
        let out = run_ha(&m, &eval, false).unwrap();
        assert_eq!(out.routes, vec![Route::Unserved, Route::Relay { uav: 0, hap: 0 }]);
    }

    #[test]
    fn multiple_haps_rejected() {
        let mut s = build(vec![iot(0.0, 0.0, 1e8, 100.0)], vec![uav(0.0, 0.0, 1)]);
        let mut h = s.haps[0].clone();
        h.id = 1;
        s.haps.push(h);
        let eval = Evaluator::new(&s).unwrap();
        let m = Matching::empty(&s);
        assert!(run_ha(&m, &eval, false).is_err());
    }
}
