use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::{check_feasible, objective_value, Evaluator, Route, Scenario, Solution};

/// Largest instance the oracle accepts unless told otherwise.
pub const DEFAULT_MAX_IOT: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactLimits {
    pub max_iot: usize,
    /// Cut branches by the remaining-data bound and by partial infeasibility.
    /// Without it every route vector is built and checked on its flags.
    pub prune: bool,
}

impl Default for ExactLimits {
    fn default() -> Self {
        ExactLimits {
            max_iot: DEFAULT_MAX_IOT,
            prune: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExactOutcome {
    pub solution: Solution,
    pub routes: Vec<Route>,
    pub objective: f64,
    /// Search-tree nodes visited.
    pub visited: u64,
}

/// Serving routes open to one device: compute on or relay through each
/// covering UAV, or upload straight to a covering HAP.
fn route_options(sc: &Scenario, iot: usize) -> Vec<Route> {
    let mut out = Vec::new();
    for u in (0..sc.n_uav()).filter(|&u| sc.uav_covers(u, iot)) {
        out.push(Route::Uav(u));
        out.push(Route::Relay { uav: u, hap: 0 });
    }
    if sc.hap_covers(0, iot) {
        out.push(Route::Direct { hap: 0 });
    }
    out
}

struct Search<'e, 'a> {
    eval: &'e Evaluator<'a>,
    order: Vec<usize>,
    options: Vec<Vec<Route>>,
    /// Data of the devices from each depth on.
    suffix_bits: Vec<f64>,
    routes: Vec<Route>,
    best: f64,
    best_routes: Vec<Route>,
    visited: u64,
}

impl Search<'_, '_> {
    fn bits(&self, i: usize) -> f64 {
        self.eval.scenario().iots[i].data_size_bits
    }

    // Feasibility is monotone: adding a task only adds load, energy and
    // queueing, so an infeasible partial plan has no feasible completion.
    fn pruned(&mut self, depth: usize, current: f64) {
        self.visited += 1;
        if current > self.best {
            self.best = current;
            self.best_routes.clone_from(&self.routes);
        }
        if depth == self.order.len() || current + self.suffix_bits[depth] <= self.best {
            return;
        }
        let i = self.order[depth];
        for k in 0..self.options[i].len() {
            self.routes[i] = self.options[i][k];
            if self.eval.is_feasible(&self.routes) {
                let bits = self.bits(i);
                self.pruned(depth + 1, current + bits);
            }
        }
        self.routes[i] = Route::Unserved;
        self.pruned(depth + 1, current);
    }

    fn exhaustive(&mut self, depth: usize) -> Result<()> {
        self.visited += 1;
        let sc = self.eval.scenario();
        if depth == self.order.len() {
            let sol = Solution::flags_from_routes(&self.routes, sc)?;
            if check_feasible(&sol, sc)?.feasible {
                let obj = objective_value(&sol, sc);
                if obj > self.best {
                    self.best = obj;
                    self.best_routes.clone_from(&self.routes);
                }
            }
            return Ok(());
        }
        let i = self.order[depth];
        for k in 0..self.options[i].len() {
            self.routes[i] = self.options[i][k];
            self.exhaustive(depth + 1)?;
        }
        self.routes[i] = Route::Unserved;
        self.exhaustive(depth + 1)
    }
}

/// Maximum total computed data over all route vectors.
///
/// Devices are branched on in descending data size. In serial-queue mode
/// queue orders follow the fixed priority rule, so the search covers
/// assignments, not service orders.
pub fn exact_optimal(scenario: &Scenario, limits: ExactLimits) -> Result<ExactOutcome> {
    scenario.single_hap()?;
    let n = scenario.n_iot();
    if n > limits.max_iot {
        return Err(Error::InstanceTooLarge {
            n_iot: n,
            limit: limits.max_iot,
        });
    }
    let eval = Evaluator::new(scenario)?;
    let mut order: Vec<usize> = (0..n).collect();
    let bits = |i: usize| scenario.iots[i].data_size_bits;
    order.sort_by(|&a, &b| bits(b).total_cmp(&bits(a)).then(a.cmp(&b)));
    let mut suffix_bits = vec![0.0; n + 1];
    for d in (0..n).rev() {
        suffix_bits[d] = suffix_bits[d + 1] + bits(order[d]);
    }

    let mut search = Search {
        eval: &eval,
        order,
        options: (0..n).map(|i| route_options(scenario, i)).collect(),
        suffix_bits,
        routes: vec![Route::Unserved; n],
        best: 0.0,
        best_routes: vec![Route::Unserved; n],
        visited: 0,
    };
    if limits.prune {
        search.pruned(0, 0.0);
    } else {
        search.exhaustive(0)?;
    }

    let solution = Solution::from_routes(&search.best_routes, scenario)?;
    Ok(ExactOutcome {
        objective: objective_value(&solution, scenario),
        solution,
        routes: search.best_routes,
        visited: search.visited,
    })
}
