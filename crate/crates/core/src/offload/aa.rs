use alloc::vec::Vec;

use crate::error::Result;
use crate::model::{Evaluator, Route, Solution};
use crate::trace::{Trace, TraceEvent};

#[derive(Debug, Clone)]
pub struct AaOutcome {
    pub routes: Vec<Route>,
    pub solution: Solution,
    pub placements: usize,
    pub trace: Trace,
}

/// Unserved devices by descending deadline-to-size ratio, ties by id.
fn queue(eval: &Evaluator<'_>, routes: &[Route]) -> Vec<usize> {
    let iots = &eval.scenario().iots;
    let ratio = |i: usize| iots[i].deadline_s / iots[i].data_size_bits;
    let mut q: Vec<usize> = (0..routes.len()).filter(|&i| !routes[i].is_served()).collect();
    q.sort_by(|&a, &b| ratio(b).total_cmp(&ratio(a)).then(a.cmp(&b)));
    q
}

/// Places unserved devices on UAVs with room to spare.
///
/// Each device tries the covering UAVs in id order and takes the first one
/// that keeps the whole plan feasible with the task computed there.
/// Devices that fit nowhere stay unserved. Served tasks are never moved.
pub fn run_aa(routes: &[Route], eval: &Evaluator<'_>, trace_enabled: bool) -> Result<AaOutcome> {
    let sc = eval.scenario();
    let mut routes = routes.to_vec();
    let mut trace = if trace_enabled {
        Trace::enabled()
    } else {
        Trace::disabled()
    };
    let mut placements = 0;
    for i in queue(eval, &routes) {
        let loads = eval.uav_loads(&routes);
        for (u, &load) in loads.iter().enumerate() {
            if !sc.uav_covers(u, i) || load >= sc.uavs[u].quota {
                continue;
            }
            routes[i] = Route::Uav(u);
            if eval.is_feasible(&routes) {
                placements += 1;
                trace.record(|| TraceEvent::Placement {
                    step: placements,
                    iot: i,
                    uav: u,
                });
                break;
            }
            routes[i] = Route::Unserved;
        }
    }
    let solution = Solution::from_routes(&routes, sc)?;
    Ok(AaOutcome {
        routes,
        solution,
        placements,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::tests_support::{build, iot, uav};
    use alloc::vec;

    #[test]
    fn nothing_to_place() {
        let s = build(vec![iot(0.0, 0.0, 1e8, 100.0)], vec![uav(0.0, 0.0, 1)]);
        let eval = Evaluator::new(&s).unwrap();
        let out = run_aa(&[Route::Uav(0)], &eval, false).unwrap();
        assert_eq!(out.routes, vec![Route::Uav(0)]);
        assert_eq!(out.placements, 0);
    }

    #[test]
    fn free_uav_takes_unserved_device() {
        let s = build(
            vec![iot(0.0, 0.0, 1e8, 100.0), iot(0.0, 0.0, 1e8, 100.0)],
            vec![uav(0.0, 0.0, 2)],
        );
        let eval = Evaluator::new(&s).unwrap();
        let out = run_aa(&[Route::Uav(0), Route::Unserved], &eval, true).unwrap();
        assert_eq!(out.routes, vec![Route::Uav(0), Route::Uav(0)]);
        assert_eq!(out.placements, 1);
    }

    #[test]
    fn larger_ratio_wins_the_last_slot() {
        let s = build(
            vec![iot(0.0, 0.0, 1e8, 100.0), iot(0.0, 0.0, 5e7, 100.0)],
            vec![uav(0.0, 0.0, 1)],
        );
        let eval = Evaluator::new(&s).unwrap();
        let out = run_aa(&[Route::Unserved, Route::Unserved], &eval, false).unwrap();
        assert_eq!(out.routes, vec![Route::Unserved, Route::Uav(0)]);
    }

    #[test]
    fn placement_never_breaks_served_tasks() {
        let mut s = build(
            vec![iot(0.0, 0.0, 1e8, 60.0), iot(0.0, 0.0, 1e8, 200.0)],
            vec![uav(0.0, 0.0, 2)],
        );
        s.contention_mode = crate::model::ContentionMode::SerialQueue;
        let eval = Evaluator::new(&s).unwrap();
        // the newcomer outranks the served task and would queue ahead of it
        assert!(eval.priority_rank(1) < eval.priority_rank(0));
        let out = run_aa(&[Route::Uav(0), Route::Unserved], &eval, false).unwrap();
        assert_eq!(out.routes, vec![Route::Uav(0), Route::Unserved]);
    }
}
