use alloc::vec;
use alloc::vec::Vec;

use crate::error::Result;
use crate::matching::{run_eea, run_miu, MatchingContext};
use crate::model::{Evaluator, Route, Scenario, Solution};
use crate::offload::run_aa;
use crate::FEASIBILITY_TOL;

/// UAV computing only: matching and swap refinement, then each UAV sheds
/// tasks that do not fit, best-ranked late task first as in the offloading
/// stage, and the adjustment stage refills free slots.
pub fn mode_uav_only(scenario: &Scenario) -> Result<Solution> {
    scenario.single_hap()?;
    let ctx = MatchingContext::new(scenario)?;
    let eval = ctx.evaluator();
    let miu = run_miu(&ctx, false);
    let mut routes = run_eea(miu.matching, &ctx, false).matching.routes();
    for u in 0..scenario.n_uav() {
        shed(eval, &mut routes, u);
    }
    let aa = run_aa(&routes, eval, false)?;
    Ok(aa.solution)
}

fn shed(eval: &Evaluator<'_>, routes: &mut [Route], u: usize) {
    let budget = eval.scenario().uavs[u].energy_budget_j + FEASIBILITY_TOL;
    loop {
        let over = eval.uav_energies(routes)[u] > budget;
        let late: Vec<usize> = eval.late(routes).collect();
        let head = (0..routes.len())
            .filter(|&i| routes[i] == Route::Uav(u) && (over || late.contains(&i)))
            .min_by_key(|&i| eval.priority_rank(i));
        match head {
            Some(i) => routes[i] = Route::Unserved,
            None => break,
        }
    }
}

/// HAP computing only: devices upload straight to the HAP and are admitted
/// in priority order while the plan stays feasible.
pub fn mode_hap_only(scenario: &Scenario) -> Result<Solution> {
    scenario.single_hap()?;
    let eval = Evaluator::new(scenario)?;
    let mut routes = vec![Route::Unserved; scenario.n_iot()];
    for &i in eval.priority_order() {
        if !scenario.hap_covers(0, i) {
            continue;
        }
        routes[i] = Route::Direct { hap: 0 };
        if !eval.is_feasible(&routes) {
            routes[i] = Route::Unserved;
        }
    }
    Solution::from_routes(&routes, scenario)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::tests_support::{build, iot, uav};
    use crate::model::{check_feasible, objective_value};
    use crate::offload::{run_pipeline, Variant};

    #[test]
    fn uav_only_matches_pipeline_without_contention() {
        let s = build(
            vec![iot(0.0, 0.0, 1e8, 100.0), iot(400.0, 0.0, 5e7, 100.0)],
            vec![uav(0.0, 0.0, 5)],
        );
        let u = mode_uav_only(&s).unwrap();
        let p = run_pipeline(&s, Variant::Meha, false).unwrap();
        assert_eq!(objective_value(&u, &s), p.objective(&s));
    }

    #[test]
    fn uav_only_sheds_instead_of_relaying() {
        let s = build(vec![iot(0.0, 0.0, 1e8, 40.0)], vec![uav(0.0, 0.0, 1)]);
        let u = mode_uav_only(&s).unwrap();
        assert_eq!(u.served_count(), 0);
        assert!(check_feasible(&u, &s).unwrap().feasible);
    }

    #[test]
    fn hap_only_direct_link_is_weak() {
        // 0.5 W across a 20 km slant: about 0.2 Mbit/s, so a 1e8-bit task
        // needs ~500 s while a 1e7-bit task with a 200 s deadline fits
        let s = build(
            vec![iot(5000.0, 5000.0, 1e8, 200.0), iot(5000.0, 5000.0, 1e7, 200.0)],
            vec![uav(0.0, 0.0, 5)],
        );
        let h = mode_hap_only(&s).unwrap();
        assert_eq!(h.routes().unwrap(), vec![Route::Unserved, Route::Direct { hap: 0 }]);
        assert!(check_feasible(&h, &s).unwrap().feasible);
    }

    #[test]
    fn hap_only_skips_uncovered() {
        let mut s = build(vec![iot(0.0, 0.0, 1e7, 200.0)], vec![uav(0.0, 0.0, 5)]);
        s.haps[0].coverage_radius_m = 100.0;
        let h = mode_hap_only(&s).unwrap();
        assert_eq!(h.served_count(), 0);
    }
}
