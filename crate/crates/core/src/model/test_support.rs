//! Hand-built entities with the default physical parameters.

use alloc::vec::Vec;

use super::*;

pub(crate) fn link() -> LinkModel {
    LinkModel::default()
}

/// 1e8-bit task, 100 s deadline, at the given ground position.
pub(crate) fn iot_at(x: f64, y: f64) -> IotDevice {
    IotDevice {
        id: 0,
        position: Point::new(x, y),
        data_size_bits: 1e8,
        deadline_s: 100.0,
        tx_power_w: 0.5,
        energy_budget_j: 100.0,
        basic_energy_j: 0.0,
    }
}

pub(crate) fn uav_at(x: f64, y: f64) -> Uav {
    Uav {
        id: 0,
        position: Point::new(x, y),
        altitude_m: 2000.0,
        compute_cap_cps: 1e9,
        cycles_per_bit: 270.0,
        quota: 50,
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

/// Scenario over a 10 km region with ids assigned densely.
pub(crate) fn scenario(mut iots: Vec<IotDevice>, mut uavs: Vec<Uav>) -> Scenario {
    for (k, d) in iots.iter_mut().enumerate() {
        d.id = k;
    }
    for (k, u) in uavs.iter_mut().enumerate() {
        u.id = k;
    }
    let score_ranges = ScoreRanges {
        data_size_bits: (1e7, 1e8),
        deadline_s: (10.0, 200.0),
    };
    let s = Scenario {
        iots,
        uavs,
        haps: alloc::vec![hap()],
        link: link(),
        weights: SolverWeights::default(),
        contention_mode: ContentionMode::Dedicated,
        score_ranges,
        region_m: 10_000.0,
        seed: 0,
    };
    s.validate().unwrap();
    s
}
