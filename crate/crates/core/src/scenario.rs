//! Seeded instance generation and coverage relations.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{ceil, db_to_linear, sqrt};
use crate::model::{
    ContentionMode, Hap, IotDevice, LinkModel, Point, Scenario, ScoreRanges, SolverWeights, Uav,
};
use crate::rng::ScenarioRng;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

/// How UAVs are placed over the region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum UavLayout {
    /// Centroids of a near-square grid of equal cells.
    #[default]
    Grid,
    /// Uniformly random positions, drawn before the IoT devices.
    Random,
}

/// Parameters of a generated instance. Defaults reproduce the reference
/// experiment: 4 UAVs at 2 km over a 10 km square, one HAP at 20 km.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct GenConfig {
    pub n_iot: usize,
    pub n_uav: usize,
    pub region_m: f64,
    pub uav_altitude_m: f64,
    pub hap_altitude_m: f64,
    pub data_size_range_bits: (f64, f64),
    pub deadline_range_s: (f64, f64),
    pub quota: usize,
    pub uav_layout: UavLayout,

    pub iot_tx_power_w: f64,
    pub iot_energy_budget_j: f64,
    pub iot_basic_energy_j: f64,

    pub uav_compute_cap_cps: f64,
    pub uav_cycles_per_bit: f64,
    pub uav_tx_power_w: f64,
    pub uav_energy_budget_j: f64,
    pub uav_basic_energy_j: f64,
    pub uav_chip_coeff: f64,
    pub uav_coverage_radius_m: f64,

    pub hap_compute_cap_cps: f64,
    pub hap_cycles_per_bit: f64,
    pub hap_energy_budget_j: f64,
    pub hap_basic_energy_j: f64,
    pub hap_chip_coeff: f64,
    /// `None` covers the whole region from its centre.
    pub hap_coverage_radius_m: Option<f64>,

    pub bandwidth_i2u_hz: f64,
    pub ref_snr_per_watt: f64,
    pub bandwidth_u2h_hz: f64,
    pub antenna_gain_u2h_db: f64,
    pub line_loss: f64,
    pub boltzmann: f64,
    pub noise_temp_k: f64,
    pub carrier_hz: f64,
    pub light_speed_mps: f64,

    pub weights: SolverWeights,
    pub contention_mode: ContentionMode,
}

impl Default for GenConfig {
    fn default() -> Self {
        let link = LinkModel::default();
        GenConfig {
            n_iot: 30,
            n_uav: 4,
            region_m: 10_000.0,
            uav_altitude_m: 2_000.0,
            hap_altitude_m: 20_000.0,
            data_size_range_bits: (1e7, 1e8),
            deadline_range_s: (10.0, 200.0),
            quota: 50,
            uav_layout: UavLayout::Grid,
            iot_tx_power_w: 0.5,
            iot_energy_budget_j: 100.0,
            iot_basic_energy_j: 0.0,
            uav_compute_cap_cps: 1e9,
            uav_cycles_per_bit: 270.0,
            uav_tx_power_w: 10.0,
            uav_energy_budget_j: 1e5,
            uav_basic_energy_j: 0.0,
            uav_chip_coeff: 1e-28,
            uav_coverage_radius_m: 5_000.0,
            hap_compute_cap_cps: 5e10,
            hap_cycles_per_bit: 1100.0,
            hap_energy_budget_j: 1e6,
            hap_basic_energy_j: 0.0,
            hap_chip_coeff: 1e-28,
            hap_coverage_radius_m: None,
            bandwidth_i2u_hz: link.bandwidth_i2u_hz,
            ref_snr_per_watt: link.ref_snr_per_watt,
            bandwidth_u2h_hz: link.bandwidth_u2h_hz,
            antenna_gain_u2h_db: 15.0,
            line_loss: link.line_loss,
            boltzmann: link.boltzmann,
            noise_temp_k: link.noise_temp_k,
            carrier_hz: link.carrier_hz,
            light_speed_mps: link.light_speed_mps,
            weights: SolverWeights::default(),
            contention_mode: ContentionMode::default(),
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_iot < 1 || self.n_uav < 1 {
            return Err(Error::InvalidConfig("entity counts must be at least 1"));
        }
        if self.quota < 1 {
            return Err(Error::InvalidConfig("quota must be at least 1"));
        }
        if !(self.region_m > 0.0 && self.region_m.is_finite()) {
            return Err(Error::InvalidConfig("region side must be positive"));
        }
        let (s_lo, s_hi) = self.data_size_range_bits;
        let (d_lo, d_hi) = self.deadline_range_s;
        if !(s_lo > 0.0 && s_lo <= s_hi && s_hi.is_finite()) {
            return Err(Error::InvalidConfig("data size range must satisfy 0 < lo <= hi"));
        }
        if !(d_lo > 0.0 && d_lo <= d_hi && d_hi.is_finite()) {
            return Err(Error::InvalidConfig("deadline range must satisfy 0 < lo <= hi"));
        }
        if !(self.hap_altitude_m > self.uav_altitude_m) {
            return Err(Error::InvalidConfig("HAP must fly above the UAVs"));
        }
        Ok(())
    }

    pub fn link(&self) -> LinkModel {
        LinkModel {
            bandwidth_i2u_hz: self.bandwidth_i2u_hz,
            ref_snr_per_watt: self.ref_snr_per_watt,
            bandwidth_u2h_hz: self.bandwidth_u2h_hz,
            antenna_gain_u2h: db_to_linear(self.antenna_gain_u2h_db),
            line_loss: self.line_loss,
            boltzmann: self.boltzmann,
            noise_temp_k: self.noise_temp_k,
            carrier_hz: self.carrier_hz,
            light_speed_mps: self.light_speed_mps,
        }
    }

    fn uav(&self, id: usize, position: Point) -> Uav {
        Uav {
            id,
            position,
            altitude_m: self.uav_altitude_m,
            compute_cap_cps: self.uav_compute_cap_cps,
            cycles_per_bit: self.uav_cycles_per_bit,
            quota: self.quota,
            tx_power_w: self.uav_tx_power_w,
            energy_budget_j: self.uav_energy_budget_j,
            basic_energy_j: self.uav_basic_energy_j,
            chip_coeff: self.uav_chip_coeff,
            coverage_radius_m: self.uav_coverage_radius_m,
        }
    }

    fn hap(&self) -> Hap {
        let half = self.region_m / 2.0;
        Hap {
            id: 0,
            position: Point::new(half, half),
            altitude_m: self.hap_altitude_m,
            compute_cap_cps: self.hap_compute_cap_cps,
            cycles_per_bit: self.hap_cycles_per_bit,
            energy_budget_j: self.hap_energy_budget_j,
            basic_energy_j: self.hap_basic_energy_j,
            chip_coeff: self.hap_chip_coeff,
            coverage_radius_m: self
                .hap_coverage_radius_m
                .unwrap_or(half * core::f64::consts::SQRT_2),
        }
    }
}

/// Grid cell centroids for `n` UAVs: `ceil(sqrt(n))` columns, as many rows
/// as needed, filled row by row.
fn grid_positions(n: usize, region_m: f64) -> Vec<Point> {
    let cols = (ceil(sqrt(n as f64)) as usize).max(1);
    let rows = n.div_ceil(cols);
    let (w, h) = (region_m / cols as f64, region_m / rows as f64);
    (0..n)
        .map(|k| {
            let (c, r) = (k % cols, k / cols);
            Point::new((c as f64 + 0.5) * w, (r as f64 + 0.5) * h)
        })
        .collect()
}

/// Generates an instance; a pure function of `(config, seed)`.
pub fn generate(config: &GenConfig, seed: u64) -> Result<Scenario> {
    config.validate()?;
    let mut rng = ScenarioRng::new(seed);
    let region = config.region_m;

    let positions = match config.uav_layout {
        UavLayout::Grid => grid_positions(config.n_uav, region),
        UavLayout::Random => (0..config.n_uav)
            .map(|_| {
                let x = rng.uniform(0.0, region);
                let y = rng.uniform(0.0, region);
                Point::new(x, y)
            })
            .collect(),
    };
    let uavs: Vec<Uav> = positions
        .into_iter()
        .enumerate()
        .map(|(id, p)| config.uav(id, p))
        .collect();

    let (s_lo, s_hi) = config.data_size_range_bits;
    let (d_lo, d_hi) = config.deadline_range_s;
    let iots: Vec<IotDevice> = (0..config.n_iot)
        .map(|id| {
            let x = rng.uniform(0.0, region);
            let y = rng.uniform(0.0, region);
            let data_size_bits = rng.uniform(s_lo, s_hi);
            let deadline_s = rng.uniform(d_lo, d_hi);
            IotDevice {
                id,
                position: Point::new(x, y),
                data_size_bits,
                deadline_s,
                tx_power_w: config.iot_tx_power_w,
                energy_budget_j: config.iot_energy_budget_j,
                basic_energy_j: config.iot_basic_energy_j,
            }
        })
        .collect();

    let scenario = Scenario {
        iots,
        uavs,
        haps: alloc::vec![config.hap()],
        link: config.link(),
        weights: config.weights.clone(),
        contention_mode: config.contention_mode,
        score_ranges: ScoreRanges {
            data_size_bits: config.data_size_range_bits,
            deadline_s: config.deadline_range_s,
        },
        region_m: region,
        seed,
    };
    scenario.validate()?;
    Ok(scenario)
}

/// Which UAVs reach which IoT devices, and whether the HAP reaches every UAV.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageMap {
    pub iot_uavs: Vec<Vec<usize>>,
    pub uav_iots: Vec<Vec<usize>>,
    pub hap_covers_all_uavs: bool,
}

impl CoverageMap {
    pub fn is_covered(&self, iot: usize) -> bool {
        !self.iot_uavs[iot].is_empty()
    }
}

pub fn coverage(scenario: &Scenario) -> CoverageMap {
    let mut iot_uavs = alloc::vec![Vec::new(); scenario.n_iot()];
    let mut uav_iots = alloc::vec![Vec::new(); scenario.n_uav()];
    for (u, members) in uav_iots.iter_mut().enumerate() {
        for (i, list) in iot_uavs.iter_mut().enumerate() {
            if scenario.uav_covers(u, i) {
                list.push(u);
                members.push(i);
            }
        }
    }
    let hap_covers_all_uavs = scenario
        .haps
        .iter()
        .all(|h| scenario.uavs.iter().all(|u| h.altitude_m > u.altitude_m));
    CoverageMap {
        iot_uavs,
        uav_iots,
        hap_covers_all_uavs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_instance_shape() {
        let s = generate(&GenConfig::default(), 3).unwrap();
        assert_eq!((s.n_iot(), s.n_uav(), s.n_hap()), (30, 4, 1));
        let cov = coverage(&s);
        assert!(cov.hap_covers_all_uavs);
        let corners: Vec<_> = s.uavs.iter().map(|u| (u.position.x_m, u.position.y_m)).collect();
        assert_eq!(
            corners,
            [(2500.0, 2500.0), (7500.0, 2500.0), (2500.0, 7500.0), (7500.0, 7500.0)]
        );
    }

    #[test]
    fn generation_is_deterministic() {
        let cfg = GenConfig::default();
        assert_eq!(generate(&cfg, 11).unwrap(), generate(&cfg, 11).unwrap());
        assert_ne!(generate(&cfg, 11).unwrap(), generate(&cfg, 12).unwrap());
    }

    #[test]
    fn collapsed_range() {
        let cfg = GenConfig {
            data_size_range_bits: (1e8, 1e8),
            ..GenConfig::default()
        };
        let s = generate(&cfg, 0).unwrap();
        assert!(s.iots.iter().all(|d| d.data_size_bits == 1e8));
    }

    #[test]
    fn invalid_configs() {
        let zero = GenConfig {
            n_iot: 0,
            ..GenConfig::default()
        };
        assert!(matches!(generate(&zero, 0), Err(Error::InvalidConfig(_))));
        let inverted = GenConfig {
            deadline_range_s: (200.0, 10.0),
            ..GenConfig::default()
        };
        assert!(generate(&inverted, 0).is_err());
    }

    #[test]
    fn coverage_boundaries() {
        let mut s = generate(&GenConfig::default(), 1).unwrap();
        s.iots[0].position = s.uavs[2].position;
        // 5001 m west of UAV 0 is out of every disc
        s.iots[1].position = Point::new(2500.0 - 5001.0, 2500.0);
        let cov = coverage(&s);
        assert!(cov.iot_uavs[0].contains(&2));
        assert!(cov.iot_uavs[1].is_empty());
        for (u, list) in cov.uav_iots.iter().enumerate() {
            for &i in list {
                assert!(cov.iot_uavs[i].contains(&u));
            }
        }
    }

    #[test]
    fn grid_covers_whole_region() {
        let s = generate(&GenConfig::default(), 0).unwrap();
        // worst point is a cell corner, 2500*sqrt(2) from its centroid
        let steps = 100;
        for a in 0..=steps {
            for b in 0..=steps {
                let p = Point::new(a as f64 * 100.0, b as f64 * 100.0);
                let nearest = s
                    .uavs
                    .iter()
                    .map(|u| u.position.distance(&p))
                    .fold(f64::INFINITY, f64::min);
                assert!(nearest <= 3_535.533_905_932_738 + 1e-9);
            }
        }
    }

    #[test]
    fn random_layout_stays_in_region() {
        let cfg = GenConfig {
            uav_layout: UavLayout::Random,
            ..GenConfig::default()
        };
        let s = generate(&cfg, 5).unwrap();
        assert!(s.validate().is_ok());
        assert_ne!(s.uavs[0].position, Point::new(2500.0, 2500.0));
    }
}
