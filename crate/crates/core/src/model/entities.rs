use alloc::vec::Vec;

use crate::error::{Error, Result};

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

/// Horizontal ground-plane coordinates in meters.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Point {
    pub x_m: f64,
    pub y_m: f64,
}

impl Point {
    pub const fn new(x_m: f64, y_m: f64) -> Self {
        Point { x_m, y_m }
    }

    pub fn distance_sq(&self, other: &Point) -> f64 {
        let dx = self.x_m - other.x_m;
        let dy = self.y_m - other.y_m;
        dx * dx + dy * dy
    }

    pub fn distance(&self, other: &Point) -> f64 {
        crate::math::hypot(self.x_m - other.x_m, self.y_m - other.y_m)
    }

    fn is_finite(&self) -> bool {
        self.x_m.is_finite() && self.y_m.is_finite()
    }
}

/// A terrestrial device holding one computation task.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct IotDevice {
    pub id: usize,
    pub position: Point,
    pub data_size_bits: f64,
    /// Maximum tolerated completion delay.
    pub deadline_s: f64,
    pub tx_power_w: f64,
    pub energy_budget_j: f64,
    pub basic_energy_j: f64,
}

impl IotDevice {
    pub fn validate(&self) -> Result<()> {
        let bad = |reason| {
            Err(Error::InvalidEntity {
                entity: "IoT device",
                id: self.id,
                reason,
            })
        };
        if !self.position.is_finite() {
            return bad("position must be finite");
        }
        if !(self.data_size_bits > 0.0 && self.data_size_bits.is_finite()) {
            return bad("data size must be positive");
        }
        if !(self.deadline_s > 0.0 && self.deadline_s.is_finite()) {
            return bad("deadline must be positive");
        }
        if !(self.tx_power_w > 0.0 && self.tx_power_w.is_finite()) {
            return bad("transmit power must be positive");
        }
        if !(self.basic_energy_j >= 0.0 && self.energy_budget_j >= self.basic_energy_j) {
            return bad("energy budget must cover the basic energy, which must be non-negative");
        }
        Ok(())
    }
}

/// A hovering UAV with an on-board edge server.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Uav {
    pub id: usize,
    pub position: Point,
    pub altitude_m: f64,
    pub compute_cap_cps: f64,
    pub cycles_per_bit: f64,
    /// Maximum number of matched IoT devices.
    pub quota: usize,
    pub tx_power_w: f64,
    pub energy_budget_j: f64,
    pub basic_energy_j: f64,
    /// Chip-dependent energy coefficient of the processor.
    pub chip_coeff: f64,
    /// Maximum horizontal distance of a served IoT device.
    pub coverage_radius_m: f64,
}

impl Uav {
    pub fn validate(&self) -> Result<()> {
        let bad = |reason| {
            Err(Error::InvalidEntity {
                entity: "UAV",
                id: self.id,
                reason,
            })
        };
        if !self.position.is_finite() {
            return bad("position must be finite");
        }
        if !(self.altitude_m > 0.0 && self.altitude_m.is_finite()) {
            return bad("altitude must be positive");
        }
        if !(self.compute_cap_cps > 0.0 && self.compute_cap_cps.is_finite()) {
            return bad("compute capability must be positive");
        }
        if !(self.cycles_per_bit > 0.0 && self.cycles_per_bit.is_finite()) {
            return bad("cycles per bit must be positive");
        }
        if self.quota < 1 {
            return bad("quota must be at least 1");
        }
        if !(self.tx_power_w > 0.0 && self.tx_power_w.is_finite()) {
            return bad("transmit power must be positive");
        }
        if !(self.coverage_radius_m > 0.0) {
            return bad("coverage radius must be positive");
        }
        if !(self.chip_coeff >= 0.0 && self.chip_coeff.is_finite()) {
            return bad("chip coefficient must be non-negative");
        }
        if !(self.basic_energy_j >= 0.0 && self.energy_budget_j >= self.basic_energy_j) {
            return bad("energy budget must cover the basic energy, which must be non-negative");
        }
        Ok(())
    }
}

/// A high-altitude platform with a large edge server.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Hap {
    pub id: usize,
    /// Horizontal position; only the direct IoT-to-HAP link uses it.
    pub position: Point,
    pub altitude_m: f64,
    pub compute_cap_cps: f64,
    pub cycles_per_bit: f64,
    pub energy_budget_j: f64,
    pub basic_energy_j: f64,
    pub chip_coeff: f64,
    /// Horizontal radius within which IoT devices reach the HAP directly.
    pub coverage_radius_m: f64,
}

impl Hap {
    pub fn validate(&self) -> Result<()> {
        let bad = |reason| {
            Err(Error::InvalidEntity {
                entity: "HAP",
                id: self.id,
                reason,
            })
        };
        if !self.position.is_finite() {
            return bad("position must be finite");
        }
        if !(self.altitude_m > 0.0 && self.altitude_m.is_finite()) {
            return bad("altitude must be positive");
        }
        if !(self.compute_cap_cps > 0.0 && self.compute_cap_cps.is_finite()) {
            return bad("compute capability must be positive");
        }
        if !(self.cycles_per_bit > 0.0 && self.cycles_per_bit.is_finite()) {
            return bad("cycles per bit must be positive");
        }
        if !(self.coverage_radius_m >= 0.0) {
            return bad("coverage radius must be non-negative");
        }
        if !(self.chip_coeff >= 0.0 && self.chip_coeff.is_finite()) {
            return bad("chip coefficient must be non-negative");
        }
        if !(self.basic_energy_j >= 0.0 && self.energy_budget_j >= self.basic_energy_j) {
            return bad("energy budget must cover the basic energy, which must be non-negative");
        }
        Ok(())
    }
}

/// Physical constants of the IoT-to-UAV and UAV-to-HAP links.
///
/// All gains and losses are linear ratios.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkModel {
    pub bandwidth_i2u_hz: f64,
    /// Reference SNR at 1 m per watt of transmit power (reference channel
    /// gain over noise power).
    pub ref_snr_per_watt: f64,
    pub bandwidth_u2h_hz: f64,
    pub antenna_gain_u2h: f64,
    pub line_loss: f64,
    pub boltzmann: f64,
    pub noise_temp_k: f64,
    pub carrier_hz: f64,
    pub light_speed_mps: f64,
}

impl Default for LinkModel {
    fn default() -> Self {
        LinkModel {
            bandwidth_i2u_hz: 1e6,
            ref_snr_per_watt: 1e8,
            bandwidth_u2h_hz: 2e7,
            antenna_gain_u2h: crate::math::db_to_linear(15.0),
            line_loss: 1.0,
            boltzmann: 1.38e-23,
            noise_temp_k: 1000.0,
            carrier_hz: 2.4e9,
            light_speed_mps: 3e8,
        }
    }
}

impl LinkModel {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            self.bandwidth_i2u_hz,
            self.ref_snr_per_watt,
            self.bandwidth_u2h_hz,
            self.antenna_gain_u2h,
            self.line_loss,
            self.boltzmann,
            self.noise_temp_k,
            self.carrier_hz,
            self.light_speed_mps,
        ];
        if fields.iter().all(|v| *v > 0.0 && v.is_finite()) {
            Ok(())
        } else {
            Err(Error::InvalidScenario("link constants must be positive and finite"))
        }
    }
}

/// Weights of the IoT-side (`lambda*`) and UAV-side (`iota*`) preference scores.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct SolverWeights {
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
    pub iota1: f64,
    pub iota2: f64,
}

impl Default for SolverWeights {
    fn default() -> Self {
        SolverWeights {
            lambda1: 0.4,
            lambda2: 0.4,
            lambda3: 0.2,
            iota1: 0.5,
            iota2: 0.5,
        }
    }
}

impl SolverWeights {
    pub fn validate(&self) -> Result<()> {
        let all = [self.lambda1, self.lambda2, self.lambda3, self.iota1, self.iota2];
        if !all.iter().all(|w| *w >= 0.0 && w.is_finite()) {
            return Err(Error::InvalidScenario("solver weights must be non-negative"));
        }
        if self.lambda1 + self.lambda2 + self.lambda3 <= 0.0 {
            return Err(Error::InvalidScenario("lambda weights must not all be zero"));
        }
        if self.iota1 + self.iota2 <= 0.0 {
            return Err(Error::InvalidScenario("iota weights must not all be zero"));
        }
        Ok(())
    }
}

/// How tasks sharing one edge server experience compute delay.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum ContentionMode {
    /// Every task sees the full server capacity; no queueing.
    Dedicated,
    /// Tasks on one server run one after another in priority order.
    #[default]
    SerialQueue,
}

impl ContentionMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            ContentionMode::Dedicated => "dedicated",
            ContentionMode::SerialQueue => "serial-queue",
        }
    }
}

/// Normalisation ranges of the UAV-side preference score.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ScoreRanges {
    pub data_size_bits: (f64, f64),
    pub deadline_s: (f64, f64),
}

impl ScoreRanges {
    /// Tightest ranges spanning the given devices.
    pub fn from_iots(iots: &[IotDevice]) -> Self {
        let mut sigma = (f64::INFINITY, f64::NEG_INFINITY);
        let mut deadline = (f64::INFINITY, f64::NEG_INFINITY);
        for iot in iots {
            sigma.0 = sigma.0.min(iot.data_size_bits);
            sigma.1 = sigma.1.max(iot.data_size_bits);
            deadline.0 = deadline.0.min(iot.deadline_s);
            deadline.1 = deadline.1.max(iot.deadline_s);
        }
        if iots.is_empty() {
            sigma = (0.0, 0.0);
            deadline = (0.0, 0.0);
        }
        ScoreRanges {
            data_size_bits: sigma,
            deadline_s: deadline,
        }
    }
}

/// An immutable problem instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub iots: Vec<IotDevice>,
    pub uavs: Vec<Uav>,
    pub haps: Vec<Hap>,
    pub link: LinkModel,
    pub weights: SolverWeights,
    pub contention_mode: ContentionMode,
    pub score_ranges: ScoreRanges,
    /// Side of the square deployment region, meters.
    pub region_m: f64,
    pub seed: u64,
}

impl Scenario {
    /// Checks every entity and the scenario-wide invariants.
    pub fn validate(&self) -> Result<()> {
        if self.iots.is_empty() {
            return Err(Error::InvalidScenario("no IoT devices"));
        }
        if self.uavs.is_empty() {
            return Err(Error::InvalidScenario("no UAVs"));
        }
        if self.haps.is_empty() {
            return Err(Error::InvalidScenario("no HAPs"));
        }
        for (k, iot) in self.iots.iter().enumerate() {
            if iot.id != k {
                return Err(Error::InvalidScenario("IoT ids must be dense and ordered"));
            }
            iot.validate()?;
        }
        for (k, uav) in self.uavs.iter().enumerate() {
            if uav.id != k {
                return Err(Error::InvalidScenario("UAV ids must be dense and ordered"));
            }
            uav.validate()?;
            let inside = |v: f64| (0.0..=self.region_m).contains(&v);
            if !(inside(uav.position.x_m) && inside(uav.position.y_m)) {
                return Err(Error::InvalidScenario("UAV outside the region"));
            }
        }
        for (k, hap) in self.haps.iter().enumerate() {
            if hap.id != k {
                return Err(Error::InvalidScenario("HAP ids must be dense and ordered"));
            }
            hap.validate()?;
        }
        if !(self.region_m > 0.0 && self.region_m.is_finite()) {
            return Err(Error::InvalidScenario("region side must be positive"));
        }
        let r = &self.score_ranges;
        if !(r.data_size_bits.0 <= r.data_size_bits.1 && r.deadline_s.0 <= r.deadline_s.1) {
            return Err(Error::InvalidScenario("score ranges must satisfy lo <= hi"));
        }
        self.link.validate()?;
        self.weights.validate()
    }

    /// The single HAP the solvers operate on.
    pub fn single_hap(&self) -> Result<&Hap> {
        match self.haps.as_slice() {
            [hap] => Ok(hap),
            haps => Err(Error::UnsupportedHapCount(haps.len())),
        }
    }

    pub fn n_iot(&self) -> usize {
        self.iots.len()
    }

    pub fn n_uav(&self) -> usize {
        self.uavs.len()
    }

    pub fn n_hap(&self) -> usize {
        self.haps.len()
    }

    /// Whether IoT `iot` lies within the coverage disc of UAV `uav`.
    pub fn uav_covers(&self, uav: usize, iot: usize) -> bool {
        let u = &self.uavs[uav];
        u.position.distance(&self.iots[iot].position) <= u.coverage_radius_m
    }

    pub fn hap_covers(&self, hap: usize, iot: usize) -> bool {
        let h = &self.haps[hap];
        h.position.distance(&self.iots[iot].position) <= h.coverage_radius_m
    }
}
