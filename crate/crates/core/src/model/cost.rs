//! Computing-time and energy terms of individual tasks.

use super::{Hap, IotDevice, Uav};

/// Time for `uav` to process the task of `iot`.
pub fn compute_time_uav(iot: &IotDevice, uav: &Uav) -> f64 {
    iot.data_size_bits * uav.cycles_per_bit / uav.compute_cap_cps
}

/// Time for `hap` to process the task of `iot`.
pub fn compute_time_hap(iot: &IotDevice, hap: &Hap) -> f64 {
    iot.data_size_bits * hap.cycles_per_bit / hap.compute_cap_cps
}

/// Energy `uav` spends computing the task of `iot`.
pub fn compute_energy_uav(iot: &IotDevice, uav: &Uav) -> f64 {
    uav.chip_coeff
        * uav.compute_cap_cps
        * uav.compute_cap_cps
        * iot.data_size_bits
        * uav.cycles_per_bit
}

/// Energy `hap` spends computing the task of `iot`.
pub fn compute_energy_hap(iot: &IotDevice, hap: &Hap) -> f64 {
    hap.chip_coeff
        * hap.compute_cap_cps
        * hap.compute_cap_cps
        * iot.data_size_bits
        * hap.cycles_per_bit
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::test_support::{hap, iot_at, uav_at};

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn uav_compute_time() {
        let u = uav_at(0.0, 0.0);
        let mut d = iot_at(0.0, 0.0);
        assert!(rel(compute_time_uav(&d, &u), 27.0) < 1e-15);
        d.data_size_bits = 1e7;
        assert!(rel(compute_time_uav(&d, &u), 2.7) < 1e-15);
        d.data_size_bits = 0.0;
        assert_eq!(compute_time_uav(&d, &u), 0.0);
    }

    #[test]
    fn hap_compute_time() {
        let h = hap();
        let mut d = iot_at(0.0, 0.0);
        assert!(rel(compute_time_hap(&d, &h), 2.2) < 1e-15);
        d.data_size_bits = 1e7;
        assert!(rel(compute_time_hap(&d, &h), 0.22) < 1e-15);
        d.data_size_bits = 0.0;
        assert_eq!(compute_time_hap(&d, &h), 0.0);
    }

    #[test]
    fn compute_energies() {
        let d = iot_at(0.0, 0.0);
        assert!(rel(compute_energy_uav(&d, &uav_at(0.0, 0.0)), 2.7) < 1e-12);
        assert!(rel(compute_energy_hap(&d, &hap()), 27_500.0) < 1e-12);
    }
}
