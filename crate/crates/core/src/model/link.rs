//! Wireless link model: line-of-sight IoT-to-UAV channel and the free-space
//! UAV-to-HAP channel.

use core::f64::consts::PI;

use super::{Hap, IotDevice, LinkModel, Uav};
use crate::error::{Error, Result};
use crate::math::log2;

pub use crate::math::{db_to_linear, linear_to_db};

/// Line-of-sight channel gain between an IoT device and a UAV.
///
/// The reference gain at 1 m is expressed through the reference SNR with
/// unit noise power, so the value returned is `ref_snr_per_watt / d^2`.
pub fn channel_gain_i2u(iot: &IotDevice, uav: &Uav, link: &LinkModel) -> f64 {
    let d_sq = uav.position.distance_sq(&iot.position) + uav.altitude_m * uav.altitude_m;
    link.ref_snr_per_watt / d_sq
}

/// Shannon rate of the IoT-to-UAV link, bits per second.
pub fn rate_i2u(iot: &IotDevice, uav: &Uav, link: &LinkModel) -> f64 {
    let snr = iot.tx_power_w * channel_gain_i2u(iot, uav, link);
    link.bandwidth_i2u_hz * log2(1.0 + snr)
}

/// Free-space path loss factor `(c / (4 pi d f))^2` at distance `distance_m`.
pub fn free_space_loss(link: &LinkModel, distance_m: f64) -> f64 {
    let r = link.light_speed_mps / (4.0 * PI * distance_m * link.carrier_hz);
    r * r
}

/// Shannon rate of the UAV-to-HAP link, bits per second.
///
/// The distance is the vertical altitude difference.
pub fn rate_u2h(uav: &Uav, hap: &Hap, link: &LinkModel) -> Result<f64> {
    let d_uh = hap.altitude_m - uav.altitude_m;
    if !(d_uh > 0.0) {
        return Err(Error::DegenerateGeometry {
            uav: uav.id,
            hap: hap.id,
        });
    }
    let noise = link.boltzmann * link.noise_temp_k * link.bandwidth_u2h_hz;
    let snr = uav.tx_power_w * link.antenna_gain_u2h * free_space_loss(link, d_uh) * link.line_loss
        / noise;
    Ok(link.bandwidth_u2h_hz * log2(1.0 + snr))
}

/// Rate of a direct IoT-to-HAP link, using the line-of-sight form with the
/// slant distance to the HAP. Only the HAP-only mode uses it.
pub fn rate_i2h(iot: &IotDevice, hap: &Hap, link: &LinkModel) -> f64 {
    let d_sq = hap.position.distance_sq(&iot.position) + hap.altitude_m * hap.altitude_m;
    let snr = iot.tx_power_w * link.ref_snr_per_watt / d_sq;
    link.bandwidth_i2u_hz * log2(1.0 + snr)
}

/// Time to upload the task of `iot` to `uav` (flag applied by the caller).
pub fn tx_time_i2u(iot: &IotDevice, uav: &Uav, link: &LinkModel) -> f64 {
    iot.data_size_bits / rate_i2u(iot, uav, link)
}

/// Time for `uav` to forward `data_bits` to `hap`.
pub fn tx_time_u2h(data_bits: f64, uav: &Uav, hap: &Hap, link: &LinkModel) -> Result<f64> {
    Ok(data_bits / rate_u2h(uav, hap, link)?)
}
