#![allow(dead_code)]

use crase_core::{OracleConfig, RateParams};

pub fn rates(gamma_b1: f64, gamma_a1: f64, gamma_b2: f64, gamma_a2: f64) -> RateParams {
    RateParams::new(gamma_b1, gamma_a1, gamma_b2, gamma_a2).unwrap()
}

/// Warning-free but coarse: about a quarter of a second per run. Good for
/// structural checks, not for the accuracy targets.
pub fn small_config(rates: RateParams) -> OracleConfig {
    OracleConfig {
        rates,
        m_oscillators: 335,
        delta_max: 10.0,
        dt: 0.01,
        t_region: 95.0,
        mode_sigma: 8.0,
        mode_center: 45.0,
    }
}
