//! Shared fixtures for the criterion benchmarks.

use crase_core::{OracleConfig, RateParams, SqueezeParams};

/// `cosh(chi) = 2`, `eps = 0.25`: a generic interior point.
pub fn interior_point() -> SqueezeParams {
    SqueezeParams::new(2.0f64.acosh(), 0.25).expect("valid parameters")
}

/// A reduced oracle problem that keeps the default's shape but runs in well
/// under a second, so criterion can take enough samples.
pub fn small_oracle_config() -> OracleConfig {
    OracleConfig {
        rates: RateParams {
            gamma_b1: 1.0,
            gamma_a1: 1.0 / 3.0,
            gamma_b2: 1.0,
            gamma_a2: 1.0,
        },
        m_oscillators: 121,
        delta_max: 6.0,
        dt: 0.02,
        t_region: 60.0,
        mode_sigma: 5.0,
        mode_center: 30.0,
    }
}
