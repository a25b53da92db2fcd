use std::f64::consts::PI;

use super::config::OracleConfig;
use crate::error::{invalid, Result};

/// Uniform detuning grid standing in for the atomic continuum.
///
/// Each oscillator couples to the cavity with `sqrt(gamma * spacing / 2 pi)`,
/// the flat (first Markov) coupling density sampled at the grid spacing, so
/// that `sum_j g_j^2 -> gamma * (2 delta_max) / (2 pi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DetuningGrid {
    detunings: Vec<f64>,
    spacing: f64,
    coupling_r1: f64,
    coupling_r2: f64,
}

impl DetuningGrid {
    pub fn new(m: usize, delta_max: f64, gamma_a1: f64, gamma_a2: f64) -> Result<Self> {
        if m < 3 {
            return invalid(format!(
                "detuning grid needs at least 3 oscillators, got {m}"
            ));
        }
        if delta_max <= 0.0 || !delta_max.is_finite() {
            return invalid(format!("delta_max must be finite and > 0, got {delta_max}"));
        }
        let spacing = 2.0 * delta_max / (m as f64 - 1.0);
        // Built symmetrically so that detunings[j] == -detunings[m - 1 - j] exactly.
        let half = (m - 1) as f64 / 2.0;
        let detunings = (0..m).map(|j| (j as f64 - half) * spacing).collect();
        Ok(Self {
            detunings,
            spacing,
            coupling_r1: (gamma_a1 * spacing / (2.0 * PI)).sqrt(),
            coupling_r2: (gamma_a2 * spacing / (2.0 * PI)).sqrt(),
        })
    }

    pub fn detunings(&self) -> &[f64] {
        &self.detunings
    }

    pub fn len(&self) -> usize {
        self.detunings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.detunings.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Per-oscillator coupling before the rephasing pulse.
    pub fn coupling_r1(&self) -> f64 {
        self.coupling_r1
    }

    /// Per-oscillator coupling after the rephasing pulse.
    pub fn coupling_r2(&self) -> f64 {
        self.coupling_r2
    }

    /// Weight of one oscillator in the continuum field, `sqrt(spacing / 2 pi)`.
    pub fn field_weight(&self) -> f64 {
        (self.spacing / (2.0 * PI)).sqrt()
    }
}

pub fn build_grid(config: &OracleConfig) -> Result<DetuningGrid> {
    DetuningGrid::new(
        config.m_oscillators,
        config.delta_max,
        config.rates.gamma_a1,
        config.rates.gamma_a2,
    )
}
