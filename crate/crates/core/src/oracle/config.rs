use std::f64::consts::PI;
use std::fmt;

use crate::crase::RateParams;
use crate::error::{invalid, Result};

/// Number of mode widths kept on either side of the mode centre.
pub const MODE_HALF_WIDTHS: f64 = 5.0;

/// Discretization controls for the time-domain oracle.
///
/// Region 1 runs over `[-t_region, 0]`, region 2 over `[0, t_region]`. The
/// ASE mode is centred at `-mode_center`, the RASE mode at `+mode_center`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub rates: RateParams,
    /// Oscillators in the detuning grid; odd so that zero detuning is sampled.
    pub m_oscillators: usize,
    /// Half-width of the inhomogeneous line.
    pub delta_max: f64,
    /// Requested time step; the actual step divides `t_region` evenly.
    pub dt: f64,
    pub t_region: f64,
    /// Standard deviation of `|g(t)|^2`.
    pub mode_sigma: f64,
    pub mode_center: f64,
}

impl Default for OracleConfig {
    /// Adiabatic-regime defaults for `gamma = (1, 1/3, 1, 1)`, i.e.
    /// `cosh(chi) = 2`, `eps = 0`.
    ///
    /// The residual error is dominated by the finite mode bandwidth and
    /// falls like `1/mode_sigma^2`; at `mode_sigma = 40` the Duan sum at
    /// `theta = 1/2` is about 5% above `exp(-2 chi)`. The region length keeps
    /// 15 time units of lead-in before the mode, and the grid is dense enough
    /// that its recurrence time (about 465) exceeds 1.1 x `t_region`.
    fn default() -> Self {
        Self {
            rates: RateParams {
                gamma_b1: 1.0,
                gamma_a1: 1.0 / 3.0,
                gamma_b2: 1.0,
                gamma_a2: 1.0,
            },
            m_oscillators: 1481,
            delta_max: 10.0,
            dt: 0.01,
            t_region: 420.0,
            mode_sigma: 40.0,
            mode_center: 205.0,
        }
    }
}

/// Conditions under which the oracle still runs but is not expected to
/// reproduce the adiabatic closed form.
#[derive(Debug, Clone, PartialEq)]
pub enum RegimeWarning {
    /// The inhomogeneous line is not much wider than the cavity rates.
    NarrowLine { delta_max: f64, max_rate: f64 },
    /// Time step does not resolve the fastest detuning.
    CoarseStep { dt: f64, limit: f64 },
    /// Temporal mode is not narrowband relative to the cavity.
    BroadbandMode { bandwidth: f64, limit: f64 },
    /// Discrete grid rephases (revives) within the simulated window.
    Recurrence { period: f64, window: f64 },
    /// Mode support starts before the initial transient has decayed.
    Transient { margin: f64, needed: f64 },
}

impl fmt::Display for RegimeWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NarrowLine { delta_max, max_rate } => write!(
                f,
                "inhomogeneous half-width {delta_max} is below 10x the largest cavity rate {max_rate}"
            ),
            Self::CoarseStep { dt, limit } => {
                write!(f, "time step {dt} exceeds 0.1/delta_max = {limit}")
            }
            Self::BroadbandMode { bandwidth, limit } => write!(
                f,
                "mode bandwidth 1/sigma = {bandwidth} exceeds 0.2 x net cavity rate = {limit}; \
                 the adiabatic (narrowband) regime is broken"
            ),
            Self::Recurrence { period, window } => write!(
                f,
                "grid recurrence time {period} is shorter than 1.1 x the region length {window}"
            ),
            Self::Transient { margin, needed } => write!(
                f,
                "mode support starts {margin} after a region edge, less than the {needed} needed \
                 for cavity transients to decay"
            ),
        }
    }
}

impl OracleConfig {
    /// Number of time steps per region.
    pub fn steps(&self) -> usize {
        (self.t_region / self.dt).round().max(1.0) as usize
    }

    /// Actual time step, `t_region / steps`.
    pub fn step(&self) -> f64 {
        self.t_region / self.steps() as f64
    }

    pub fn detuning_spacing(&self) -> f64 {
        2.0 * self.delta_max / (self.m_oscillators as f64 - 1.0)
    }

    /// Checks hard constraints and returns the soft regime warnings.
    pub fn validate(&self) -> Result<Vec<RegimeWarning>> {
        self.rates.validate()?;
        if self.m_oscillators < 3 || self.m_oscillators.is_multiple_of(2) {
            return invalid(format!(
                "m_oscillators must be odd and >= 3, got {}",
                self.m_oscillators
            ));
        }
        for (name, v) in [
            ("delta_max", self.delta_max),
            ("dt", self.dt),
            ("t_region", self.t_region),
            ("mode_sigma", self.mode_sigma),
            ("mode_center", self.mode_center),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return invalid(format!("{name} must be finite and > 0, got {v}"));
            }
        }
        if self.dt > self.t_region {
            return invalid("dt must not exceed t_region");
        }
        let reach = MODE_HALF_WIDTHS * self.mode_sigma;
        if self.mode_center + reach > self.t_region {
            return invalid(format!(
                "mode support mode_center + 5 sigma = {} extends past t_region = {}",
                self.mode_center + reach,
                self.t_region
            ));
        }
        if self.mode_center - reach < 0.0 {
            return invalid(format!(
                "mode support mode_center - 5 sigma = {} crosses the rephasing pulse at t = 0",
                self.mode_center - reach
            ));
        }

        let r = &self.rates;
        let mut warnings = Vec::new();
        if self.delta_max < 10.0 * r.max_rate() {
            warnings.push(RegimeWarning::NarrowLine {
                delta_max: self.delta_max,
                max_rate: r.max_rate(),
            });
        }
        if self.dt > 0.1 / self.delta_max {
            warnings.push(RegimeWarning::CoarseStep {
                dt: self.dt,
                limit: 0.1 / self.delta_max,
            });
        }
        let net = (r.gamma_b1 - r.gamma_a1).min(r.gamma_b2 + r.gamma_a2);
        if 1.0 / self.mode_sigma > 0.2 * net {
            warnings.push(RegimeWarning::BroadbandMode {
                bandwidth: 1.0 / self.mode_sigma,
                limit: 0.2 * net,
            });
        }
        let period = 2.0 * PI / self.detuning_spacing();
        if period < 1.1 * self.t_region {
            warnings.push(RegimeWarning::Recurrence {
                period,
                window: self.t_region,
            });
        }
        let lead = self.t_region - self.mode_center - reach;
        let needed = 5.0 / (r.gamma_b1 - r.gamma_a1);
        if lead < needed {
            warnings.push(RegimeWarning::Transient {
                margin: lead,
                needed,
            });
        }
        Ok(warnings)
    }
}
