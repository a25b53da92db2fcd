use super::config::{OracleConfig, RegimeWarning};
use super::report::{run_oracle, OracleReport};
use crate::error::{invalid, Result};

/// Ratio between successive refinement levels of the time scales.
pub const REFINEMENT_RATIO: f64 = std::f64::consts::SQRT_2;
/// Tolerated non-monotone wiggle in a delta between two levels.
pub const NOISE_FLOOR: f64 = 1e-3;

/// Configuration refined `level` times from `base`.
///
/// Each level multiplies the mode width, mode centre and region length by
/// `r = sqrt(2)` (halving the non-adiabatic error), widens the line by
/// `sqrt(r)`, and shrinks the step by `sqrt(r)`. The oscillator count grows so
/// that the grid recurrence time keeps pace with the region length.
pub fn refine(base: &OracleConfig, level: u32) -> OracleConfig {
    let l = level as f64;
    let r = REFINEMENT_RATIO;
    let stretch = r.powf(l);
    let widen = r.powf(l / 2.0);
    let intervals = (base.m_oscillators - 1) as f64 * r.powf(1.5 * l);
    // Keep the count odd so zero detuning stays on the grid.
    let mut half = (intervals / 2.0).round() as usize;
    half = half.max(1);
    OracleConfig {
        rates: base.rates,
        m_oscillators: 2 * half + 1,
        delta_max: base.delta_max * widen,
        dt: base.dt / widen,
        t_region: base.t_region * stretch,
        mode_sigma: base.mode_sigma * stretch,
        mode_center: base.mode_center * stretch,
    }
}

/// One row of a convergence table.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub level: u32,
    pub report: OracleReport,
}

/// Per-level oracle reports with monotonicity diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    /// Delta series of one named quantity (see `AnalyticDeltas::entries`).
    pub fn series(&self, name: &str) -> Vec<Option<f64>> {
        self.rows
            .iter()
            .map(|row| {
                row.report
                    .analytic_deltas
                    .entries()
                    .into_iter()
                    .find(|(n, _)| n == name)
                    .and_then(|(_, d)| d)
            })
            .collect()
    }

    /// Whether every compared delta is non-increasing level over level
    /// within [`NOISE_FLOOR`].
    pub fn monotone(&self) -> bool {
        self.non_monotone().is_empty()
    }

    /// Names of quantities whose delta grows by more than the noise floor.
    pub fn non_monotone(&self) -> Vec<String> {
        let Some(first) = self.rows.first() else {
            return Vec::new();
        };
        first
            .report
            .analytic_deltas
            .entries()
            .into_iter()
            .map(|(name, _)| name)
            .filter(|name| !is_non_increasing(&self.series(name)))
            .collect()
    }

    /// Commutator defects `max(|[A,A^dag]-1|, |[B,B^dag]-1|)` per level.
    pub fn commutator_defects(&self) -> Vec<f64> {
        self.rows
            .iter()
            .map(|r| r.report.commutator_a.abs().max(r.report.commutator_b.abs()))
            .collect()
    }

    pub fn final_report(&self) -> &OracleReport {
        &self.rows.last().expect("at least two levels").report
    }

    /// Regime warnings raised at any level, e.g. a broadband mode that keeps
    /// the oracle away from the adiabatic closed form.
    pub fn flagged(&self) -> Vec<(u32, RegimeWarning)> {
        self.rows
            .iter()
            .flat_map(|r| r.report.warnings.iter().map(move |w| (r.level, w.clone())))
            .collect()
    }
}

fn is_non_increasing(series: &[Option<f64>]) -> bool {
    series.windows(2).all(|w| match (w[0], w[1]) {
        (Some(a), Some(b)) => b <= a + NOISE_FLOOR,
        _ => true,
    })
}

/// Runs the oracle at levels `0..levels` of [`refine`].
pub fn convergence_study(base: &OracleConfig, levels: u32) -> Result<ConvergenceTable> {
    if levels < 2 {
        return invalid(format!(
            "a convergence study needs at least 2 levels, got {levels}"
        ));
    }
    let rows = (0..levels)
        .map(|level| {
            run_oracle(&refine(base, level)).map(|report| ConvergenceRow { level, report })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceTable { rows })
}
