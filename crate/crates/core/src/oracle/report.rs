use super::coefficients::{covariance_of, cross_commutator, filtered_moments};
use super::config::{OracleConfig, RegimeWarning};
use super::dynamics::Region;
use super::solver::{OracleSolver, Probe};
use crate::crase::{crase_moments, duan_sum_closed, CraseMoments};
use crate::error::Result;
use crate::gaussian::{duan_sum, CovarianceMatrix};

/// Weights at which the oracle Duan sum is compared with the closed form.
pub const DUAN_SAMPLE_THETAS: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];

/// Below this magnitude an analytic reference is treated as zero and the
/// delta becomes absolute.
const RELATIVE_FLOOR: f64 = 1e-12;

/// `|measured - analytic| / |analytic|`, or absolute near zero.
pub fn relative_delta(measured: f64, analytic: f64) -> f64 {
    let diff = (measured - analytic).abs();
    if analytic.abs() < RELATIVE_FLOOR {
        diff
    } else {
        diff / analytic.abs()
    }
}

/// Oracle-vs-closed-form errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticDeltas {
    pub n_ase: f64,
    pub n_rase: f64,
    pub cross_ab: f64,
    /// `None` when no ASE photons are produced.
    pub efficiency: Option<f64>,
    /// At each of [`DUAN_SAMPLE_THETAS`].
    pub duan: [f64; 5],
}

impl AnalyticDeltas {
    pub fn duan_half(&self) -> f64 {
        self.duan[2]
    }

    /// Largest delta over all compared quantities.
    pub fn max(&self) -> f64 {
        [self.n_ase, self.n_rase, self.cross_ab]
            .into_iter()
            .chain(self.efficiency)
            .chain(self.duan)
            .fold(0.0, f64::max)
    }

    /// Named deltas in report order.
    pub fn entries(&self) -> Vec<(String, Option<f64>)> {
        let mut out = vec![
            ("n_ase".to_string(), Some(self.n_ase)),
            ("n_rase".to_string(), Some(self.n_rase)),
            ("cross_ab".to_string(), Some(self.cross_ab)),
            ("efficiency".to_string(), self.efficiency),
        ];
        for (t, d) in DUAN_SAMPLE_THETAS.iter().zip(self.duan) {
            out.push((format!("duan@{t}"), Some(d)));
        }
        out
    }
}

/// Filtered-mode moments measured by the oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub config: OracleConfig,
    pub warnings: Vec<RegimeWarning>,
    pub n_ase: f64,
    pub n_rase: f64,
    /// Real part of `<A B>`.
    pub cross_ab: f64,
    /// Imaginary part of `<A B>`; zero up to rounding on a symmetric grid.
    pub cross_ab_imag: f64,
    pub efficiency: Option<f64>,
    /// `[A, A^dag] - 1`.
    pub commutator_a: f64,
    /// `[B, B^dag] - 1`.
    pub commutator_b: f64,
    /// `(x_A, p_A, x_B, p_B)` covariance.
    pub covariance: CovarianceMatrix,
    pub analytic: CraseMoments,
    pub analytic_deltas: AnalyticDeltas,
}

impl OracleReport {
    pub fn duan_sum_at(&self, theta: f64) -> Result<f64> {
        duan_sum(&self.covariance, theta, (0, 1))
    }
}

/// Full pipeline: both regions, both filtered modes, compared against the
/// closed form for the same rates.
pub fn run_oracle(config: &OracleConfig) -> Result<OracleReport> {
    let solver = OracleSolver::new(config)?;
    let a = solver.resolve(Probe::AseMode)?;
    let b = solver.resolve(Probe::RaseMode)?;
    let m = filtered_moments(&a, &b)?;
    let covariance = covariance_of(&[&a, &b])?;

    let params = config.rates.squeeze_params()?;
    let analytic = crase_moments(params);
    let efficiency = (m.n_ase > RELATIVE_FLOOR).then(|| m.n_rase / m.n_ase);
    let mut duan = [0.0; 5];
    for (d, &theta) in duan.iter_mut().zip(&DUAN_SAMPLE_THETAS) {
        *d = relative_delta(
            duan_sum(&covariance, theta, (0, 1))?,
            duan_sum_closed(params, theta)?,
        );
    }
    let analytic_deltas = AnalyticDeltas {
        n_ase: relative_delta(m.n_ase, analytic.n_ase),
        n_rase: relative_delta(m.n_rase, analytic.n_rase),
        cross_ab: relative_delta(m.cross_ab.re, analytic.cross_ab),
        efficiency: efficiency.map(|e| relative_delta(e, analytic.efficiency)),
        duan,
    };
    Ok(OracleReport {
        config: *config,
        warnings: solver.warnings().to_vec(),
        n_ase: m.n_ase,
        n_rase: m.n_rase,
        cross_ab: m.cross_ab.re,
        cross_ab_imag: m.cross_ab.im,
        efficiency,
        commutator_a: m.commutator_a,
        commutator_b: m.commutator_b,
        covariance,
        analytic,
        analytic_deltas,
    })
}

/// Outcome of the rephasing test: the region-1 atomic output, time reversed,
/// against the atomic field that drives region 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RephasingCheck {
    /// `|[S, D^dag]| / sqrt([S, S^dag] [D, D^dag])`; 1 when the two filtered
    /// fields are the same operator.
    pub overlap: f64,
    /// `<S^dag S>`: filtered atomic output photons.
    pub atomic_flux: f64,
    /// `<A^dag A>`: filtered optical output photons.
    pub optical_flux: f64,
}

impl RephasingCheck {
    pub fn flux_mismatch(&self) -> f64 {
        relative_delta(self.atomic_flux, self.optical_flux)
    }
}

pub fn rephasing_check(config: &OracleConfig) -> Result<RephasingCheck> {
    let solver = OracleSolver::new(config)?;
    let s = solver.resolve(Probe::AtomicOutput)?;
    let d = solver.resolve(Probe::AtomicInput)?;
    let a = solver.resolve(Probe::AseMode)?;
    let norm = (s.commutator() * d.commutator()).abs().sqrt();
    Ok(RephasingCheck {
        overlap: cross_commutator(&s, &d)?.norm() / norm,
        atomic_flux: s.number(),
        optical_flux: a.number(),
    })
}

/// `[a(t), a(t)^dag] - 1` at `samples` evenly spaced grid points of each region.
pub fn cavity_commutator_trace(
    config: &OracleConfig,
    samples: usize,
) -> Result<Vec<(Region, f64, f64)>> {
    let solver = OracleSolver::new(config)?;
    let k = solver.steps();
    let h = solver.step_size();
    let samples = samples.max(2);
    let mut out = Vec::with_capacity(2 * samples);
    for region in [Region::Ase, Region::Rase] {
        for i in 0..samples {
            let step = i * k / (samples - 1);
            let t = match region {
                Region::Ase => -config.t_region + step as f64 * h,
                Region::Rase => step as f64 * h,
            };
            let c = solver.resolve(Probe::Cavity { region, step })?;
            out.push((region, t, c.commutator() - 1.0));
        }
    }
    Ok(out)
}
