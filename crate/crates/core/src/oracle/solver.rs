//! Reverse-mode coefficient propagation.
//!
//! Every quantity the oracle reports is a linear functional of the
//! trajectory, `X = sum_k w_k . z(t_k) + (direct input terms)`. Writing each
//! RK4 step as `z_{k+1} = R z_k + h phi(hL) u_k` with `u_k` the held-constant
//! input of bin `k`, the coefficients of `X` over the elementary inputs follow
//! from one backward sweep of the covector
//!
//! ```text
//! lambda_K = w_K,   lambda_k = R^T lambda_{k+1} + w_k,
//! coefficient of bin k = h phi(hL)^T lambda_{k+1} . (input direction)
//! ```
//!
//! This produces exactly the coefficient vectors a forward sweep would, but
//! needs O(M) working memory per functional instead of O(M K) for tracking
//! every operator over the growing bin basis.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::coefficients::ModeCoefficients;
use super::config::{OracleConfig, RegimeWarning, MODE_HALF_WIDTHS};
use super::dynamics::{Generator, Region, Stepper};
use super::grid::{build_grid, DetuningGrid};
use crate::error::{invalid, CraseError, Result};

/// How often (in steps) the covector norm is checked for blow-up.
const INSTABILITY_CHECK_INTERVAL: usize = 64;

/// Linear functionals of the trajectory the solver can resolve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Probe {
    /// Filtered ASE mode `A = -int g(t) b_out(t) dt` over region 1.
    AseMode,
    /// Filtered RASE mode `B = int g(t) b_out(t) dt` over region 2.
    RaseMode,
    /// Region-1 atomic output field `s_out = s_in - sqrt(gamma_a1) a^dag`
    /// filtered by the ASE mode.
    AtomicOutput,
    /// Region-2 atomic input field
    /// `d_in = (sum_j g d_j - gamma_a2 a / 2) / sqrt(gamma_a2)` filtered by
    /// the RASE mode.
    AtomicInput,
    /// Cavity operator at grid point `step` of `region`.
    Cavity { region: Region, step: usize },
}

impl Probe {
    fn home(&self) -> Region {
        match self {
            Probe::AseMode | Probe::AtomicOutput => Region::Ase,
            Probe::RaseMode | Probe::AtomicInput => Region::Rase,
            Probe::Cavity { region, .. } => *region,
        }
    }
}

/// Discretized problem, reusable across probes.
#[derive(Debug, Clone)]
pub struct OracleSolver {
    config: OracleConfig,
    warnings: Vec<RegimeWarning>,
    grid: DetuningGrid,
    region1: Generator,
    region2: Generator,
    steps: usize,
    h: f64,
    /// ASE-mode samples at the region-1 bin midpoints, discretely unit-norm.
    mode: Vec<f64>,
}

impl OracleSolver {
    pub fn new(config: &OracleConfig) -> Result<Self> {
        let warnings = config.validate()?;
        let grid = build_grid(config)?;
        let steps = config.steps();
        let h = config.step();
        let region1 = Generator::new(Region::Ase, &config.rates, &grid);
        let region2 = Generator::new(Region::Rase, &config.rates, &grid);
        let mode = mode_samples(config, steps, h);
        Ok(Self {
            config: *config,
            warnings,
            grid,
            region1,
            region2,
            steps,
            h,
            mode,
        })
    }

    pub fn config(&self) -> &OracleConfig {
        &self.config
    }

    pub fn warnings(&self) -> &[RegimeWarning] {
        &self.warnings
    }

    pub fn grid(&self) -> &DetuningGrid {
        &self.grid
    }

    /// Time steps per region.
    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn step_size(&self) -> f64 {
        self.h
    }

    /// Mode function at the region-1 bin midpoints.
    pub fn mode_samples(&self) -> &[f64] {
        &self.mode
    }

    /// Length of the elementary input basis.
    pub fn basis_len(&self) -> usize {
        1 + self.grid.len() + 2 * self.steps
    }

    fn n(&self) -> usize {
        self.grid.len() + 1
    }

    /// Mode value of bin `k` in `region`; the RASE mode is the mirror image.
    fn mode_at(&self, region: Region, k: usize) -> f64 {
        match region {
            Region::Ase => self.mode[k],
            Region::Rase => self.mode[self.steps - 1 - k],
        }
    }

    fn bin_offset(&self, region: Region) -> usize {
        1 + self.grid.len()
            + match region {
                Region::Ase => 0,
                Region::Rase => self.steps,
            }
    }

    /// Coefficients of `probe` over the elementary input basis.
    pub fn resolve(&self, probe: Probe) -> Result<ModeCoefficients> {
        let n = self.n();
        let dim = 2 * n;
        let zero = Complex64::new(0.0, 0.0);
        let mut out = ModeCoefficients::zeros(self.basis_len());
        // Per-grid-point covector weights (on the a and a^dag components).
        let mut weights = vec![(zero, zero); self.steps + 1];
        let home = probe.home();
        let h = self.h;
        let r = &self.config.rates;

        match probe {
            Probe::AseMode | Probe::RaseMode => {
                let (sign, sqrt_loss) = match probe {
                    Probe::AseMode => (-1.0, r.gamma_b1.sqrt()),
                    _ => (1.0, r.gamma_b2.sqrt()),
                };
                let off = self.bin_offset(home);
                for k in 0..self.steps {
                    let g = sign * self.mode_at(home, k);
                    // b_in over bin k is b_k / sqrt(h); integrated with weight g.
                    out.alpha[off + k] += g * h.sqrt();
                    let w = g * sqrt_loss * h / 2.0;
                    weights[k].0 += w;
                    weights[k + 1].0 += w;
                }
            }
            Probe::AtomicOutput => {
                let sqrt_gain = r.gamma_a1.sqrt();
                let fw = self.grid.field_weight();
                let t0 = -self.config.t_region;
                for k in 0..self.steps {
                    let g = self.mode_at(home, k);
                    if g == 0.0 {
                        continue;
                    }
                    let t_mid = t0 + (k as f64 + 0.5) * h;
                    for (j, &det) in self.grid.detunings().iter().enumerate() {
                        out.alpha[1 + j] += Complex64::from_polar(g * h * fw, det * (t_mid - t0));
                    }
                    let w = -g * sqrt_gain * h / 2.0;
                    weights[k].1 += w;
                    weights[k + 1].1 += w;
                }
            }
            Probe::AtomicInput => {
                if r.gamma_a2 <= 0.0 {
                    return invalid("the region-2 atomic input is undefined for gamma_a2 = 0");
                }
            }
            Probe::Cavity { step, .. } => {
                if step > self.steps {
                    return invalid(format!(
                        "cavity probe step {step} is past the last grid point {}",
                        self.steps
                    ));
                }
                weights[step].0 = Complex64::new(1.0, 0.0);
            }
        }

        // Atomic-input probe: weights on every d_j, so it needs full covector rows.
        let atom_rows = if let Probe::AtomicInput = probe {
            let g2 = self.grid.coupling_r2();
            let scale = 1.0 / r.gamma_a2.sqrt();
            let rows: Vec<f64> = (0..=self.steps)
                .map(|k| {
                    let left = if k > 0 {
                        self.mode_at(home, k - 1)
                    } else {
                        0.0
                    };
                    let right = if k < self.steps {
                        self.mode_at(home, k)
                    } else {
                        0.0
                    };
                    (left + right) * h / 2.0 * scale
                })
                .collect();
            Some((rows, g2, r.gamma_a2 / 2.0))
        } else {
            None
        };
        if let Some((rows, _, half_rate)) = &atom_rows {
            for (w, &row) in weights.iter_mut().zip(rows) {
                w.0 -= row * half_rate;
            }
        }

        let mut lambda = vec![zero; dim];
        let add_weights = |lambda: &mut Vec<Complex64>, k: usize| {
            lambda[0] += weights[k].0;
            lambda[n] += weights[k].1;
            if let Some((rows, g2, _)) = &atom_rows {
                let w = rows[k] * g2;
                if w != 0.0 {
                    for l in &mut lambda[1..n] {
                        *l += w;
                    }
                }
            }
        };

        let bound = 1e3
            * (1.0
                + weights.iter().map(|w| w.0.norm() + w.1.norm()).sum::<f64>()
                + atom_rows.as_ref().map_or(0.0, |(rows, g2, _)| {
                    rows.iter().sum::<f64>() * g2 * self.grid.len() as f64
                }))
            * (1.0 + self.cosh_chi()).powi(2);

        let mut stepper = Stepper::new(dim);
        add_weights(&mut lambda, self.steps);
        self.sweep_back(home, &mut lambda, &mut stepper, &mut out, bound, |l, k| {
            add_weights(l, k)
        })?;
        if home == Region::Rase {
            // The pulse is the identity on operator values, so the covector
            // carries straight into region 1.
            self.sweep_back(
                Region::Ase,
                &mut lambda,
                &mut stepper,
                &mut out,
                bound,
                |_, _| {},
            )?;
        }

        out.alpha[0] += lambda[0];
        out.beta[0] += lambda[n];
        for j in 0..self.grid.len() {
            out.alpha[1 + j] += lambda[1 + j];
            out.beta[1 + j] += lambda[n + 1 + j];
        }
        Ok(out)
    }

    fn cosh_chi(&self) -> f64 {
        let r = &self.config.rates;
        (r.gamma_b1 + r.gamma_a1) / (r.gamma_b1 - r.gamma_a1)
    }

    /// Runs the covector from grid point `steps` back to 0 of `region`,
    /// recording input-bin coefficients. `add` injects the weights of grid
    /// point `k` after the step that lands on it.
    fn sweep_back<F: FnMut(&mut Vec<Complex64>, usize)>(
        &self,
        region: Region,
        lambda: &mut Vec<Complex64>,
        stepper: &mut Stepper,
        out: &mut ModeCoefficients,
        bound: f64,
        mut add: F,
    ) -> Result<()> {
        let gen = match region {
            Region::Ase => &self.region1,
            Region::Rase => &self.region2,
        };
        let n = self.n();
        let off = self.bin_offset(region);
        let input = -gen.sqrt_loss() * self.h.sqrt();
        for k in (0..self.steps).rev() {
            let (alpha, beta) = (&mut out.alpha[off + k], &mut out.beta[off + k]);
            stepper.step(gen, true, self.h, lambda, |v| {
                *alpha += input * v[0];
                *beta += input * v[n];
            });
            add(lambda, k);
            if k % INSTABILITY_CHECK_INTERVAL == 0 {
                let norm = lambda.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                if !norm.is_finite() || norm > bound {
                    return Err(CraseError::Instability(format!(
                        "coefficient norm {norm:.3e} exceeded {bound:.3e} in region {} at step {k}; \
                         reduce dt (currently {}, 0.1/delta_max = {})",
                        match region {
                            Region::Ase => 1,
                            Region::Rase => 2,
                        },
                        self.config.dt,
                        0.1 / self.config.delta_max
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Truncated Gaussian mode with `|g|^2` of standard deviation `sigma`,
/// centred at `-mode_center`, sampled at the bin midpoints of region 1 and
/// normalized so that `sum g_k^2 h = 1`.
fn mode_samples(config: &OracleConfig, steps: usize, h: f64) -> Vec<f64> {
    let t0 = -config.t_region;
    let centre = -config.mode_center;
    let sigma = config.mode_sigma;
    let mut g: Vec<f64> = (0..steps)
        .map(|k| {
            let t = t0 + (k as f64 + 0.5) * h;
            let x = (t - centre) / sigma;
            if x.abs() > MODE_HALF_WIDTHS {
                0.0
            } else {
                (-x * x / 4.0).exp()
            }
        })
        .collect();
    let norm = (g.iter().map(|v| v * v).sum::<f64>() * h).sqrt();
    for v in &mut g {
        *v /= norm;
    }
    g
}

/// `(2 pi sigma^2)^(-1/4) exp(-(t - c)^2 / (4 sigma^2))`, the continuum mode.
pub fn continuum_mode(t: f64, centre: f64, sigma: f64) -> f64 {
    let x = (t - centre) / sigma;
    (2.0 * PI * sigma * sigma).powf(-0.25) * (-x * x / 4.0).exp()
}
