//! Closed-form CRASE model.
//!
//! Region 1 (before the rephasing pulse) acts on the filtered input modes as
//! a non-degenerate parametric amplifier with gain `cosh(chi)`; region 2 acts
//! as a beamsplitter that leaks a fraction `eps` of vacuum into the recalled
//! mode:
//!
//! ```text
//! A = A0 cosh(chi) + B0^dag sinh(chi)
//! B = sqrt(eps) C0 - sqrt(1 - eps) (B0 cosh(chi) + A0^dag sinh(chi))
//! ```
//!
//! with `cosh(chi) = (gb1 + ga1)/(gb1 - ga1)` and
//! `sqrt(eps) = |gb2 - ga2|/(gb2 + ga2)`.

use nalgebra::DMatrix;

use crate::error::{invalid, CraseError, Result};
use crate::gaussian::{minimize_theta, BogoliubovMap, CovarianceMatrix, DuanResult, THETA_MARGIN};

/// Relative distance to the lasing threshold below which rates are rejected.
pub const THRESHOLD_GUARD: f64 = 1e-12;

/// Cavity rates of the two time regions (inverse-time units).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateParams {
    /// Bare cavity loss rate, region 1.
    pub gamma_b1: f64,
    /// Gain rate from the inverted atoms, region 1.
    pub gamma_a1: f64,
    /// Bare cavity loss rate, region 2.
    pub gamma_b2: f64,
    /// Atomic absorption rate, region 2.
    pub gamma_a2: f64,
}

impl RateParams {
    pub fn new(gamma_b1: f64, gamma_a1: f64, gamma_b2: f64, gamma_a2: f64) -> Result<Self> {
        let p = Self {
            gamma_b1,
            gamma_a1,
            gamma_b2,
            gamma_a2,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("gamma_b1", self.gamma_b1),
            ("gamma_a1", self.gamma_a1),
            ("gamma_b2", self.gamma_b2),
            ("gamma_a2", self.gamma_a2),
        ] {
            if !v.is_finite() || v < 0.0 {
                return invalid(format!("{name} must be finite and >= 0, got {v}"));
            }
        }
        rates_to_chi(self.gamma_b1, self.gamma_a1)?;
        rates_to_eps(self.gamma_b2, self.gamma_a2)?;
        Ok(())
    }

    pub fn squeeze_params(&self) -> Result<SqueezeParams> {
        SqueezeParams::new(
            rates_to_chi(self.gamma_b1, self.gamma_a1)?,
            rates_to_eps(self.gamma_b2, self.gamma_a2)?,
        )
    }

    pub fn max_rate(&self) -> f64 {
        self.gamma_b1
            .max(self.gamma_a1)
            .max(self.gamma_b2)
            .max(self.gamma_a2)
    }
}

/// Squeezing `chi >= 0` and recall inefficiency `eps` in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeParams {
    chi: f64,
    eps: f64,
}

impl SqueezeParams {
    pub fn new(chi: f64, eps: f64) -> Result<Self> {
        if !chi.is_finite() || chi < 0.0 {
            return invalid(format!("chi must be finite and >= 0, got {chi}"));
        }
        if !(0.0..=1.0).contains(&eps) {
            return invalid(format!("eps must lie in [0, 1], got {eps}"));
        }
        Ok(Self { chi, eps })
    }

    /// From the Figure-3 axes `(sqrt(eps), cosh(chi))`.
    pub fn from_axes(sqrt_eps: f64, cosh_chi: f64) -> Result<Self> {
        if cosh_chi < 1.0 || !cosh_chi.is_finite() {
            return invalid(format!("cosh(chi) must be finite and >= 1, got {cosh_chi}"));
        }
        if !(0.0..=1.0).contains(&sqrt_eps) {
            return invalid(format!("sqrt(eps) must lie in [0, 1], got {sqrt_eps}"));
        }
        Self::new(cosh_chi.acosh(), sqrt_eps * sqrt_eps)
    }

    pub fn chi(&self) -> f64 {
        self.chi
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }
}

/// Photon numbers and correlation of the filtered ASE/RASE modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CraseMoments {
    pub n_ase: f64,
    pub n_rase: f64,
    /// `<A B>`.
    pub cross_ab: f64,
    /// `N_RASE / N_ASE`.
    pub efficiency: f64,
}

/// `chi = arccosh((gb1 + ga1)/(gb1 - ga1))`.
pub fn rates_to_chi(gamma_b1: f64, gamma_a1: f64) -> Result<f64> {
    if gamma_a1 < 0.0 || !gamma_b1.is_finite() || !gamma_a1.is_finite() {
        return invalid(format!(
            "region-1 rates must be finite and >= 0, got gamma_b1 = {gamma_b1}, gamma_a1 = {gamma_a1}"
        ));
    }
    if gamma_a1 >= gamma_b1 {
        return Err(CraseError::AboveThreshold {
            gain: gamma_a1,
            loss: gamma_b1,
        });
    }
    if gamma_b1 - gamma_a1 < THRESHOLD_GUARD * gamma_b1 {
        return invalid(format!(
            "gamma_a1 = {gamma_a1} is within {THRESHOLD_GUARD:e} (relative) of the lasing threshold"
        ));
    }
    // e^chi = (sqrt(gb) + sqrt(ga)) / (sqrt(gb) - sqrt(ga)), i.e. chi = 2 atanh(sqrt(ga/gb)),
    // which stays accurate where arccosh of a ratio near 1 would not.
    Ok(2.0 * (gamma_a1 / gamma_b1).sqrt().atanh())
}

/// `eps = ((gb2 - ga2)/(gb2 + ga2))^2`; the sign of the ratio is a global
/// phase on the vacuum port and is dropped.
pub fn rates_to_eps(gamma_b2: f64, gamma_a2: f64) -> Result<f64> {
    if !(gamma_b2 >= 0.0 && gamma_a2 >= 0.0) || !gamma_b2.is_finite() || !gamma_a2.is_finite() {
        return invalid(format!(
            "region-2 rates must be finite and >= 0, got gamma_b2 = {gamma_b2}, gamma_a2 = {gamma_a2}"
        ));
    }
    let total = gamma_b2 + gamma_a2;
    if total <= 0.0 {
        return invalid("gamma_b2 + gamma_a2 must be positive");
    }
    let r = ((gamma_b2 - gamma_a2) / total).abs();
    Ok((r * r).min(1.0))
}

/// Two outputs `(A, B)` over the three vacuum inputs `(A0, B0, C0)`.
pub fn crase_bogoliubov(p: SqueezeParams) -> BogoliubovMap {
    let (c, s) = (p.chi.cosh(), p.chi.sinh());
    let (t, r) = ((1.0 - p.eps).sqrt(), p.eps.sqrt());
    #[rustfmt::skip]
    let alpha = DMatrix::from_row_slice(2, 3, &[
        c,   0.0,    0.0,
        0.0, -t * c, r,
    ]);
    #[rustfmt::skip]
    let beta = DMatrix::from_row_slice(2, 3, &[
        0.0,    s,   0.0,
        -t * s, 0.0, 0.0,
    ]);
    BogoliubovMap::from_real(alpha, beta).expect("2x3 blocks")
}

/// Covariance of `(A, B)` in closed form.
pub fn crase_cov(p: SqueezeParams) -> CovarianceMatrix {
    let (c, s) = (p.chi.cosh(), p.chi.sinh());
    let va = (1.0 + 2.0 * s * s) / 2.0;
    let vb = (1.0 + 2.0 * (1.0 - p.eps) * s * s) / 2.0;
    let k = (1.0 - p.eps).sqrt() * s * c;
    #[rustfmt::skip]
    let m = DMatrix::from_row_slice(4, 4, &[
        va,  0.0, -k,  0.0,
        0.0, va,  0.0, k,
        -k,  0.0, vb,  0.0,
        0.0, k,   0.0, vb,
    ]);
    CovarianceMatrix::from_measured(m).expect("symmetric by construction")
}

pub fn crase_moments(p: SqueezeParams) -> CraseMoments {
    let (c, s) = (p.chi.cosh(), p.chi.sinh());
    let n_ase = s * s;
    CraseMoments {
        n_ase,
        n_rase: (1.0 - p.eps) * n_ase,
        cross_ab: -(1.0 - p.eps).sqrt() * s * c,
        efficiency: 1.0 - p.eps,
    }
}

/// `1 + 2 sh^2 - 2 eps (1 - theta) sh^2 - 4 sqrt(theta - theta^2) sqrt(1 - eps) ch sh`.
pub fn duan_sum_closed(p: SqueezeParams, theta: f64) -> Result<f64> {
    if !(theta > 0.0 && theta < 1.0) {
        return invalid(format!("theta must lie in (0, 1), got {theta}"));
    }
    Ok(duan_closed_unchecked(p, theta))
}

fn duan_closed_unchecked(p: SqueezeParams, theta: f64) -> f64 {
    let (c, s) = (p.chi.cosh(), p.chi.sinh());
    let s2 = s * s;
    1.0 + 2.0 * s2
        - 2.0 * p.eps * (1.0 - theta) * s2
        - 4.0 * (theta - theta * theta).sqrt() * (1.0 - p.eps).sqrt() * c * s
}

/// Witness weight `(1 - eps)/(2 - eps)`; lies in `[0, 1/2]`.
pub fn witness_theta(eps: f64) -> f64 {
    (1.0 - eps) / (2.0 - eps)
}

/// Clamps a theta into the open search interval used everywhere else.
pub fn clip_theta(theta: f64) -> f64 {
    theta.clamp(THETA_MARGIN, 1.0 - THETA_MARGIN)
}

/// Duan sum at the clipped witness weight.
pub fn duan_at_witness(p: SqueezeParams) -> f64 {
    duan_closed_unchecked(p, clip_theta(witness_theta(p.eps)))
}

pub fn minimize_duan_closed(p: SqueezeParams) -> DuanResult {
    minimize_theta(|t| duan_closed_unchecked(p, t))
}
