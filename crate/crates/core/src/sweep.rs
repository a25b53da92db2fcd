//! Duan-sum map over the `(sqrt(eps), cosh(chi))` plane.

use std::fmt;

use crate::crase::{
    clip_theta, duan_sum_closed, minimize_duan_closed, witness_theta, SqueezeParams,
};
use crate::error::{invalid, Result};

/// Upper limit on `sqrt(eps)`; at 1 the recalled mode is pure vacuum.
pub const SQRT_EPS_LIMIT: f64 = 0.99;

/// Closed interval sampled at `steps` evenly spaced points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisRange {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl AxisRange {
    pub fn new(min: f64, max: f64, steps: usize) -> Self {
        Self { min, max, steps }
    }

    fn validate(&self, name: &str) -> Result<()> {
        if self.steps < 2 {
            return invalid(format!("{name}: steps must be >= 2, got {}", self.steps));
        }
        if !self.min.is_finite() || !self.max.is_finite() {
            return invalid(format!("{name}: bounds must be finite"));
        }
        if self.min >= self.max {
            return invalid(format!(
                "{name}: min ({}) must be strictly below max ({})",
                self.min, self.max
            ));
        }
        Ok(())
    }

    /// Sample `i`, snapped to 9 significant digits so that printed grids
    /// re-parse to the exact coordinates that were evaluated.
    pub fn point(&self, i: usize) -> f64 {
        let frac = i as f64 / (self.steps - 1) as f64;
        let x = if i + 1 == self.steps {
            self.max
        } else {
            self.min + frac * (self.max - self.min)
        };
        q9(x)
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.steps).map(|i| self.point(i)).collect()
    }
}

/// How theta is chosen per cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThetaPolicy {
    Minimize,
    /// `theta = (1 - eps)/(2 - eps)`.
    Witness,
    Fixed(f64),
}

impl fmt::Display for ThetaPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Minimize => f.write_str("minimize"),
            Self::Witness => f.write_str("paper_witness"),
            Self::Fixed(t) => write!(f, "fixed({t:?})"),
        }
    }
}

impl std::str::FromStr for ThetaPolicy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        match s {
            "minimize" => Ok(Self::Minimize),
            "paper_witness" => Ok(Self::Witness),
            _ => {
                let inner = s
                    .strip_prefix("fixed(")
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| {
                        format!("expected minimize, paper_witness or fixed(<theta>), got '{s}'")
                    })?;
                let t: f64 = inner
                    .trim()
                    .parse()
                    .map_err(|_| format!("fixed theta '{inner}' is not a number"))?;
                if !(t > 0.0 && t < 1.0) {
                    return Err(format!("fixed theta must lie in (0, 1), got {t}"));
                }
                Ok(Self::Fixed(t))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub sqrt_eps: AxisRange,
    pub cosh_chi: AxisRange,
    pub theta_policy: ThetaPolicy,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            sqrt_eps: AxisRange::new(0.0, SQRT_EPS_LIMIT, 51),
            cosh_chi: AxisRange::new(1.01, 4.0, 60),
            theta_policy: ThetaPolicy::Minimize,
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.sqrt_eps.validate("sqrt_eps")?;
        self.cosh_chi.validate("cosh_chi")?;
        if self.sqrt_eps.min < 0.0 || self.sqrt_eps.max > SQRT_EPS_LIMIT {
            return invalid(format!(
                "sqrt_eps range must lie in [0, {SQRT_EPS_LIMIT}], got [{}, {}]",
                self.sqrt_eps.min, self.sqrt_eps.max
            ));
        }
        if self.cosh_chi.min < 1.0 {
            return invalid(format!(
                "cosh_chi min must be >= 1, got {}",
                self.cosh_chi.min
            ));
        }
        if let ThetaPolicy::Fixed(t) = self.theta_policy {
            if !(t > 0.0 && t < 1.0) {
                return invalid(format!("fixed theta must lie in (0, 1), got {t}"));
            }
        }
        Ok(())
    }

    pub fn n_cells(&self) -> usize {
        self.sqrt_eps.steps * self.cosh_chi.steps
    }

    /// Coordinates of cell `index` in output order (`sqrt_eps` outer).
    pub fn cell_coords(&self, index: usize) -> (f64, f64) {
        let i = index / self.cosh_chi.steps;
        let j = index % self.cosh_chi.steps;
        (self.sqrt_eps.point(i), self.cosh_chi.point(j))
    }
}

/// One evaluated grid cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepCell {
    pub sqrt_eps: f64,
    pub cosh_chi: f64,
    pub theta_star: f64,
    pub duan_min: f64,
}

impl SweepCell {
    /// Cells that the entanglement claim is about: `chi > 0`, with theta
    /// chosen by the minimizer or the witness formula.
    pub fn claim_applies(&self, policy: ThetaPolicy) -> bool {
        self.cosh_chi > 1.0 && !matches!(policy, ThetaPolicy::Fixed(_))
    }
}

pub fn evaluate_cell(sqrt_eps: f64, cosh_chi: f64, policy: ThetaPolicy) -> Result<SweepCell> {
    let p = SqueezeParams::from_axes(sqrt_eps, cosh_chi)?;
    let (theta_star, duan_min) = match policy {
        ThetaPolicy::Minimize => {
            let r = minimize_duan_closed(p);
            (r.theta_star, r.sum_min)
        }
        ThetaPolicy::Witness => {
            let t = clip_theta(witness_theta(p.eps()));
            (t, duan_sum_closed(p, t)?)
        }
        ThetaPolicy::Fixed(t) => (t, duan_sum_closed(p, t)?),
    };
    Ok(SweepCell {
        sqrt_eps,
        cosh_chi,
        theta_star,
        duan_min,
    })
}

/// Evaluates the whole grid sequentially in output order.
pub fn sweep(spec: &SweepSpec) -> Result<Vec<SweepCell>> {
    spec.validate()?;
    (0..spec.n_cells())
        .map(|idx| {
            let (se, cc) = spec.cell_coords(idx);
            evaluate_cell(se, cc, spec.theta_policy)
        })
        .collect()
}

/// Rounds to 9 significant digits.
pub fn q9(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.8e}").parse().expect("formatted float parses")
}

/// Formats with 9 significant digits, without trailing zeros, dot decimal.
pub fn fmt9(x: f64) -> String {
    q9(x).to_string()
}
