use super::covariance::{check_distinct, CovarianceMatrix};
use crate::error::{invalid, Result};

/// Lower edge of the searched theta interval; the open endpoints 0 and 1 are
/// degenerate.
pub const THETA_MARGIN: f64 = 1e-6;
/// Absolute theta tolerance of the golden-section search.
pub const THETA_TOL: f64 = 1e-9;
/// Step of the soundness scan run after every golden-section search.
pub const SCAN_STEP: f64 = 1e-3;

/// Outcome of minimizing the Duan sum over theta.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DuanResult {
    pub theta_star: f64,
    pub sum_min: f64,
    /// `sum_min < 1`: sufficient (not necessary) for inseparability.
    pub entangled: bool,
}

impl DuanResult {
    fn new(theta_star: f64, sum_min: f64) -> Self {
        Self {
            theta_star,
            sum_min,
            entangled: sum_min < 1.0,
        }
    }
}

/// `<du^2> + <dv^2>` for `u = sqrt(t) x_A + sqrt(1-t) x_B`,
/// `v = sqrt(t) p_A - sqrt(1-t) p_B`.
pub fn duan_sum(v: &CovarianceMatrix, theta: f64, modes: (usize, usize)) -> Result<f64> {
    if !(theta > 0.0 && theta < 1.0) {
        return invalid(format!("theta must lie in (0, 1), got {theta}"));
    }
    let terms = DuanTerms::from_cov(v, modes)?;
    Ok(terms.eval(theta))
}

/// Minimizes [`duan_sum`] over theta on `[THETA_MARGIN, 1 - THETA_MARGIN]`.
pub fn minimize_duan(v: &CovarianceMatrix, modes: (usize, usize)) -> Result<DuanResult> {
    let terms = DuanTerms::from_cov(v, modes)?;
    Ok(minimize_theta(|t| terms.eval(t)))
}

/// The three covariance combinations the Duan sum depends on.
#[derive(Debug, Clone, Copy)]
struct DuanTerms {
    var_a: f64,
    var_b: f64,
    cross: f64,
}

impl DuanTerms {
    fn from_cov(v: &CovarianceMatrix, (a, b): (usize, usize)) -> Result<Self> {
        if v.n_modes() < 2 {
            return invalid("the Duan sum needs a state with at least two modes");
        }
        check_distinct(v, &[a, b])?;
        let (xa, pa, xb, pb) = (2 * a, 2 * a + 1, 2 * b, 2 * b + 1);
        Ok(Self {
            var_a: v.get(xa, xa) + v.get(pa, pa),
            var_b: v.get(xb, xb) + v.get(pb, pb),
            cross: v.get(xa, xb) - v.get(pa, pb),
        })
    }

    fn eval(&self, theta: f64) -> f64 {
        theta * self.var_a
            + (1.0 - theta) * self.var_b
            + 2.0 * (theta - theta * theta).sqrt() * self.cross
    }
}

/// Golden-section search on `[THETA_MARGIN, 1 - THETA_MARGIN]` followed by a
/// dense scan; if the scan beats the golden-section point the function was
/// not unimodal and the best scan cell is refined locally.
///
/// Ties with theta = 1/2 resolve to 1/2, so a flat functional reports 1/2.
pub fn minimize_theta<F: Fn(f64) -> f64>(f: F) -> DuanResult {
    let (lo, hi) = (THETA_MARGIN, 1.0 - THETA_MARGIN);
    let (mut theta, mut value) = golden_section(&f, lo, hi, THETA_TOL);

    let n = ((hi - lo) / SCAN_STEP).ceil() as usize;
    let (mut scan_theta, mut scan_value) = (theta, value);
    for k in 0..=n {
        let t = (lo + k as f64 * SCAN_STEP).min(hi);
        let y = f(t);
        if y < scan_value {
            scan_theta = t;
            scan_value = y;
        }
    }
    if scan_value < value {
        let (t, y) = golden_section(
            &f,
            (scan_theta - SCAN_STEP).max(lo),
            (scan_theta + SCAN_STEP).min(hi),
            THETA_TOL,
        );
        (theta, value) = if y <= scan_value {
            (t, y)
        } else {
            (scan_theta, scan_value)
        };
    }

    let mid = f(0.5);
    if mid <= value + 1e-15 * value.abs().max(1.0) {
        theta = 0.5;
        value = mid.min(value);
    }
    DuanResult::new(theta, value)
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

fn golden_section<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    // Endpoints are candidates too: on a monotone stretch the minimum sits there.
    [(c, fc), (d, fd), (a, f(a)), (b, f(b))]
        .into_iter()
        .fold(
            (c, fc),
            |best, cand| if cand.1 < best.1 { cand } else { best },
        )
}
