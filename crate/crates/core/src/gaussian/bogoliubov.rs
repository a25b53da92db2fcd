use nalgebra::DMatrix;
use num_complex::Complex64;

use super::covariance::{check_distinct, CovarianceMatrix};
use crate::error::{invalid, Result};

/// Linear map on mode operators,
/// `c'_r = sum_i alpha[r][i] c_i + beta[r][i] c_i^dag`.
///
/// `alpha` and `beta` are `n_out x n_in`.
#[derive(Debug, Clone, PartialEq)]
pub struct BogoliubovMap {
    alpha: DMatrix<Complex64>,
    beta: DMatrix<Complex64>,
}

impl BogoliubovMap {
    pub fn new(alpha: DMatrix<Complex64>, beta: DMatrix<Complex64>) -> Result<Self> {
        if alpha.shape() != beta.shape() {
            return invalid(format!(
                "alpha {:?} and beta {:?} blocks differ in shape",
                alpha.shape(),
                beta.shape()
            ));
        }
        if alpha.nrows() == 0 || alpha.ncols() == 0 {
            return invalid("Bogoliubov map needs at least one input and one output mode");
        }
        Ok(Self { alpha, beta })
    }

    pub fn from_real(alpha: DMatrix<f64>, beta: DMatrix<f64>) -> Result<Self> {
        Self::new(alpha.map(Complex64::from), beta.map(Complex64::from))
    }

    pub fn identity(n: usize) -> Self {
        Self {
            alpha: DMatrix::identity(n, n),
            beta: DMatrix::zeros(n, n),
        }
    }

    pub fn alpha(&self) -> &DMatrix<Complex64> {
        &self.alpha
    }

    pub fn beta(&self) -> &DMatrix<Complex64> {
        &self.beta
    }

    pub fn n_in(&self) -> usize {
        self.alpha.ncols()
    }

    pub fn n_out(&self) -> usize {
        self.alpha.nrows()
    }

    /// Max-norm of `alpha alpha^dag - beta beta^dag - I`.
    pub fn commutator_defect(&self) -> f64 {
        let gram = &self.alpha * self.alpha.adjoint() - &self.beta * self.beta.adjoint();
        let eye = DMatrix::<Complex64>::identity(self.n_out(), self.n_out());
        (gram - eye).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Real `2 n_out x 2 n_in` action on `(x, p)` quadratures.
    pub fn quadrature_matrix(&self) -> DMatrix<f64> {
        let mut s = DMatrix::zeros(2 * self.n_out(), 2 * self.n_in());
        for r in 0..self.n_out() {
            for i in 0..self.n_in() {
                let plus = self.alpha[(r, i)] + self.beta[(r, i)];
                let minus = self.alpha[(r, i)] - self.beta[(r, i)];
                s[(2 * r, 2 * i)] = plus.re;
                s[(2 * r, 2 * i + 1)] = -minus.im;
                s[(2 * r + 1, 2 * i)] = plus.im;
                s[(2 * r + 1, 2 * i + 1)] = minus.re;
            }
        }
        s
    }
}

/// True iff `max |alpha alpha^dag - beta beta^dag - I| <= tol`.
pub fn symplectic_check(map: &BogoliubovMap, tol: f64) -> bool {
    map.commutator_defect() <= tol
}

/// Non-degenerate parametric amplifier on two modes:
/// `a1' = a1 cosh(chi) + a2^dag sinh(chi)` and symmetrically for `a2'`.
pub fn two_mode_squeeze_map(chi: f64) -> Result<BogoliubovMap> {
    if !chi.is_finite() || chi < 0.0 {
        return invalid(format!(
            "squeezing parameter must be finite and >= 0, got {chi}"
        ));
    }
    let (c, s) = (chi.cosh(), chi.sinh());
    BogoliubovMap::from_real(
        DMatrix::from_row_slice(2, 2, &[c, 0.0, 0.0, c]),
        DMatrix::from_row_slice(2, 2, &[0.0, s, s, 0.0]),
    )
}

/// Two-mode beamsplitter on `(b, c)`:
/// `b' = sqrt(eps) c - sqrt(1-eps) b`, `c' = sqrt(1-eps) c + sqrt(eps) b`.
///
/// `eps` is the fraction of `c` that replaces `b`; `eps = 0` leaves `b` up to
/// a sign.
pub fn beamsplitter_map(eps: f64) -> Result<BogoliubovMap> {
    if !(0.0..=1.0).contains(&eps) {
        return invalid(format!("beamsplitter eps must lie in [0, 1], got {eps}"));
    }
    let (t, r) = ((1.0 - eps).sqrt(), eps.sqrt());
    BogoliubovMap::from_real(
        DMatrix::from_row_slice(2, 2, &[-t, r, r, t]),
        DMatrix::zeros(2, 2),
    )
}

/// Applies `map` to the modes listed in `modes` (one per map input).
///
/// A square map is embedded into the identity on the remaining modes and the
/// full `S V S^T` is returned. A non-square map returns the covariance of its
/// outputs only: the untouched modes have no defined correlations with the
/// new output set.
pub fn apply_map(
    v: &CovarianceMatrix,
    map: &BogoliubovMap,
    modes: &[usize],
) -> Result<CovarianceMatrix> {
    if modes.len() != map.n_in() {
        return invalid(format!(
            "map takes {} input modes but {} were given",
            map.n_in(),
            modes.len()
        ));
    }
    check_distinct(v, modes)?;
    let s_small = map.quadrature_matrix();
    let s = if map.n_in() == map.n_out() {
        let dim = 2 * v.n_modes();
        let mut s = DMatrix::identity(dim, dim);
        for (r, &mr) in modes.iter().enumerate() {
            for (i, &mi) in modes.iter().enumerate() {
                for (a, b) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                    s[(2 * mr + a, 2 * mi + b)] = s_small[(2 * r + a, 2 * i + b)];
                }
            }
        }
        s
    } else {
        let dim = 2 * v.n_modes();
        let mut s = DMatrix::zeros(2 * map.n_out(), dim);
        for r in 0..2 * map.n_out() {
            for (i, &mi) in modes.iter().enumerate() {
                s[(r, 2 * mi)] = s_small[(r, 2 * i)];
                s[(r, 2 * mi + 1)] = s_small[(r, 2 * i + 1)];
            }
        }
        s
    };
    let out = &s * v.entries() * s.transpose();
    // Re-symmetrize to keep round-off from accumulating through compositions.
    let sym = (&out + out.transpose()) * 0.5;
    CovarianceMatrix::from_measured(sym)
}
