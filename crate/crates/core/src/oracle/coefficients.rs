use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::gaussian::CovarianceMatrix;

/// An output operator written as `X = sum_i alpha_i e_i + beta_i e_i^dag`
/// over elementary vacuum inputs `e_i` with `[e_i, e_j^dag] = delta_ij`.
///
/// In the oracle the basis is laid out as
/// `(a(t0), s_0(t0)..s_{M-1}(t0), region-1 input bins, region-2 input bins)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeCoefficients {
    pub alpha: Vec<Complex64>,
    pub beta: Vec<Complex64>,
}

impl ModeCoefficients {
    pub fn new(alpha: Vec<Complex64>, beta: Vec<Complex64>) -> Result<Self> {
        if alpha.len() != beta.len() {
            return invalid(format!(
                "annihilator ({}) and creator ({}) parts have different lengths",
                alpha.len(),
                beta.len()
            ));
        }
        Ok(Self { alpha, beta })
    }

    pub fn zeros(len: usize) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        Self {
            alpha: vec![zero; len],
            beta: vec![zero; len],
        }
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    /// `[X, X^dag] = sum |alpha|^2 - sum |beta|^2`.
    pub fn commutator(&self) -> f64 {
        self.alpha.iter().map(|z| z.norm_sqr()).sum::<f64>()
            - self.beta.iter().map(|z| z.norm_sqr()).sum::<f64>()
    }

    /// `<X^dag X>` in the vacuum.
    pub fn number(&self) -> f64 {
        self.beta.iter().map(|z| z.norm_sqr()).sum()
    }
}

fn check_basis(x: &ModeCoefficients, y: &ModeCoefficients) -> Result<()> {
    if x.len() != y.len() {
        return invalid(format!(
            "coefficient vectors live on different bases (lengths {} and {})",
            x.len(),
            y.len()
        ));
    }
    Ok(())
}

/// `<X^dag Y>`: only `e e^dag` orderings survive in the vacuum.
pub fn normal_moment(x: &ModeCoefficients, y: &ModeCoefficients) -> Result<Complex64> {
    check_basis(x, y)?;
    Ok(x.beta.iter().zip(&y.beta).map(|(a, b)| a.conj() * b).sum())
}

/// `<X Y>`.
pub fn anomalous_moment(x: &ModeCoefficients, y: &ModeCoefficients) -> Result<Complex64> {
    check_basis(x, y)?;
    Ok(x.alpha.iter().zip(&y.beta).map(|(a, b)| a * b).sum())
}

/// `[X, Y^dag] = sum alpha_X conj(alpha_Y) - beta_X conj(beta_Y)`.
pub fn cross_commutator(x: &ModeCoefficients, y: &ModeCoefficients) -> Result<Complex64> {
    check_basis(x, y)?;
    Ok(x.alpha
        .iter()
        .zip(&y.alpha)
        .map(|(a, b)| a * b.conj())
        .sum::<Complex64>()
        - x.beta
            .iter()
            .zip(&y.beta)
            .map(|(a, b)| a * b.conj())
            .sum::<Complex64>())
}

/// Symmetrized quadrature covariance of the given modes.
///
/// Each quadrature is a real-linear combination `q = sum u_i e_i + conj(u_i) e_i^dag`,
/// so `<{q, q'}>/2 = Re sum u_i conj(u'_i)`.
pub fn covariance_of(modes: &[&ModeCoefficients]) -> Result<CovarianceMatrix> {
    if modes.is_empty() {
        return invalid("need at least one mode");
    }
    for m in &modes[1..] {
        check_basis(modes[0], m)?;
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let i = Complex64::new(0.0, 1.0);
    let quads: Vec<Vec<Complex64>> = modes
        .iter()
        .flat_map(|m| {
            let x = m
                .alpha
                .iter()
                .zip(&m.beta)
                .map(|(a, b)| (a + b.conj()) * s)
                .collect::<Vec<_>>();
            let p = m
                .alpha
                .iter()
                .zip(&m.beta)
                .map(|(a, b)| -i * (a - b.conj()) * s)
                .collect::<Vec<_>>();
            [x, p]
        })
        .collect();
    let dim = quads.len();
    let mut v = DMatrix::zeros(dim, dim);
    for r in 0..dim {
        for c in r..dim {
            let e: Complex64 = quads[r]
                .iter()
                .zip(&quads[c])
                .map(|(a, b)| a * b.conj())
                .sum();
            v[(r, c)] = e.re;
            v[(c, r)] = e.re;
        }
    }
    CovarianceMatrix::from_measured(v)
}

/// Second moments of a pair of filtered modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilteredMoments {
    pub n_ase: f64,
    pub n_rase: f64,
    /// `<A B>`; real for a real mode function, up to discretization residue.
    pub cross_ab: Complex64,
    /// `[A, A^dag] - 1`.
    pub commutator_a: f64,
    /// `[B, B^dag] - 1`.
    pub commutator_b: f64,
}

pub fn filtered_moments(a: &ModeCoefficients, b: &ModeCoefficients) -> Result<FilteredMoments> {
    check_basis(a, b)?;
    Ok(FilteredMoments {
        n_ase: a.number(),
        n_rase: b.number(),
        cross_ab: anomalous_moment(a, b)?,
        commutator_a: a.commutator() - 1.0,
        commutator_b: b.commutator() - 1.0,
    })
}
