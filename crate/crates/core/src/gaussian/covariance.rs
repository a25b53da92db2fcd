use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{invalid, Result};

/// Relative asymmetry tolerated when accepting a covariance matrix.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Smallest eigenvalue of `V + (i/2) Omega` still accepted as physical.
pub const PHYSICALITY_TOL: f64 = 1e-9;

/// Zero-mean Gaussian state stored as its `2n x 2n` quadrature covariance
/// matrix in `(x1, p1, ..., xn, pn)` ordering.
///
/// Entries are symmetrized second moments `<{xi_i, xi_j}>/2`; the vacuum is
/// `I/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    entries: DMatrix<f64>,
}

impl CovarianceMatrix {
    /// Vacuum on `n_modes` modes.
    pub fn vacuum(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return invalid("vacuum_cov needs at least one mode");
        }
        Ok(Self {
            entries: DMatrix::identity(2 * n_modes, 2 * n_modes) * 0.5,
        })
    }

    /// Wraps a matrix after checking symmetry and the uncertainty relation.
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        let cov = Self::from_measured(entries)?;
        let min_eig = cov.uncertainty_min_eigenvalue();
        if min_eig < -PHYSICALITY_TOL {
            return invalid(format!(
                "covariance violates the uncertainty relation (min eigenvalue {min_eig:e})"
            ));
        }
        Ok(cov)
    }

    /// Wraps a matrix after checking only shape and symmetry.
    ///
    /// Used for moments measured from a discretized simulation, where the
    /// commutators are only canonical to within the discretization error and
    /// the uncertainty relation may be violated by a comparable amount.
    pub fn from_measured(entries: DMatrix<f64>) -> Result<Self> {
        let (rows, cols) = entries.shape();
        if rows != cols || rows == 0 || rows % 2 != 0 {
            return invalid(format!(
                "covariance must be a non-empty 2n x 2n matrix, got {rows} x {cols}"
            ));
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return invalid("covariance contains non-finite entries");
        }
        let scale = entries.amax().max(1.0);
        for i in 0..rows {
            for j in (i + 1)..rows {
                if (entries[(i, j)] - entries[(j, i)]).abs() > SYMMETRY_TOL * scale {
                    return invalid(format!("covariance is not symmetric at ({i}, {j})"));
                }
            }
        }
        Ok(Self { entries })
    }

    pub fn n_modes(&self) -> usize {
        self.entries.nrows() / 2
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<f64> {
        self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    pub(crate) fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.n_modes() {
            return invalid(format!(
                "mode index {mode} out of range for {} modes",
                self.n_modes()
            ));
        }
        Ok(())
    }

    /// Smallest eigenvalue of `V + (i/2) Omega`.
    ///
    /// The Hermitian matrix is handled through its real `4n x 4n` embedding
    /// `[[V, -Omega/2], [Omega/2, V]]`, which has the same spectrum (doubled).
    pub fn uncertainty_min_eigenvalue(&self) -> f64 {
        let d = self.entries.nrows();
        let mut big = DMatrix::zeros(2 * d, 2 * d);
        big.view_mut((0, 0), (d, d)).copy_from(&self.entries);
        big.view_mut((d, d), (d, d)).copy_from(&self.entries);
        for k in 0..d / 2 {
            let (x, p) = (2 * k, 2 * k + 1);
            // Omega = diag([[0, 1], [-1, 0]])
            big[(x, d + p)] = -0.5;
            big[(p, d + x)] = 0.5;
            big[(d + x, p)] = 0.5;
            big[(d + p, x)] = -0.5;
        }
        SymmetricEigen::new(big)
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn is_physical(&self) -> bool {
        self.uncertainty_min_eigenvalue() >= -PHYSICALITY_TOL
    }
}

/// Vacuum covariance on `n_modes` modes.
pub fn vacuum_cov(n_modes: usize) -> Result<CovarianceMatrix> {
    CovarianceMatrix::vacuum(n_modes)
}

/// Reduced state on the modes in `keep`, in the order given.
pub fn partial_trace(v: &CovarianceMatrix, keep: &[usize]) -> Result<CovarianceMatrix> {
    if keep.is_empty() {
        return invalid("partial_trace needs at least one mode to keep");
    }
    check_distinct(v, keep)?;
    let idx: Vec<usize> = keep.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();
    let sub = DMatrix::from_fn(idx.len(), idx.len(), |i, j| v.get(idx[i], idx[j]));
    Ok(CovarianceMatrix { entries: sub })
}

/// Mean photon number `(V_xx + V_pp - 1)/2` of one mode.
pub fn photon_number(v: &CovarianceMatrix, mode: usize) -> Result<f64> {
    v.check_mode(mode)?;
    Ok((v.get(2 * mode, 2 * mode) + v.get(2 * mode + 1, 2 * mode + 1) - 1.0) / 2.0)
}

pub(crate) fn check_distinct(v: &CovarianceMatrix, modes: &[usize]) -> Result<()> {
    for (i, &m) in modes.iter().enumerate() {
        v.check_mode(m)?;
        if modes[..i].contains(&m) {
            return invalid(format!("mode {m} listed twice"));
        }
    }
    Ok(())
}
