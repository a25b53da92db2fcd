//! Cavity-enhanced rephased amplified spontaneous emission (CRASE).
//!
//! Three layers live in this crate:
//!
//! * [`gaussian`]: zero-mean Gaussian states as covariance matrices,
//!   Bogoliubov maps acting on them, and the Duan inseparability functional.
//! * [`crase`]: the closed-form two-mode-squeezer + beamsplitter model that
//!   maps cavity rates to `(chi, eps)` and evaluates photon numbers, recall
//!   efficiency and the Duan sum.
//! * [`oracle`]: an independent time-domain Heisenberg-Langevin simulation of
//!   a discretized inhomogeneously broadened ensemble in a cavity, with the
//!   rephasing pulse in the middle. It never uses adiabatic elimination and
//!   is used to check the closed-form model.
//!
//! [`sweep`] and [`contour`] build the (sqrt(eps), cosh(chi)) Duan map and its
//! contour lines.
//!
//! Quadratures follow `x = (c + c^dag)/sqrt(2)`, `p = -i(c - c^dag)/sqrt(2)`,
//! so the vacuum variance is 1/2 and the Duan entanglement threshold is
//! exactly 1. Other conventions put the threshold at 2.

pub mod contour;
pub mod crase;
mod error;
pub mod gaussian;
pub mod oracle;
pub mod sweep;

pub use crase::{CraseMoments, RateParams, SqueezeParams};
pub use error::{CraseError, Result};
pub use gaussian::{BogoliubovMap, CovarianceMatrix, DuanResult};
pub use oracle::{OracleConfig, OracleReport};
