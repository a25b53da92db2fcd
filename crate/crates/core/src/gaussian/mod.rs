//! Zero-mean Gaussian states, Bogoliubov maps and the Duan criterion.

mod bogoliubov;
mod covariance;
mod duan;

pub use bogoliubov::{
    apply_map, beamsplitter_map, symplectic_check, two_mode_squeeze_map, BogoliubovMap,
};
pub use covariance::{
    partial_trace, photon_number, vacuum_cov, CovarianceMatrix, PHYSICALITY_TOL, SYMMETRY_TOL,
};
pub use duan::{
    duan_sum, minimize_duan, minimize_theta, DuanResult, SCAN_STEP, THETA_MARGIN, THETA_TOL,
};
