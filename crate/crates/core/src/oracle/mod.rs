//! Time-domain Heisenberg-Langevin oracle.
//!
//! The atomic continuum is replaced by a uniform grid of detuned bosonic
//! oscillators and the cavity is kept as a dynamical mode (no adiabatic
//! elimination). Inputs are vacuum, so every output operator is a linear
//! combination of elementary input operators and all second moments follow
//! from contracting coefficient vectors.

mod coefficients;
mod config;
mod convergence;
mod dynamics;
mod grid;
mod report;
mod solver;

pub use coefficients::{
    anomalous_moment, covariance_of, cross_commutator, filtered_moments, normal_moment,
    FilteredMoments, ModeCoefficients,
};
pub use config::{OracleConfig, RegimeWarning, MODE_HALF_WIDTHS};
pub use convergence::{
    convergence_study, refine, ConvergenceRow, ConvergenceTable, NOISE_FLOOR, REFINEMENT_RATIO,
};
pub use dynamics::{pi_pulse_flip, FieldState, Generator, Region};
pub use grid::{build_grid, DetuningGrid};
pub use report::{
    cavity_commutator_trace, relative_delta, rephasing_check, run_oracle, AnalyticDeltas,
    OracleReport, RephasingCheck, DUAN_SAMPLE_THETAS,
};
pub use solver::{continuum_mode, OracleSolver, Probe};
