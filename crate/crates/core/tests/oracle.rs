mod common;

use approx::assert_relative_eq;
use num_complex::Complex64;

use common::{rates, small_config};
use crase_core::oracle::{
    build_grid, cavity_commutator_trace, convergence_study, pi_pulse_flip, rephasing_check,
    run_oracle, FieldState, Generator, OracleSolver, Probe, RegimeWarning, Region,
};
use crase_core::{CraseError, OracleConfig};

fn default_rates() -> crase_core::RateParams {
    rates(1.0, 1.0 / 3.0, 1.0, 1.0)
}

#[test]
fn small_config_is_clean() {
    assert!(small_config(default_rates()).validate().unwrap().is_empty());
}

#[test]
fn passive_cavity_and_decoupled_atoms() {
    // No gain: the cavity emits nothing.
    let r = run_oracle(&small_config(rates(1.0, 0.0, 1.0, 1.0))).unwrap();
    assert!(r.n_ase.abs() < 1e-12 && r.n_rase.abs() < 1e-12);
    assert_eq!(r.efficiency, None);
    // Vacuum up to the discretized commutator defect of B.
    assert!((r.duan_sum_at(0.5).unwrap() - 1.0).abs() < 1e-6);
    assert!(r.analytic_deltas.max() < 1e-6);

    // No region-2 atom coupling: nothing is recalled. What remains is the
    // tail of the cavity photons present at the pulse, which have decayed
    // for 5 time units before the RASE mode opens.
    let r = run_oracle(&small_config(rates(1.0, 1.0 / 3.0, 1.0, 0.0))).unwrap();
    assert!(r.n_rase.abs() < 1e-6, "{}", r.n_rase);
    assert!(r.n_ase > 2.5);
}

#[test]
fn report_invariants_and_determinism() {
    let cfg = small_config(default_rates());
    let r1 = run_oracle(&cfg).unwrap();
    let r2 = run_oracle(&cfg).unwrap();
    assert_eq!(r1, r2);
    assert!(r1.cross_ab_imag.abs() < 1e-9);
    assert!(r1.n_ase >= -1e-9 && r1.n_rase >= -1e-9);
    assert!(r1.commutator_a.abs() < 1e-3 && r1.commutator_b.abs() < 1e-3);
    assert!(r1.covariance.is_physical());
    // Coarse, but already within 5% on photon numbers.
    assert!(r1.analytic_deltas.n_ase < 0.05, "{:?}", r1.analytic_deltas);
}

#[test]
fn coarse_time_step_is_reported_as_instability() {
    let cfg = OracleConfig {
        dt: 0.5,
        ..small_config(default_rates())
    };
    let warnings = cfg.validate().unwrap();
    assert!(warnings
        .iter()
        .any(|w| matches!(w, RegimeWarning::CoarseStep { .. })));
    assert!(matches!(run_oracle(&cfg), Err(CraseError::Instability(_))));
}

/// One inverted oscillator, no cavity coupling: the phase picked up before
/// the pulse is undone after it, so the oscillator returns to its initial
/// value at the mirrored time.
#[test]
fn pulse_rephases_free_evolution() {
    let cfg = small_config(rates(1.0, 0.0, 1.0, 0.0));
    let grid = build_grid(&cfg).unwrap();
    let n = grid.len() + 1;
    // Slow enough that RK4 phase error stays below 1e-9 over the run.
    let j = grid.len() / 2 + 15;
    let det = grid.detunings()[j];
    let mut z = vec![Complex64::new(0.0, 0.0); 2 * n];
    z[1 + j] = Complex64::new(0.6, -0.8);
    z[1] = Complex64::new(1.0, 0.0);

    let (h, steps) = (0.01, 1000);
    let mut st = FieldState::new(Region::Ase, -(steps as f64) * h, z.clone());
    st.propagate(&Generator::new(Region::Ase, &cfg.rates, &grid), h, steps)
        .unwrap();
    let dephased = st.atom(j);
    assert!((dephased - z[1 + j] * Complex64::from_polar(1.0, det * 10.0)).norm() < 1e-8);

    let mut st = pi_pulse_flip(st).unwrap();
    assert_eq!(st.atom(j), dephased);
    st.propagate(&Generator::new(Region::Rase, &cfg.rates, &grid), h, steps)
        .unwrap();
    assert!((st.atom(j) - z[1 + j]).norm() < 1e-9);
    // The fastest oscillator also returns: RK4 phase errors cancel between
    // the two regions because the pulse conjugates the rotation.
    assert!((st.atom(0) - z[1]).norm() < 1e-4);

    // Zero excitation stays zero.
    let zero = vec![Complex64::new(0.0, 0.0); 2 * n];
    let st = pi_pulse_flip(FieldState::new(Region::Ase, 0.0, zero.clone())).unwrap();
    assert_eq!(st.values(), &zero[..]);
}

#[test]
fn atomic_output_rephases_into_region_two() {
    let cfg = small_config(default_rates());
    let check = rephasing_check(&cfg).unwrap();
    assert!(check.overlap > 0.99, "{check:?}");
    assert!(check.flux_mismatch() < 0.05, "{check:?}");
}

#[test]
fn atomic_input_needs_region_two_coupling() {
    let s = OracleSolver::new(&small_config(rates(1.0, 0.3, 1.0, 0.0))).unwrap();
    assert!(s.resolve(Probe::AtomicInput).is_err());
}

#[test]
fn cavity_commutator_holds_throughout() {
    let trace = cavity_commutator_trace(&small_config(default_rates()), 5).unwrap();
    assert_eq!(trace.len(), 10);
    assert!(trace.iter().all(|&(_, _, d)| d.abs() < 1e-3), "{trace:?}");
    assert_eq!(trace[0].1, -95.0);
    assert_relative_eq!(trace[9].1, 95.0, epsilon = 1e-9);
}

#[test]
fn two_level_study_improves_photon_number() {
    let base = OracleConfig {
        m_oscillators: 221,
        t_region: 60.0,
        mode_sigma: 5.0,
        mode_center: 27.0,
        ..small_config(default_rates())
    };
    let table = convergence_study(&base, 2).unwrap();
    let series = table.series("n_ase");
    assert!(series[1].unwrap() <= series[0].unwrap(), "{series:?}");
    assert!(table.monotone(), "{:?}", table.non_monotone());
    assert_eq!(table.rows.len(), 2);
}

#[test]
fn zero_squeezing_study_is_all_zero() {
    let base = small_config(rates(1.0, 0.0, 1.0, 1.0));
    let table = convergence_study(&base, 2).unwrap();
    for row in &table.rows {
        assert!(row.report.analytic_deltas.max() < 1e-6);
    }
}

#[test]
fn broadband_mode_is_flagged_and_misses_the_closed_form() {
    let base = OracleConfig {
        mode_sigma: 1.0,
        mode_center: 45.0,
        ..small_config(default_rates())
    };
    let table = convergence_study(&base, 2).unwrap();
    assert!(table
        .flagged()
        .iter()
        .any(|(_, w)| matches!(w, RegimeWarning::BroadbandMode { .. })));
    assert!(table.final_report().analytic_deltas.max() > 0.1);
}
