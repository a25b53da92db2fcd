//! Linear Heisenberg equations for the cavity mode and the detuning grid.
//!
//! The state vector is `z = (a, s_0..s_{M-1}, a^dag, s_0^dag..s_{M-1}^dag)`,
//! so the equations are complex-linear even though region 1 couples `a` to
//! `s^dag`. In the rotating frame, with `k = gamma_b / 2`:
//!
//! ```text
//! region 1:  da/dt   = -k a - g sum_j s_j^dag - sqrt(gamma_b1) b_in
//!            ds_j/dt = +i D_j s_j - g a^dag
//! region 2:  da/dt   = -k a - g sum_j d_j     - sqrt(gamma_b2) b_in
//!            dd_j/dt = -i D_j d_j + g a
//! ```
//!
//! These reproduce the free-evolution phases `exp(+i D t)` of the inverted
//! oscillators and `exp(-i D t)` of the ground-state ones. A global phase on
//! the atomic operators would leave every moment unchanged, so no other
//! convention is needed.

use num_complex::Complex64;

use super::grid::DetuningGrid;
use crate::crase::RateParams;
use crate::error::{invalid, Result};

/// Time region: before (`Ase`) or after (`Rase`) the rephasing pulse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    Ase,
    Rase,
}

/// Generator `L` of `dz/dt = L z + (input)` for one region.
#[derive(Debug, Clone)]
pub struct Generator {
    region: Region,
    half_loss: f64,
    sqrt_loss: f64,
    coupling: f64,
    detunings: Vec<f64>,
}

impl Generator {
    pub fn new(region: Region, rates: &RateParams, grid: &DetuningGrid) -> Self {
        let (loss, coupling) = match region {
            Region::Ase => (rates.gamma_b1, grid.coupling_r1()),
            Region::Rase => (rates.gamma_b2, grid.coupling_r2()),
        };
        Self {
            region,
            half_loss: loss / 2.0,
            sqrt_loss: loss.sqrt(),
            coupling,
            detunings: grid.detunings().to_vec(),
        }
    }

    pub fn region(&self) -> Region {
        self.region
    }

    /// Length of the doubled state vector.
    pub fn dim(&self) -> usize {
        2 * (self.detunings.len() + 1)
    }

    /// `sqrt(gamma_b)` of this region: the input-output coupling.
    pub fn sqrt_loss(&self) -> f64 {
        self.sqrt_loss
    }

    /// `dst = base + scale * L src`, or with `L^T` when `transpose` is set.
    pub fn apply(
        &self,
        transpose: bool,
        src: &[Complex64],
        base: &[Complex64],
        scale: f64,
        dst: &mut [Complex64],
    ) {
        let n = self.detunings.len() + 1;
        debug_assert!(src.len() == 2 * n && base.len() == 2 * n && dst.len() == 2 * n);
        let k = self.half_loss;
        let g = self.coupling;
        let (src_ann, src_cre) = src.split_at(n);
        let (base_ann, base_cre) = base.split_at(n);
        let (dst_ann, dst_cre) = dst.split_at_mut(n);
        let sum_ann: Complex64 = src_ann[1..].iter().sum();
        let sum_cre: Complex64 = src_cre[1..].iter().sum();
        let (a, a_dag) = (src_ann[0], src_cre[0]);

        // Cavity rows/columns. Region 1's L is symmetric; region 2's
        // off-diagonal block is antisymmetric, so only it flips under transpose.
        let (cav_gain, atom_gain, atom_phase) = match (self.region, transpose) {
            (Region::Ase, _) => (-g, -g, 1.0),
            (Region::Rase, false) => (-g, g, -1.0),
            (Region::Rase, true) => (g, -g, -1.0),
        };
        match self.region {
            Region::Ase => {
                dst_ann[0] = base_ann[0] + scale * (-k * a + cav_gain * sum_cre);
                dst_cre[0] = base_cre[0] + scale * (-k * a_dag + cav_gain * sum_ann);
            }
            Region::Rase => {
                dst_ann[0] = base_ann[0] + scale * (-k * a + cav_gain * sum_ann);
                dst_cre[0] = base_cre[0] + scale * (-k * a_dag + cav_gain * sum_cre);
            }
        }
        // Atom j sees the cavity operator of the opposite (region 1) or same
        // (region 2) ladder type.
        let (drive_ann, drive_cre) = match self.region {
            Region::Ase => (a_dag, a),
            Region::Rase => (a, a_dag),
        };
        let drive_ann = scale * atom_gain * drive_ann;
        let drive_cre = scale * atom_gain * drive_cre;
        for (((d_ann, d_cre), (s_ann, s_cre)), ((b_ann, b_cre), &det)) in dst_ann[1..]
            .iter_mut()
            .zip(dst_cre[1..].iter_mut())
            .zip(src_ann[1..].iter().zip(&src_cre[1..]))
            .zip(
                base_ann[1..]
                    .iter()
                    .zip(&base_cre[1..])
                    .zip(&self.detunings),
            )
        {
            let w = scale * atom_phase * det;
            // (+i w) z
            *d_ann = *b_ann + Complex64::new(-w * s_ann.im, w * s_ann.re) + drive_ann;
            *d_cre = *b_cre + Complex64::new(w * s_cre.im, -w * s_cre.re) + drive_cre;
        }
    }
}

/// Scratch buffers for repeated RK4 steps of one generator.
#[derive(Debug, Clone)]
pub(crate) struct Stepper {
    t1: Vec<Complex64>,
    t2: Vec<Complex64>,
}

impl Stepper {
    pub(crate) fn new(dim: usize) -> Self {
        Self {
            t1: vec![Complex64::new(0.0, 0.0); dim],
            t2: vec![Complex64::new(0.0, 0.0); dim],
        }
    }

    /// One classic RK4 step of the linear system, written in nested form:
    /// `z <- z + h L phi(hL) z` with `phi(x) = 1 + x/2 + x^2/6 + x^3/24`.
    ///
    /// Returns `phi(hL) z` (before the final update) through the callback so
    /// that the adjoint sweep can read the input-bin sensitivities, which
    /// for a held-constant input are `h B^T phi(hL^T) lambda`.
    pub(crate) fn step<F: FnOnce(&[Complex64])>(
        &mut self,
        gen: &Generator,
        transpose: bool,
        h: f64,
        z: &mut Vec<Complex64>,
        inspect: F,
    ) {
        gen.apply(transpose, z, z, h / 4.0, &mut self.t1);
        gen.apply(transpose, &self.t1, z, h / 3.0, &mut self.t2);
        gen.apply(transpose, &self.t2, z, h / 2.0, &mut self.t1);
        inspect(&self.t1);
        gen.apply(transpose, &self.t1, z, h, &mut self.t2);
        std::mem::swap(z, &mut self.t2);
    }
}

/// Forward-propagated response of every tracked operator to one elementary
/// initial operator (one column of the propagator), with vacuum inputs.
#[derive(Debug, Clone)]
pub struct FieldState {
    region: Region,
    time: f64,
    z: Vec<Complex64>,
}

impl FieldState {
    /// State with coefficient vector `z` at time `time`.
    pub fn new(region: Region, time: f64, z: Vec<Complex64>) -> Self {
        Self { region, time, z }
    }

    pub fn region(&self) -> Region {
        self.region
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn values(&self) -> &[Complex64] {
        &self.z
    }

    /// Coefficient of atom `j` (annihilator half).
    pub fn atom(&self, j: usize) -> Complex64 {
        self.z[1 + j]
    }

    pub fn cavity(&self) -> Complex64 {
        self.z[0]
    }

    /// Advances `steps` RK4 steps of size `h` under `gen`.
    pub fn propagate(&mut self, gen: &Generator, h: f64, steps: usize) -> Result<()> {
        if gen.region() != self.region {
            return invalid("generator belongs to a different time region than the state");
        }
        if gen.dim() != self.z.len() {
            return invalid("generator and state dimensions differ");
        }
        let mut stepper = Stepper::new(self.z.len());
        for _ in 0..steps {
            stepper.step(gen, false, h, &mut self.z, |_| {});
        }
        self.time += h * steps as f64;
        Ok(())
    }
}

/// Instantaneous rephasing pulse at `t = 0`.
///
/// Each inverted oscillator `s_j` becomes the ground-state oscillator `d_j`
/// with the same operator value; only the generator (sign of the detuning
/// term and the coupling type) changes. The cavity is not addressed by the
/// pulse and carries over unchanged.
pub fn pi_pulse_flip(state: FieldState) -> Result<FieldState> {
    if state.region != Region::Ase {
        return invalid("the rephasing pulse acts on a region-1 state");
    }
    if state.time.abs() > 1e-9 {
        return invalid(format!(
            "the rephasing pulse is applied at t = 0, state is at t = {}",
            state.time
        ));
    }
    Ok(FieldState {
        region: Region::Rase,
        time: 0.0,
        z: state.z,
    })
}
