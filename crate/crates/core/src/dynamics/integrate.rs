//! Exponential-midpoint propagation.
//!
//! Each step freezes `H` at the step midpoint and applies `exp(−iHh)` to the
//! state by a Taylor series on the vector, with `h‖H‖∞ ≤ max_phase`. The open
//! system uses a Strang splitting `e^{h𝒟/2} e^{−ih[H,·]} e^{h𝒟/2}`.

use nalgebra::{DMatrix, DVector};

use crate::dynamics::noise::{Dissipator, NoiseModel};
use crate::dynamics::observables::Measurable;
use crate::dynamics::trace::{ObservableTrace, RunDiagnostics};
use crate::dynamics::{DensityMatrix, QuantumState};
use crate::error::{Error, Result};
use crate::linalg;
use crate::model::HamiltonianMatrix;
use crate::scalar::{Real, C};

#[derive(Debug, Clone, Copy)]
pub struct EvolveOptions<T> {
    /// Output frames including `t = 0` and `t = t_final`.
    pub frames: usize,
    /// Upper bound on `h‖H‖∞` for automatic step selection.
    pub max_phase: T,
    /// Fixed number of steps per output interval (disables automatic selection).
    pub steps_per_frame: Option<usize>,
    /// Per-step norm (or trace) change that aborts the run.
    pub step_drift_tol: T,
    pub record_correlations: bool,
    /// Lattice constant for the center-of-mass observable.
    pub lattice_constant: T,
}

impl<T: Real> Default for EvolveOptions<T> {
    fn default() -> Self {
        Self {
            frames: 101,
            max_phase: T::of(0.1),
            steps_per_frame: None,
            step_drift_tol: T::of(1e-10).max(T::of(100.0) * T::eps()),
            record_correlations: true,
            lattice_constant: T::one(),
        }
    }
}

impl<T: Real> EvolveOptions<T> {
    fn validate(&self, t_final: T) -> Result<()> {
        if !(t_final > T::zero() && t_final.is_finite()) {
            return Err(Error::InvalidArgument("t_final must be positive".into()));
        }
        if self.frames < 2 {
            return Err(Error::InvalidArgument("need at least 2 output frames".into()));
        }
        if !(self.max_phase > T::zero()) {
            return Err(Error::InvalidArgument("max_phase must be positive".into()));
        }
        if self.steps_per_frame == Some(0) {
            return Err(Error::InvalidArgument("steps_per_frame must be positive".into()));
        }
        Ok(())
    }

    fn frame_time(&self, t_final: T, f: usize) -> T {
        t_final * T::of_usize(f) / T::of_usize(self.frames - 1)
    }
}

#[derive(Debug, Clone)]
pub struct UnitaryRun<T: Real> {
    pub trace: ObservableTrace<T>,
    pub final_state: QuantumState<T>,
    pub diagnostics: RunDiagnostics<T>,
}

#[derive(Debug, Clone)]
pub struct LindbladRun<T: Real> {
    pub trace: ObservableTrace<T>,
    pub final_state: DensityMatrix<T>,
    pub diagnostics: RunDiagnostics<T>,
}

/// Steps for one output interval, from `‖H‖∞` sampled at its ends and middle.
fn auto_steps<T: Real, F>(h_builder: &mut F, ta: T, tb: T, extra_rate: T, max_phase: T) -> usize
where
    F: FnMut(T) -> HamiltonianMatrix<T>,
{
    let mid = (ta + tb) * T::of(0.5);
    let bound = [ta, mid, tb].iter().fold(T::zero(), |m, &t| m.max(h_builder(t).norm_inf())) + extra_rate;
    steps_for(bound * T::of(1.2), tb - ta, max_phase)
}

fn check_dim<T: Real>(ham: &HamiltonianMatrix<T>, dim: usize) -> Result<()> {
    if ham.dim() != dim {
        return Err(Error::InvalidArgument(format!("Hamiltonian of dimension {} on a basis of {dim}", ham.dim())));
    }
    Ok(())
}

fn steps_for<T: Real>(bound: T, dt: T, max_phase: T) -> usize {
    let n = (dt * bound / max_phase).ceil().as_f64();
    (n as usize).max(1)
}

/// Outcome of one attempted interval.
enum Interval {
    Done,
    /// `‖H‖∞` along the interval exceeded the bound; retry with this many steps.
    Refine(usize),
}

/// Integrates `i∂_t|ψ⟩ = H(t)|ψ⟩` from 0 to `t_final`.
pub fn evolve_unitary<T: Real, F>(
    mut h_builder: F,
    psi0: &QuantumState<T>,
    t_final: T,
    opts: &EvolveOptions<T>,
) -> Result<UnitaryRun<T>>
where
    F: FnMut(T) -> HamiltonianMatrix<T>,
{
    opts.validate(t_final)?;
    let basis = psi0.basis().clone();
    let dim = basis.dim();
    let d = opts.lattice_constant;
    let mut trace = ObservableTrace::default();
    let mut diag = RunDiagnostics::default();
    let mut psi = psi0.clone();
    let mut scratch = (DVector::zeros(dim), DVector::zeros(dim));
    trace.record(&basis, &psi.probabilities(), T::zero(), d, T::one(), psi.norm(), opts.record_correlations);

    for f in 1..opts.frames {
        let ta = opts.frame_time(t_final, f - 1);
        let tb = opts.frame_time(t_final, f);
        let mut m = match opts.steps_per_frame {
            Some(m) => m,
            None => auto_steps(&mut h_builder, ta, tb, T::zero(), opts.max_phase),
        };
        let start = psi.amplitudes().clone();
        loop {
            match unitary_interval(&mut h_builder, &mut psi, &mut scratch, ta, tb, m, opts, &mut diag)? {
                Interval::Done => break,
                Interval::Refine(more) => {
                    m = more;
                    psi.amplitudes_mut().copy_from(&start);
                }
            }
        }
        let l = psi.fidelity(psi0);
        trace.record(&basis, &psi.probabilities(), tb, d, l, psi.norm(), opts.record_correlations);
    }
    Ok(UnitaryRun { trace, final_state: psi, diagnostics: diag })
}

#[allow(clippy::too_many_arguments)]
fn unitary_interval<T: Real, F>(
    h_builder: &mut F,
    psi: &mut QuantumState<T>,
    scratch: &mut (DVector<C<T>>, DVector<C<T>>),
    ta: T,
    tb: T,
    m: usize,
    opts: &EvolveOptions<T>,
    diag: &mut RunDiagnostics<T>,
) -> Result<Interval>
where
    F: FnMut(T) -> HamiltonianMatrix<T>,
{
    let h = (tb - ta) / T::of_usize(m);
    for s in 0..m {
        let tm = ta + h * (T::of_usize(s) + T::of(0.5));
        let ham = h_builder(tm);
        check_dim(&ham, psi.amplitudes().len())?;
        let phase = ham.norm_inf() * h;
        if opts.steps_per_frame.is_none() && phase > opts.max_phase {
            return Ok(Interval::Refine(steps_for(ham.norm_inf() * T::of(1.2), tb - ta, opts.max_phase).max(m + 1)));
        }
        diag.max_phase_used = diag.max_phase_used.max(phase);
        let before = psi.norm();
        linalg::expm_action(ham.csr(), h, psi.amplitudes_mut(), scratch);
        let drift = (psi.norm() - before).abs();
        diag.max_step_drift = diag.max_step_drift.max(drift);
        if drift > opts.step_drift_tol {
            return Err(Error::StepTooLarge { t: tm.as_f64(), drift: drift.as_f64(), tol: opts.step_drift_tol.as_f64() });
        }
        diag.steps += 1;
    }
    Ok(Interval::Done)
}

/// Density matrices with an eigenvalue below this are reported.
pub const POSITIVITY_THRESHOLD: f64 = -1e-5;

/// Integrates `ρ̇ = −i[H, ρ] + 𝒟ρ` from 0 to `t_final`.
///
/// `h_builder` must return `H` on the basis of `rho0` (normally the direct
/// sum of particle-number sectors so relaxation can remove particles).
pub fn evolve_lindblad<T: Real, F>(
    mut h_builder: F,
    rho0: &DensityMatrix<T>,
    noise: &NoiseModel<T>,
    t_final: T,
    opts: &EvolveOptions<T>,
) -> Result<LindbladRun<T>>
where
    F: FnMut(T) -> HamiltonianMatrix<T>,
{
    opts.validate(t_final)?;
    let basis = rho0.basis().clone();
    let diss = Dissipator::new(&basis, noise)?;
    let d = opts.lattice_constant;
    let mut trace = ObservableTrace::default();
    let mut diag = RunDiagnostics::default();
    let mut rho = rho0.clone();
    let threshold = T::of(POSITIVITY_THRESHOLD);

    let observe = |rho: &DensityMatrix<T>, t: T, trace: &mut ObservableTrace<T>, diag: &mut RunDiagnostics<T>| -> Result<()> {
        let l = rho.overlap(rho0);
        trace.record(&basis, &rho.probabilities(), t, d, l, rho.trace(), opts.record_correlations);
        let ev = rho.min_eigenvalue()?;
        diag.min_eigenvalue = Some(diag.min_eigenvalue.map_or(ev, |m: T| m.min(ev)));
        if ev < threshold {
            diag.positivity_warnings.push((t, ev));
        }
        Ok(())
    };
    observe(&rho, T::zero(), &mut trace, &mut diag)?;

    for f in 1..opts.frames {
        let ta = opts.frame_time(t_final, f - 1);
        let tb = opts.frame_time(t_final, f);
        let mut m = match opts.steps_per_frame {
            Some(m) => m,
            None => auto_steps(&mut h_builder, ta, tb, diss.rate_bound(), opts.max_phase),
        };
        let start = rho.matrix().clone();
        loop {
            match lindblad_interval(&mut h_builder, &diss, rho.matrix_mut(), ta, tb, m, opts, &mut diag)? {
                Interval::Done => break,
                Interval::Refine(more) => {
                    m = more;
                    rho.matrix_mut().copy_from(&start);
                }
            }
        }
        observe(&rho, tb, &mut trace, &mut diag)?;
    }
    Ok(LindbladRun { trace, final_state: rho, diagnostics: diag })
}

#[allow(clippy::too_many_arguments)]
fn lindblad_interval<T: Real, F>(
    h_builder: &mut F,
    diss: &Dissipator<T>,
    rho: &mut DMatrix<C<T>>,
    ta: T,
    tb: T,
    m: usize,
    opts: &EvolveOptions<T>,
    diag: &mut RunDiagnostics<T>,
) -> Result<Interval>
where
    F: FnMut(T) -> HamiltonianMatrix<T>,
{
    let h = (tb - ta) / T::of_usize(m);
    let half = h * T::of(0.5);
    let tr = |r: &DMatrix<C<T>>| r.diagonal().iter().fold(T::zero(), |s, z| s + z.re);
    for s in 0..m {
        let tm = ta + h * (T::of_usize(s) + T::of(0.5));
        let ham = h_builder(tm);
        check_dim(&ham, rho.nrows())?;
        let phase = (ham.norm_inf() + diss.rate_bound()) * h;
        if opts.steps_per_frame.is_none() && phase > opts.max_phase {
            let bound = (ham.norm_inf() + diss.rate_bound()) * T::of(1.2);
            return Ok(Interval::Refine(steps_for(bound, tb - ta, opts.max_phase).max(m + 1)));
        }
        diag.max_phase_used = diag.max_phase_used.max(phase);
        let before = tr(rho);
        diss.exp_apply(half, rho);
        linalg::expm_commutator_action(ham.csr(), h, rho);
        diss.exp_apply(half, rho);
        let drift = (tr(rho) - before).abs();
        diag.max_step_drift = diag.max_step_drift.max(drift);
        if drift > opts.step_drift_tol {
            return Err(Error::StepTooLarge { t: tm.as_f64(), drift: drift.as_f64(), tol: opts.step_drift_tol.as_f64() });
        }
        diag.steps += 1;
    }
    Ok(Interval::Done)
}
