use nalgebra::DMatrix;

use crate::dynamics::observables::{com_from, correlations_from, pair_population_from, populations_from};
use crate::model::FockBasis;
use crate::scalar::Real;

/// Observables on the output time grid.
#[derive(Debug, Clone, Default)]
pub struct ObservableTrace<T> {
    pub times: Vec<T>,
    /// `populations[frame][site] = [P(n=0), P(n=1), P(n=2)]`.
    pub populations: Vec<Vec<[T; 3]>>,
    /// Center of mass in units of `d`.
    pub com_position: Vec<T>,
    /// `Γ_ij` per frame (empty when correlations were not recorded).
    pub correlations: Vec<DMatrix<T>>,
    pub loschmidt: Vec<T>,
    /// Probability on neighbouring-pair states `|1_j 1_{j+1}⟩`.
    pub pair_population: Vec<T>,
    /// State norm (unitary) or trace (Lindblad) per frame.
    pub norm: Vec<T>,
}

impl<T: Real> ObservableTrace<T> {
    pub fn frames(&self) -> usize {
        self.times.len()
    }

    /// `x(t) − x(0)` per frame.
    pub fn delta_x(&self) -> Vec<T> {
        let x0 = self.com_position.first().copied().unwrap_or_else(T::zero);
        self.com_position.iter().map(|&x| x - x0).collect()
    }

    pub fn final_delta_x(&self) -> T {
        self.delta_x().last().copied().unwrap_or_else(T::zero)
    }

    /// Largest `|norm − 1|` over the frames.
    pub fn norm_drift(&self) -> T {
        self.norm.iter().fold(T::zero(), |m, &n| m.max((n - T::one()).abs()))
    }

    /// Largest single-occupancy population over all sites and frames.
    pub fn max_single_occupancy(&self) -> T {
        self.populations
            .iter()
            .flat_map(|f| f.iter())
            .fold(T::zero(), |m, p| m.max(p[1]))
    }

    pub(crate) fn record(&mut self, basis: &FockBasis, probs: &[T], t: T, d: T, loschmidt: T, norm: T, gamma: bool) {
        self.times.push(t);
        self.populations.push(populations_from(basis, probs));
        self.com_position.push(com_from(basis, probs, d));
        if gamma {
            self.correlations.push(correlations_from(basis, probs));
        }
        self.loschmidt.push(loschmidt);
        self.pair_population.push(pair_population_from(basis, probs));
        self.norm.push(norm);
    }
}

/// Integrator bookkeeping for one run.
#[derive(Debug, Clone, Default)]
pub struct RunDiagnostics<T> {
    pub steps: usize,
    /// Largest per-step change of the norm (unitary) or trace (Lindblad).
    pub max_step_drift: T,
    /// Largest `h·‖H‖∞` actually used.
    pub max_phase_used: T,
    /// Lindblad only: smallest density-matrix eigenvalue seen at an output frame.
    pub min_eigenvalue: Option<T>,
    /// Lindblad only: `(time, eigenvalue)` for frames below the positivity threshold.
    pub positivity_warnings: Vec<(T, T)>,
}
