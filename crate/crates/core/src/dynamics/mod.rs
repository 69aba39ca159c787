//! Unitary and Lindblad time evolution with the measured observables.

mod integrate;
mod noise;
mod observables;
mod state;
mod trace;

pub use integrate::{evolve_lindblad, evolve_unitary, EvolveOptions, LindbladRun, UnitaryRun, POSITIVITY_THRESHOLD};
pub use noise::{Dissipator, NoiseModel};
pub use observables::{
    com_from, correlations_from, loschmidt_echo, measure_com, measure_correlations, measure_populations,
    neighbour_pair_population, normalize_correlations, off_diagonal_fraction, pair_population_from, populations_from, Measurable,
};
pub use state::{prepare_site_excitation, DensityMatrix, QuantumState};
pub use trace::{ObservableTrace, RunDiagnostics};
