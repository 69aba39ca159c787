//! Interacting Rice-Mele lattice with Hubbard interaction: Hamiltonians,
//! band topology, unitary and Lindblad dynamics, and the Floquet picture.
//!
//! Everything is generic over the scalar [`Real`] (`f32` or `f64`); the
//! aliases at the crate root fix it to `f64`. Energies are angular
//! frequencies in rad/µs and times in µs.

pub mod bands;
pub mod dynamics;
pub mod error;
pub mod floquet;
pub mod linalg;
pub mod model;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{Real, C};

pub use bands::{BandLabel, BlochGrid};
pub use model::{Boundary, DriveKind, FockBasis};

pub type LatticeSpec = model::LatticeSpec<f64>;
pub type DriveProtocol = model::DriveProtocol<f64>;
pub type DriveParams = model::DriveParams<f64>;
pub type HamiltonianMatrix = model::HamiltonianMatrix<f64>;
pub type ManyBodyTemplate = model::ManyBodyTemplate<f64>;
pub type BandResult = bands::BandResult<f64>;
pub type ComBandResult = bands::ComBandResult<f64>;
pub type QuantumState = dynamics::QuantumState<f64>;
pub type DensityMatrix = dynamics::DensityMatrix<f64>;
pub type NoiseModel = dynamics::NoiseModel<f64>;
pub type ObservableTrace = dynamics::ObservableTrace<f64>;
pub type DrivenHamiltonian = model::DrivenHamiltonian<f64>;
pub type FloquetSpec = floquet::FloquetSpec<f64>;
pub type FloquetSpectrum = floquet::FloquetSpectrum<f64>;
