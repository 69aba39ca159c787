//! Lattice, drive protocols, Fock basis and Hamiltonian builders.

mod basis;
mod drive;
mod hamiltonian;
mod lattice;

pub use basis::{build_fock_basis, FockBasis};
pub use drive::{instantaneous_params, DriveKind, DriveParams, DriveProtocol, DriveSchedule};
pub use hamiltonian::{
    bond_hoppings, build_many_body_hamiltonian, build_single_particle_hamiltonian, site_energies, DrivenHamiltonian,
    HamiltonianMatrix, ManyBodyTemplate,
};
pub use lattice::{Boundary, LatticeSpec};
