//! Instantaneous Bloch bands, Berry curvature and Chern numbers.

mod bloch;
mod chern;
mod com;
mod effective;
mod grid;
mod single;

pub use bloch::{bloch_hamiltonian_single, bloch_hamiltonian_with_d};
pub(crate) use chern::chern_of;
pub use chern::{band_result, band_structure, chern_number, BandResult, EigenGrid, Links, GAP_TOL_REL};
pub use com::{
    com_band_structure, com_band_structure_with, ring_spec, twisted_ring_hamiltonian, BandLabel, ComBand,
    ComBandOptions, ComBandResult,
};
pub use effective::{effective_basis_states, effective_subspace_hamiltonian};
pub use grid::BlochGrid;
pub use single::rice_mele_bands;
