use crate::bands::{band_structure, bloch_hamiltonian_with_d, BandResult, BlochGrid, GAP_TOL_REL};
use crate::error::Result;
use crate::model::DriveProtocol;
use crate::scalar::Real;

/// Rice-Mele two-band structure over one pump cycle (cell length `d = 1`).
pub fn rice_mele_bands<T: Real>(drive: &DriveProtocol<T>, grid: BlochGrid) -> Result<BandResult<T>> {
    drive.validate()?;
    let d = T::one();
    band_structure(
        grid,
        |i, j| bloch_hamiltonian_with_d(grid.k(i, d), grid.t(j, drive.period), drive, d),
        T::of(GAP_TOL_REL),
    )
}
