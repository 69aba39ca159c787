use nalgebra::DMatrix;

use crate::model::DriveProtocol;
use crate::scalar::{cis, cr, Real, C};

/// Two-band Bloch Hamiltonian of the unit cell (A = odd site, B = even site)
/// at momentum `k` and time `t`:
///
/// ```text
/// H = [[ −Δ(t),                 (−J−δ) + (−J+δ)e^{−ikd} ],
///      [ h.c.,                   +Δ(t)                  ]]
/// ```
///
/// Disorder is ignored (it breaks translation symmetry); the offset `Δ_r` is kept.
pub fn bloch_hamiltonian_single<T: Real>(k: T, t: T, drive: &DriveProtocol<T>) -> DMatrix<C<T>> {
    bloch_hamiltonian_with_d(k, t, drive, T::one())
}

pub fn bloch_hamiltonian_with_d<T: Real>(k: T, t: T, drive: &DriveProtocol<T>, d: T) -> DMatrix<C<T>> {
    let (capdelta, smalldelta) = drive.uniform_at(t);
    let j = drive.j_hop;
    let off = cr(-j - smalldelta) + cis(-k * d) * (-j + smalldelta);
    DMatrix::from_row_slice(2, 2, &[cr(-capdelta), off, off.conj(), cr(capdelta)])
}
