use nalgebra_sparse::{CooMatrix, CsrMatrix};

use crate::error::{Error, Result};
use crate::model::{Boundary, HamiltonianMatrix, LatticeSpec};
use crate::scalar::{cr, Real};

/// Occupation vectors of the effective basis `|2_1⟩, |1_1 1_2⟩, |2_2⟩, …, |2_N⟩`.
pub fn effective_basis_states(n_sites: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::with_capacity(2 * n_sites - 1);
    for j in 0..n_sites {
        let mut d = vec![0u8; n_sites];
        d[j] = 2;
        out.push(d);
        if j + 1 < n_sites {
            let mut p = vec![0u8; n_sites];
            p[j] = 1;
            p[j + 1] = 1;
            out.push(p);
        }
    }
    out
}

/// Two-particle Hamiltonian restricted to doublons and nearest-neighbour
/// pairs: `|2_j⟩ ↔ |1_j 1_{j+1}⟩ ↔ |2_{j+1}⟩` couple with `√2[−J + (−1)^j δ]`,
/// doublons sit at `2(−1)^j Δ + U_j`, pairs at 0.
pub fn effective_subspace_hamiltonian<T: Real>(
    spec: &LatticeSpec<T>,
    delta: T,
    smalldelta: T,
    j_hop: T,
) -> Result<HamiltonianMatrix<T>> {
    if spec.boundary() != Boundary::Open {
        return Err(Error::InvalidArgument("effective subspace model needs an open chain".into()));
    }
    if spec.local_dim() < 3 {
        return Err(Error::InvalidArgument("effective subspace model needs local_dim 3".into()));
    }
    let n = spec.n_sites();
    let dim = 2 * n - 1;
    let two = T::of(2.0);
    let sqrt2 = two.sqrt();
    let mut coo = CooMatrix::new(dim, dim);
    for j in 0..n {
        let d = 2 * j;
        coo.push(d, d, cr(two * spec.parity(j) * delta + spec.interaction()[j]));
        if j + 1 < n {
            let p = d + 1;
            let g = cr(sqrt2 * (-j_hop + spec.parity(j) * smalldelta));
            coo.push(p, p, cr(T::zero()));
            for other in [d, d + 2] {
                coo.push(p, other, g);
                coo.push(other, p, g);
            }
        }
    }
    Ok(HamiltonianMatrix::from_csr(CsrMatrix::from(&coo)))
}
