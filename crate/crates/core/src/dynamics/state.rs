use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg;
use crate::model::FockBasis;
use crate::scalar::{cr, Real, C};

/// Pure state over a Fock basis.
#[derive(Debug, Clone)]
pub struct QuantumState<T: Real> {
    amplitudes: DVector<C<T>>,
    basis: Arc<FockBasis>,
}

impl<T: Real> QuantumState<T> {
    pub fn new(basis: Arc<FockBasis>, amplitudes: DVector<C<T>>) -> Result<Self> {
        if amplitudes.len() != basis.dim() {
            return Err(Error::InvalidState(format!(
                "{} amplitudes for basis of dimension {}",
                amplitudes.len(),
                basis.dim()
            )));
        }
        Ok(Self { amplitudes, basis })
    }

    /// Unit vector on the basis state with the given occupations.
    pub fn from_occupation(basis: Arc<FockBasis>, occ: &[u8]) -> Result<Self> {
        let i = basis
            .index_of(occ)
            .ok_or_else(|| Error::InvalidState(format!("occupation {occ:?} not in basis")))?;
        let mut amps = DVector::zeros(basis.dim());
        amps[i] = cr(T::one());
        Ok(Self { amplitudes: amps, basis })
    }

    /// Normalized superposition of occupation states with the given weights.
    pub fn superposition(basis: Arc<FockBasis>, terms: &[(&[u8], C<T>)]) -> Result<Self> {
        let mut amps = DVector::zeros(basis.dim());
        for (occ, w) in terms {
            let i = basis
                .index_of(occ)
                .ok_or_else(|| Error::InvalidState(format!("occupation {occ:?} not in basis")))?;
            amps[i] += *w;
        }
        let n = amps.norm();
        if n == T::zero() {
            return Err(Error::InvalidState("zero superposition".into()));
        }
        amps.unscale_mut(n);
        Ok(Self { amplitudes: amps, basis })
    }

    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    pub fn amplitudes(&self) -> &DVector<C<T>> {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut DVector<C<T>> {
        &mut self.amplitudes
    }

    pub fn norm(&self) -> T {
        self.amplitudes.norm()
    }

    pub fn overlap(&self, other: &Self) -> C<T> {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &Self) -> T {
        self.overlap(other).norm_sqr()
    }
}

/// Single-site excitation `|n_j = occupancy⟩` (site index 1-based).
pub fn prepare_site_excitation<T: Real>(basis: &Arc<FockBasis>, site: usize, occupancy: u8) -> Result<QuantumState<T>> {
    let n = basis.n_sites();
    if site == 0 || site > n {
        return Err(Error::SiteOutOfRange { site, n_sites: n });
    }
    if occupancy as usize >= basis.local_dim() {
        return Err(Error::InvalidState(format!(
            "occupancy {occupancy} needs local_dim > {occupancy}, have {}",
            basis.local_dim()
        )));
    }
    let mut occ = vec![0u8; n];
    occ[site - 1] = occupancy;
    if basis.index_of(&occ).is_none() {
        return Err(Error::InvalidState(format!(
            "basis does not contain {occupancy} particle(s)"
        )));
    }
    QuantumState::from_occupation(basis.clone(), &occ)
}

/// Density matrix over a Fock basis (typically a direct sum of sectors).
#[derive(Debug, Clone)]
pub struct DensityMatrix<T: Real> {
    matrix: DMatrix<C<T>>,
    basis: Arc<FockBasis>,
}

impl<T: Real> DensityMatrix<T> {
    pub fn new(basis: Arc<FockBasis>, matrix: DMatrix<C<T>>) -> Result<Self> {
        if matrix.nrows() != basis.dim() || matrix.ncols() != basis.dim() {
            return Err(Error::InvalidState("density matrix shape does not match basis".into()));
        }
        Ok(Self { matrix, basis })
    }

    /// `|ψ⟩⟨ψ|` embedded into `basis` by matching occupation vectors.
    pub fn from_state(psi: &QuantumState<T>, basis: Arc<FockBasis>) -> Result<Self> {
        if psi.basis().n_sites() != basis.n_sites() {
            return Err(Error::InvalidState("site counts differ".into()));
        }
        let mut v = DVector::zeros(basis.dim());
        for (i, occ) in psi.basis().states().iter().enumerate() {
            let a = psi.amplitudes()[i];
            if a.norm_sqr() == T::zero() {
                continue;
            }
            let j = basis
                .index_of(occ)
                .ok_or_else(|| Error::InvalidState(format!("occupation {occ:?} not in target basis")))?;
            v[j] = a;
        }
        let matrix = &v * v.adjoint();
        Ok(Self { matrix, basis })
    }

    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    pub fn matrix(&self) -> &DMatrix<C<T>> {
        &self.matrix
    }

    pub(crate) fn matrix_mut(&mut self) -> &mut DMatrix<C<T>> {
        &mut self.matrix
    }

    pub fn trace(&self) -> T {
        self.matrix.diagonal().iter().fold(T::zero(), |s, z| s + z.re)
    }

    pub fn min_eigenvalue(&self) -> Result<T> {
        let herm = (&self.matrix + self.matrix.adjoint()) * cr(T::of(0.5));
        Ok(linalg::eigvalsh(herm)?[0])
    }

    /// `⟨ψ|ρ|ψ⟩` for a state on the same site count.
    pub fn expectation_of_state(&self, psi: &QuantumState<T>) -> Result<T> {
        let other = DensityMatrix::from_state(psi, self.basis.clone())?;
        Ok(self.overlap(&other))
    }

    /// `Tr(ρ σ)`.
    pub fn overlap(&self, other: &Self) -> T {
        self.matrix
            .iter()
            .zip(other.matrix.transpose().iter())
            .fold(T::zero(), |s, (a, b)| s + (*a * *b).re)
    }
}
