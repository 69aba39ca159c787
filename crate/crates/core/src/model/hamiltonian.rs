use nalgebra::{DMatrix, DVector};
use nalgebra_sparse::{CooMatrix, CsrMatrix};

use crate::error::{Error, Result};
use crate::linalg;
use crate::model::{Boundary, DriveParams, DriveProtocol, DriveSchedule, FockBasis, LatticeSpec};
use crate::scalar::{cabs, cis, cr, Real, C};

/// Hermitian Hamiltonian in compressed sparse row form.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianMatrix<T> {
    matrix: CsrMatrix<C<T>>,
}

impl<T: Real> HamiltonianMatrix<T> {
    pub fn from_csr(matrix: CsrMatrix<C<T>>) -> Self {
        Self { matrix }
    }

    pub fn from_dense(m: &DMatrix<C<T>>) -> Self {
        let mut coo = CooMatrix::new(m.nrows(), m.ncols());
        for c in 0..m.ncols() {
            for r in 0..m.nrows() {
                let v = m[(r, c)];
                if v.re != T::zero() || v.im != T::zero() {
                    coo.push(r, c, v);
                }
            }
        }
        Self { matrix: CsrMatrix::from(&coo) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn csr(&self) -> &CsrMatrix<C<T>> {
        &self.matrix
    }

    pub fn to_dense(&self) -> DMatrix<C<T>> {
        linalg::csr_to_dense(&self.matrix)
    }

    pub fn get(&self, r: usize, c: usize) -> C<T> {
        self.matrix
            .get_entry(r, c)
            .map(|e| e.into_value())
            .unwrap_or_else(|| cr(T::zero()))
    }

    /// Max absolute row sum (bounds every eigenvalue in magnitude).
    pub fn norm_inf(&self) -> T {
        linalg::csr_norm_inf(&self.matrix)
    }

    pub fn max_abs(&self) -> T {
        self.matrix.values().iter().fold(T::zero(), |m, &z| m.max(cabs(z)))
    }

    /// `max|H − H†| / max|H|` (0 for the zero matrix).
    pub fn hermiticity_error(&self) -> T {
        let scale = self.max_abs();
        if scale == T::zero() {
            return T::zero();
        }
        let mut worst = T::zero();
        for (r, c, v) in self.matrix.triplet_iter() {
            worst = worst.max(cabs(*v - self.get(c, r).conj()));
        }
        worst / scale
    }

    pub fn apply(&self, x: &DVector<C<T>>) -> DVector<C<T>> {
        let mut out = DVector::zeros(self.dim());
        linalg::csr_mul_vec(&self.matrix, x, &mut out);
        out
    }

    /// `c·H`; with `c = −1` this is the generator of backward evolution.
    pub fn scaled(&self, c: T) -> Self {
        let mut m = self.matrix.clone();
        m.values_mut().iter_mut().for_each(|v| *v *= c);
        Self { matrix: m }
    }

    pub fn eigenvalues(&self) -> Result<Vec<T>> {
        linalg::eigvalsh(self.to_dense())
    }

    pub fn eigh(&self) -> Result<(Vec<T>, DMatrix<C<T>>)> {
        linalg::eigh(self.to_dense())
    }
}

/// Hopping `−J + (−1)^j δ` for every bond of the lattice.
pub fn bond_hoppings<T: Real>(spec: &LatticeSpec<T>, smalldelta: T, j_hop: T) -> Vec<T> {
    spec.bonds()
        .iter()
        .map(|&(l, _)| -j_hop + spec.parity(l) * smalldelta)
        .collect()
}

/// Staggered on-site energies `(−1)^j Δ_j`.
pub fn site_energies<T: Real>(spec: &LatticeSpec<T>, capdelta: &[T]) -> Vec<T> {
    capdelta.iter().enumerate().map(|(i, &d)| spec.parity(i) * d).collect()
}

/// Single-particle (Wannier-basis) matrix: diagonal `(−1)^j Δ`, bond
/// `(j, j+1)` carrying `−J + (−1)^j δ`.
pub fn build_single_particle_hamiltonian<T: Real>(
    spec: &LatticeSpec<T>,
    delta: T,
    smalldelta: T,
    j_hop: T,
) -> HamiltonianMatrix<T> {
    let n = spec.n_sites();
    let hops = bond_hoppings(spec, smalldelta, j_hop);
    let mut coo = CooMatrix::new(n, n);
    for i in 0..n {
        coo.push(i, i, cr(spec.parity(i) * delta));
    }
    for (&(l, r), &t) in spec.bonds().iter().zip(&hops) {
        coo.push(l, r, cr(t));
        coo.push(r, l, cr(t));
    }
    HamiltonianMatrix::from_csr(CsrMatrix::from(&coo))
}

/// Precomputed sparsity pattern and matrix-element lists of the many-body
/// Hamiltonian on a fixed basis; assembling a new instant only rewrites values.
#[derive(Debug, Clone)]
pub struct ManyBodyTemplate<T> {
    spec: LatticeSpec<T>,
    pattern: CsrMatrix<C<T>>,
    /// Per basis state: slot of the diagonal entry.
    diag_slot: Vec<usize>,
    /// Per basis state: occupation of each site.
    occupation: Vec<Vec<T>>,
    /// Per basis state: `Σ_j U_j/2 n_j(n_j−1)`.
    interaction: Vec<T>,
    /// Per bond: `(slot of ⟨b|a†_l a_r|a⟩, slot of its transpose, amplitude)`.
    hops: Vec<Vec<(usize, usize, T)>>,
}

fn slot<T>(m: &CsrMatrix<T>, r: usize, c: usize) -> usize {
    let offs = m.row_offsets();
    let cols = &m.col_indices()[offs[r]..offs[r + 1]];
    offs[r] + cols.binary_search(&c).expect("entry in pattern")
}

impl<T: Real> ManyBodyTemplate<T> {
    pub fn new(spec: &LatticeSpec<T>, basis: &FockBasis) -> Result<Self> {
        if !basis.matches(spec) {
            return Err(Error::InvalidArgument("basis was not built from this lattice".into()));
        }
        let dim = basis.dim();
        let bonds = spec.bonds();
        let top = (spec.local_dim() - 1) as u8;
        let mut raw: Vec<Vec<(usize, usize, T)>> = vec![Vec::new(); bonds.len()];
        let mut coo = CooMatrix::new(dim, dim);
        let mut occupation = Vec::with_capacity(dim);
        let mut interaction = Vec::with_capacity(dim);
        let half = T::of(0.5);
        for (a, s) in basis.states().iter().enumerate() {
            coo.push(a, a, cr(T::one()));
            occupation.push(s.iter().map(|&n| T::of(n as f64)).collect::<Vec<T>>());
            interaction.push(s.iter().zip(spec.interaction()).fold(T::zero(), |acc, (&n, &u)| {
                let n = T::of(n as f64);
                acc + half * u * n * (n - T::one())
            }));
            for (b, &(l, r)) in bonds.iter().enumerate() {
                if s[r] > 0 && s[l] < top {
                    let mut t = s.clone();
                    t[r] -= 1;
                    t[l] += 1;
                    let target = basis.index_of(&t).expect("number-conserving hop stays in basis");
                    let amp = T::of((s[r] as f64 * (s[l] as f64 + 1.0)).sqrt());
                    raw[b].push((target, a, amp));
                    coo.push(target, a, cr(T::one()));
                    coo.push(a, target, cr(T::one()));
                }
            }
        }
        let pattern = CsrMatrix::from(&coo);
        let diag_slot = (0..dim).map(|a| slot(&pattern, a, a)).collect();
        let hops = raw
            .into_iter()
            .map(|list| {
                list.into_iter()
                    .map(|(r, c, amp)| (slot(&pattern, r, c), slot(&pattern, c, r), amp))
                    .collect()
            })
            .collect();
        Ok(Self { spec: spec.clone(), pattern, diag_slot, occupation, interaction, hops })
    }

    pub fn spec(&self) -> &LatticeSpec<T> {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.diag_slot.len()
    }

    /// Generic assembly from staggered on-site energies and complex bond
    /// hoppings; the interaction diagonal is always added.
    pub fn assemble(&self, site_energy: &[T], bond_hop: &[C<T>]) -> HamiltonianMatrix<T> {
        let mut h = self.pattern.clone();
        self.assemble_into(site_energy, bond_hop, &mut h);
        HamiltonianMatrix::from_csr(h)
    }

    pub fn assemble_into(&self, site_energy: &[T], bond_hop: &[C<T>], h: &mut CsrMatrix<C<T>>) {
        assert_eq!(site_energy.len(), self.spec.n_sites());
        assert_eq!(bond_hop.len(), self.hops.len());
        let vals = h.values_mut();
        vals.iter_mut().for_each(|v| *v = cr(T::zero()));
        for (a, &s) in self.diag_slot.iter().enumerate() {
            let e = self.occupation[a]
                .iter()
                .zip(site_energy)
                .fold(self.interaction[a], |acc, (&n, &eps)| acc + n * eps);
            vals[s] += cr(e);
        }
        for (list, &t) in self.hops.iter().zip(bond_hop) {
            let tc = t.conj();
            for &(s, st, amp) in list {
                vals[s] += t * amp;
                vals[st] += tc * amp;
            }
        }
    }

    /// Hamiltonian at the given drive values, with an optional twist `e^{iθ}` on
    /// the closing bond of a ring.
    pub fn hamiltonian(&self, params: &DriveParams<T>, j_hop: T, twist: Option<T>) -> HamiltonianMatrix<T> {
        let eps = site_energies(&self.spec, &params.capdelta);
        let hop = self.hoppings(params.smalldelta, j_hop, twist);
        self.assemble(&eps, &hop)
    }

    pub fn hoppings(&self, smalldelta: T, j_hop: T, twist: Option<T>) -> Vec<C<T>> {
        let mut hop: Vec<C<T>> = bond_hoppings(&self.spec, smalldelta, j_hop).into_iter().map(cr).collect();
        if let (Some(theta), Boundary::Periodic) = (twist, self.spec.boundary()) {
            let last = hop.len() - 1;
            hop[last] *= cis(theta);
        }
        hop
    }

    /// Occupation of every site in basis state `a`.
    pub fn occupation(&self, a: usize) -> &[T] {
        &self.occupation[a]
    }
}

/// Time-dependent many-body Hamiltonian of a driven lattice, with the
/// disorder realization fixed at construction.
#[derive(Debug, Clone)]
pub struct DrivenHamiltonian<T: Real> {
    template: ManyBodyTemplate<T>,
    schedule: DriveSchedule<T>,
}

impl<T: Real> DrivenHamiltonian<T> {
    pub fn new(spec: &LatticeSpec<T>, basis: &FockBasis, drive: &DriveProtocol<T>) -> Result<Self> {
        drive.validate()?;
        Ok(Self { template: ManyBodyTemplate::new(spec, basis)?, schedule: drive.schedule(spec.n_sites()) })
    }

    pub fn at(&self, t: T) -> HamiltonianMatrix<T> {
        self.template.hamiltonian(&self.schedule.at(t), self.schedule.drive().j_hop, None)
    }

    pub fn template(&self) -> &ManyBodyTemplate<T> {
        &self.template
    }

    pub fn schedule(&self) -> &DriveSchedule<T> {
        &self.schedule
    }
}

/// Many-body Rice-Mele-Hubbard Hamiltonian on `basis` with per-site `Δ_j` (unstaggered), `δ`, `J`.
pub fn build_many_body_hamiltonian<T: Real>(
    spec: &LatticeSpec<T>,
    basis: &FockBasis,
    delta_t: &[T],
    smalldelta_t: T,
    j_hop: T,
) -> Result<HamiltonianMatrix<T>> {
    if delta_t.len() != spec.n_sites() {
        return Err(Error::InvalidArgument(format!(
            "{} on-site values for {} sites",
            delta_t.len(),
            spec.n_sites()
        )));
    }
    let tpl = ManyBodyTemplate::new(spec, basis)?;
    let params = DriveParams { capdelta: delta_t.to_vec(), smalldelta: smalldelta_t };
    Ok(tpl.hamiltonian(&params, j_hop, None))
}
