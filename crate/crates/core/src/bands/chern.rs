use std::ops::Range;

use nalgebra::DMatrix;
use rand::{RngExt, SeedableRng};
use rand_pcg::Pcg64;
use rayon::prelude::*;

use crate::bands::BlochGrid;
use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{cabs, carg, cis, Real, C};

/// Eigen-decomposition of a Hamiltonian field at every grid point.
#[derive(Debug, Clone)]
pub struct EigenGrid<T: Real> {
    grid: BlochGrid,
    energies: Vec<Vec<T>>,
    vectors: Vec<DMatrix<C<T>>>,
}

fn normalized<T: Real>(z: C<T>) -> C<T> {
    let a = cabs(z);
    if a > T::zero() {
        z / a
    } else {
        C::new(T::one(), T::zero())
    }
}

impl<T: Real> EigenGrid<T> {
    /// `field(i_k, i_t)` is evaluated in parallel over the grid.
    pub fn compute<F>(grid: BlochGrid, field: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> DMatrix<C<T>> + Sync,
    {
        let pts: Vec<Result<(Vec<T>, DMatrix<C<T>>)>> = (0..grid.len())
            .into_par_iter()
            .map(|p| linalg::eigh(field(p / grid.n_t, p % grid.n_t)))
            .collect();
        let mut energies = Vec::with_capacity(grid.len());
        let mut vectors = Vec::with_capacity(grid.len());
        for r in pts {
            let (e, v) = r?;
            energies.push(e);
            vectors.push(v);
        }
        Ok(Self { grid, energies, vectors })
    }

    pub fn grid(&self) -> BlochGrid {
        self.grid
    }

    pub fn dim(&self) -> usize {
        self.energies[0].len()
    }

    /// Sorted eigenvalues at flat grid index `p`.
    pub fn energies(&self, p: usize) -> &[T] {
        &self.energies[p]
    }

    pub fn vectors(&self, p: usize) -> &DMatrix<C<T>> {
        &self.vectors[p]
    }

    pub fn max_abs_energy(&self) -> T {
        self.energies
            .iter()
            .flat_map(|e| e.iter())
            .fold(T::zero(), |m, &x| m.max(x.abs()))
    }

    /// Minimum over the grid of `E_{m+1} − E_m`.
    pub fn min_gap_above(&self, m: usize) -> T {
        self.energies
            .iter()
            .map(|e| e[m + 1] - e[m])
            .fold(T::max_value().unwrap(), |a, b| a.min(b))
    }

    /// Overlap determinant `det(V_p† V_q)` restricted to `bands`, normalized to a phase.
    pub fn link(&self, p: usize, q: usize, bands: Range<usize>) -> C<T> {
        self.link_and_overlap(p, q, bands).0
    }

    /// Mean subspace overlap `‖V_p† V_q‖_F² / g` in `[0, 1]`.
    pub fn subspace_overlap(&self, p: usize, q: usize, bands: Range<usize>) -> T {
        self.link_and_overlap(p, q, bands).1
    }

    /// Links to the `k` and `t` neighbours of every point, plus the smallest
    /// subspace overlap met along the way.
    pub fn links(&self, bands: Range<usize>) -> Links<T> {
        let g = self.grid;
        let per_point: Vec<(C<T>, C<T>, T)> = (0..g.len())
            .into_par_iter()
            .map(|p| {
                let (i, j) = (p / g.n_t, p % g.n_t);
                let (lk, ok) = self.link_and_overlap(p, g.index(i + 1, j), bands.clone());
                let (lt, ot) = self.link_and_overlap(p, g.index(i, j + 1), bands.clone());
                (lk, lt, ok.min(ot))
            })
            .collect();
        let min_overlap = per_point.iter().fold(T::one(), |m, x| m.min(x.2));
        Links {
            along_k: per_point.iter().map(|x| x.0).collect(),
            along_t: per_point.iter().map(|x| x.1).collect(),
            min_overlap,
        }
    }

    fn link_and_overlap(&self, p: usize, q: usize, bands: Range<usize>) -> (C<T>, T) {
        let g = bands.len();
        let a = self.vectors[p].columns(bands.start, g);
        let b = self.vectors[q].columns(bands.start, g);
        let m = a.adjoint() * b;
        let overlap = m.iter().fold(T::zero(), |s, &z| s + z.norm_sqr()) / T::of_usize(g);
        let det = if g == 1 { m[(0, 0)] } else { m.determinant() };
        (normalized(det), overlap)
    }

    /// Berry phase of every plaquette (`i_k`-major), in `(−π, π]`.
    ///
    /// The loop runs `k → k+1` first, then `t → t+1`, i.e. counterclockwise
    /// in the `(k, t)` plane.
    pub fn curvature(&self, bands: Range<usize>) -> Vec<T> {
        self.links(bands).curvature(self.grid)
    }

    /// Plaquette-sum Chern number of the band group `bands`.
    pub fn chern(&self, bands: Range<usize>) -> i64 {
        chern_of(&self.curvature(bands))
    }

    /// Copy with every eigenvector multiplied by an independent random phase.
    pub fn with_random_gauge(&self, seed: u64) -> Self {
        let mut rng = Pcg64::seed_from_u64(seed);
        let mut out = self.clone();
        for v in &mut out.vectors {
            for mut col in v.column_iter_mut() {
                let ph = cis(T::of(rng.random_range(0.0..std::f64::consts::TAU)));
                col *= ph;
            }
        }
        out
    }

    /// Errors with `GapClosure` if band `m` touches a neighbour anywhere on the grid.
    pub fn check_isolated(&self, m: usize, tol: T) -> Result<()> {
        let check = |lower: usize| -> Result<()> {
            let gap = self.min_gap_above(lower);
            if gap < tol {
                Err(Error::GapClosure { lower, upper: lower + 1, gap: gap.as_f64(), tol: tol.as_f64() })
            } else {
                Ok(())
            }
        };
        if m > 0 {
            check(m - 1)?;
        }
        if m + 1 < self.dim() {
            check(m)?;
        }
        Ok(())
    }
}

/// Normalized overlap phases between neighbouring grid points.
#[derive(Debug, Clone)]
pub struct Links<T> {
    pub along_k: Vec<C<T>>,
    pub along_t: Vec<C<T>>,
    pub min_overlap: T,
}

impl<T: Real> Links<T> {
    pub fn curvature(&self, g: BlochGrid) -> Vec<T> {
        (0..g.len())
            .map(|p| {
                let (i, j) = (p / g.n_t, p % g.n_t);
                let loop_ = self.along_k[p]
                    * self.along_t[g.index(i + 1, j)]
                    * self.along_k[g.index(i, j + 1)].conj()
                    * self.along_t[p].conj();
                carg(loop_)
            })
            .collect()
    }
}

pub(crate) fn chern_of<T: Real>(curvature: &[T]) -> i64 {
    let total = curvature.iter().fold(T::zero(), |s, &x| s + x);
    (total / T::two_pi()).round().as_f64() as i64
}

/// Energies, curvature and Chern numbers of every band of a field.
#[derive(Debug, Clone)]
pub struct BandResult<T> {
    pub grid: BlochGrid,
    /// `energies[p][m]` at flat grid index `p`.
    pub energies: Vec<Vec<T>>,
    /// `curvature[m][p]`: Berry phase of the plaquette with lower-left corner `p`.
    pub curvature: Vec<Vec<T>>,
    pub chern: Vec<i64>,
    pub gap_min: T,
}

/// Default gap tolerance relative to the largest `|E|` on the grid.
pub const GAP_TOL_REL: f64 = 1e-6;

/// Full band structure of a field with every band required to be isolated.
pub fn band_structure<T, F>(grid: BlochGrid, field: F, gap_tol_rel: T) -> Result<BandResult<T>>
where
    T: Real,
    F: Fn(usize, usize) -> DMatrix<C<T>> + Sync,
{
    let eg = EigenGrid::compute(grid, field)?;
    band_result(&eg, gap_tol_rel)
}

pub fn band_result<T: Real>(eg: &EigenGrid<T>, gap_tol_rel: T) -> Result<BandResult<T>> {
    let tol = gap_tol_rel * eg.max_abs_energy();
    let n = eg.dim();
    let mut gap_min = T::max_value().unwrap();
    for m in 0..n.saturating_sub(1) {
        gap_min = gap_min.min(eg.min_gap_above(m));
    }
    for m in 0..n {
        eg.check_isolated(m, tol)?;
    }
    let curvature: Vec<Vec<T>> = (0..n).map(|m| eg.curvature(m..m + 1)).collect();
    let chern = curvature.iter().map(|c| chern_of(c)).collect();
    Ok(BandResult { grid: eg.grid(), energies: eg.energies.clone(), curvature, chern, gap_min })
}

/// Chern number of band `band_index` of `field(k_index, t_index)`.
pub fn chern_number<T, F>(grid: BlochGrid, field: F, band_index: usize) -> Result<i64>
where
    T: Real,
    F: Fn(usize, usize) -> DMatrix<C<T>> + Sync,
{
    let eg = EigenGrid::compute(grid, field)?;
    if band_index >= eg.dim() {
        return Err(Error::InvalidArgument(format!("band {band_index} of {}", eg.dim())));
    }
    let tol = T::of(GAP_TOL_REL) * eg.max_abs_energy();
    eg.check_isolated(band_index, tol)?;
    Ok(eg.chern(band_index..band_index + 1))
}
