//! Center-of-mass bands of a few bosons on a twisted ring.
//!
//! A ring of `L` cells is threaded by a flux: the closing bond carries
//! `e^{iθ}`. Since the twist couples to every particle, the `(θ, t)` Chern
//! number of a band group counts transported particles; dividing by `N_p`
//! gives the center-of-mass invariant.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::bands::{chern_of, BlochGrid, EigenGrid};
use crate::error::{Error, Result};
use crate::model::{build_fock_basis, Boundary, FockBasis, LatticeSpec, ManyBodyTemplate};
use crate::model::{DriveParams, DriveProtocol};
use crate::scalar::{Real, C};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BandLabel {
    BoundState,
    Scattering,
    ResonantIsolated,
}

#[derive(Debug, Clone, Copy)]
pub struct ComBandOptions<T> {
    /// Two neighbouring levels belong to different groups when their minimum
    /// gap exceeds this fraction of `max|E|`.
    pub group_split_rel: T,
    /// Minimum mean subspace overlap between neighbouring grid points.
    pub min_overlap: T,
    /// Doublon weight at or above which a group is a bound-state band.
    pub bound_weight: T,
    /// Doublon weight floor and doublon+pair weight floor for a resonant band.
    pub resonant_doublon: T,
    pub resonant_total: T,
}

impl<T: Real> Default for ComBandOptions<T> {
    fn default() -> Self {
        Self {
            group_split_rel: T::of(1e-3),
            min_overlap: T::of(0.5),
            bound_weight: T::of(0.8),
            resonant_doublon: T::of(0.2),
            resonant_total: T::of(0.8),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ComBand<T> {
    /// Indices into the energy-sorted ring spectrum.
    pub levels: Range<usize>,
    pub ring_chern: i64,
    /// `ring_chern / N_p`.
    pub com_chern: f64,
    pub label: BandLabel,
    /// Mean weight on states with a doubly occupied site.
    pub doublon_weight: T,
    /// Mean weight on states with two neighbouring singly occupied sites.
    pub pair_weight: T,
    pub mean_energy: T,
    pub min_overlap: T,
    /// `curvature[p]` per plaquette, summed over the group.
    pub curvature: Vec<T>,
}

#[derive(Debug, Clone)]
pub struct ComBandResult<T> {
    pub grid: BlochGrid,
    pub n_cells: usize,
    pub n_particles: usize,
    /// `energies[p][level]` at flat grid index `p` (`θ`-major).
    pub energies: Vec<Vec<T>>,
    pub bands: Vec<ComBand<T>>,
    /// Smallest inter-group gap over the grid.
    pub gap_min: T,
}

impl<T: Real> ComBandResult<T> {
    pub fn chern(&self) -> Vec<f64> {
        self.bands.iter().map(|b| b.com_chern).collect()
    }

    pub fn labelled(&self, label: BandLabel) -> impl Iterator<Item = &ComBand<T>> {
        self.bands.iter().filter(move |b| b.label == label)
    }
}

/// Ring of `2 n_cells` sites with the lattice's local dimension, uniform
/// interaction and cell parity.
pub fn ring_spec<T: Real>(spec: &LatticeSpec<T>, n_cells: usize) -> Result<LatticeSpec<T>> {
    let u = spec.interaction()[0];
    if spec.interaction().iter().any(|&x| x != u) {
        return Err(Error::InvalidArgument("center-of-mass bands need a uniform interaction".into()));
    }
    if n_cells < 2 {
        return Err(Error::InvalidArgument("ring needs at least 2 cells".into()));
    }
    let origin = if spec.origin() % 2 == 1 { 1 } else { 2 };
    LatticeSpec::from_parts(
        2 * n_cells,
        spec.local_dim(),
        spec.lattice_constant(),
        vec![u; 2 * n_cells],
        Boundary::Periodic,
        origin,
    )
}

fn class_weights<T: Real>(basis: &FockBasis) -> (Vec<T>, Vec<T>) {
    let n = basis.n_sites();
    let mut doublon = Vec::with_capacity(basis.dim());
    let mut pair = Vec::with_capacity(basis.dim());
    for s in basis.states() {
        let d = s.iter().any(|&x| x >= 2);
        let p = (0..n).any(|j| s[j] == 1 && s[(j + 1) % n] == 1);
        doublon.push(if d { T::one() } else { T::zero() });
        pair.push(if p { T::one() } else { T::zero() });
    }
    (doublon, pair)
}

pub fn com_band_structure<T: Real>(
    spec: &LatticeSpec<T>,
    drive: &DriveProtocol<T>,
    n_particles: usize,
    n_cells_ring: usize,
    grid: BlochGrid,
) -> Result<ComBandResult<T>> {
    com_band_structure_with(spec, drive, n_particles, n_cells_ring, grid, &ComBandOptions::default())
}

pub fn com_band_structure_with<T: Real>(
    spec: &LatticeSpec<T>,
    drive: &DriveProtocol<T>,
    n_particles: usize,
    n_cells_ring: usize,
    grid: BlochGrid,
    opts: &ComBandOptions<T>,
) -> Result<ComBandResult<T>> {
    drive.validate()?;
    if n_particles == 0 {
        return Err(Error::InvalidArgument("need at least one particle".into()));
    }
    let ring = ring_spec(spec, n_cells_ring)?;
    let basis = build_fock_basis(&ring, n_particles)?;
    let tpl = ManyBodyTemplate::new(&ring, &basis)?;
    let n_sites = ring.n_sites();
    let eg = EigenGrid::compute(grid, |i, j| {
        let theta = grid.k(i, T::one()) + T::pi();
        let (capdelta, smalldelta) = drive.uniform_at(grid.t(j, drive.period));
        let params = DriveParams { capdelta: vec![capdelta; n_sites], smalldelta };
        tpl.hamiltonian(&params, drive.j_hop, Some(theta)).to_dense()
    })?;

    let dim = eg.dim();
    let scale = eg.max_abs_energy();
    let mut edges = vec![0];
    let mut gap_min = T::max_value().unwrap();
    for m in 0..dim - 1 {
        let gap = eg.min_gap_above(m);
        if gap > opts.group_split_rel * scale {
            edges.push(m + 1);
            gap_min = gap_min.min(gap);
        }
    }
    edges.push(dim);

    let (doublon, pair) = class_weights::<T>(&basis);
    let npts = T::of_usize(grid.len());
    let mut bands = Vec::new();
    for (gi, w) in edges.windows(2).enumerate() {
        let levels = w[0]..w[1];
        let links = eg.links(levels.clone());
        if links.min_overlap < opts.min_overlap {
            return Err(Error::ContinuityFailure { group: gi, overlap: links.min_overlap.as_f64() });
        }
        let curvature = links.curvature(grid);
        let ring_chern = chern_of(&curvature);

        let g = T::of_usize(levels.len());
        let (mut wd, mut wp, mut e) = (T::zero(), T::zero(), T::zero());
        for p in 0..grid.len() {
            let v = eg.vectors(p);
            for c in levels.clone() {
                e += eg.energies(p)[c];
                for a in 0..dim {
                    let prob = v[(a, c)].norm_sqr();
                    wd += prob * doublon[a];
                    wp += prob * pair[a];
                }
            }
        }
        let norm = npts * g;
        let (wd, wp) = (wd / norm, wp / norm);
        let label = if wd >= opts.bound_weight {
            BandLabel::BoundState
        } else if wd >= opts.resonant_doublon && wd + wp >= opts.resonant_total {
            BandLabel::ResonantIsolated
        } else {
            BandLabel::Scattering
        };
        bands.push(ComBand {
            levels,
            ring_chern,
            com_chern: ring_chern as f64 / n_particles as f64,
            label,
            doublon_weight: wd,
            pair_weight: wp,
            mean_energy: e / norm,
            min_overlap: links.min_overlap,
            curvature,
        });
    }
    let energies = (0..grid.len()).map(|p| eg.energies(p).to_vec()).collect();
    Ok(ComBandResult { grid, n_cells: n_cells_ring, n_particles, energies, bands, gap_min })
}

/// Dense twisted-ring Hamiltonian at a single `(θ, t)`.
pub fn twisted_ring_hamiltonian<T: Real>(
    spec: &LatticeSpec<T>,
    drive: &DriveProtocol<T>,
    n_particles: usize,
    n_cells: usize,
    theta: T,
    t: T,
) -> Result<nalgebra::DMatrix<C<T>>> {
    let ring = ring_spec(spec, n_cells)?;
    let basis = build_fock_basis(&ring, n_particles)?;
    let tpl = ManyBodyTemplate::new(&ring, &basis)?;
    let (capdelta, smalldelta) = drive.uniform_at(t);
    let params = DriveParams { capdelta: vec![capdelta; ring.n_sites()], smalldelta };
    Ok(tpl.hamiltonian(&params, drive.j_hop, Some(theta)).to_dense())
}
