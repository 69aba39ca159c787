use std::collections::HashMap;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::model::LatticeSpec;
use crate::scalar::Real;

/// Occupation-number basis, one or more fixed-particle-number sectors.
///
/// Within a sector states are in descending lexicographic order of
/// `(n_1, …, n_N)`, e.g. `(2,0), (1,1), (0,2)`. Sectors are stacked by
/// increasing particle number.
#[derive(Debug, Clone, PartialEq)]
pub struct FockBasis {
    n_sites: usize,
    local_dim: usize,
    states: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
    sectors: Vec<(usize, Range<usize>)>,
}

fn enumerate(n_sites: usize, local_dim: usize, n: usize, out: &mut Vec<Vec<u8>>) {
    fn rec(prefix: &mut Vec<u8>, left: usize, n_sites: usize, top: usize, out: &mut Vec<Vec<u8>>) {
        let remaining = n_sites - prefix.len();
        if remaining == 0 {
            if left == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        if left > remaining * top {
            return;
        }
        for k in (0..=left.min(top)).rev() {
            prefix.push(k as u8);
            rec(prefix, left - k, n_sites, top, out);
            prefix.pop();
        }
    }
    rec(&mut Vec::with_capacity(n_sites), n, n_sites, local_dim - 1, out);
}

impl FockBasis {
    fn build(n_sites: usize, local_dim: usize, numbers: &[usize]) -> Self {
        let mut states = Vec::new();
        let mut sectors = Vec::new();
        for &n in numbers {
            let start = states.len();
            enumerate(n_sites, local_dim, n, &mut states);
            sectors.push((n, start..states.len()));
        }
        let index = states.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Self { n_sites, local_dim, states, index, sectors }
    }

    /// Direct sum of the sectors `0..=n_max`; used for open-system runs where
    /// relaxation removes particles.
    pub fn with_sectors_up_to<T: Real>(spec: &LatticeSpec<T>, n_max: usize) -> Result<Self> {
        if n_max > spec.max_particles() {
            return Err(Error::ParticleNumber { n: n_max, max: spec.max_particles() });
        }
        let numbers: Vec<usize> = (0..=n_max).collect();
        Ok(Self::build(spec.n_sites(), spec.local_dim(), &numbers))
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn states(&self) -> &[Vec<u8>] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &[u8] {
        &self.states[i]
    }

    pub fn index_of(&self, occ: &[u8]) -> Option<usize> {
        self.index.get(occ).copied()
    }

    /// `(particle number, index range)` for each sector.
    pub fn sectors(&self) -> &[(usize, Range<usize>)] {
        &self.sectors
    }

    /// Particle number of a single-sector basis; `None` for a sector sum.
    pub fn n_particles(&self) -> Option<usize> {
        match self.sectors.as_slice() {
            [(n, _)] => Some(*n),
            _ => None,
        }
    }

    pub fn particle_number(&self, i: usize) -> usize {
        self.states[i].iter().map(|&n| n as usize).sum()
    }

    pub(crate) fn matches<T: Real>(&self, spec: &LatticeSpec<T>) -> bool {
        self.n_sites == spec.n_sites() && self.local_dim == spec.local_dim()
    }
}

/// Fixed-particle-number basis.
pub fn build_fock_basis<T: Real>(spec: &LatticeSpec<T>, n_particles: usize) -> Result<FockBasis> {
    if n_particles > spec.max_particles() {
        return Err(Error::ParticleNumber { n: n_particles, max: spec.max_particles() });
    }
    Ok(FockBasis::build(spec.n_sites(), spec.local_dim(), &[n_particles]))
}
