use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    Open,
    Periodic,
}

/// Static lattice description.
///
/// Sites are numbered `1..=n_sites` internally. `origin` is the original
/// (full-chain) index of internal site 1; staggered signs use the original
/// parity so a subset chain sees the same pattern as the full device.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSpec<T> {
    n_sites: usize,
    local_dim: usize,
    lattice_constant: T,
    interaction: Vec<T>,
    boundary: Boundary,
    origin: usize,
}

impl<T: Real> LatticeSpec<T> {
    /// Open chain with uniform interaction `u` (rad/µs), `d = 1`, origin 1.
    pub fn new(n_sites: usize, local_dim: usize, u: T) -> Result<Self> {
        Self::from_parts(n_sites, local_dim, T::one(), vec![u; n_sites], Boundary::Open, 1)
    }

    pub fn from_parts(
        n_sites: usize,
        local_dim: usize,
        lattice_constant: T,
        interaction: Vec<T>,
        boundary: Boundary,
        origin: usize,
    ) -> Result<Self> {
        let spec = Self { n_sites, local_dim, lattice_constant, interaction, boundary, origin };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Result<Self> {
        self.boundary = boundary;
        self.validate()?;
        Ok(self)
    }

    pub fn with_origin(mut self, origin: usize) -> Result<Self> {
        self.origin = origin;
        self.validate()?;
        Ok(self)
    }

    pub fn with_interaction(mut self, interaction: Vec<T>) -> Result<Self> {
        self.interaction = interaction;
        self.validate()?;
        Ok(self)
    }

    pub fn with_lattice_constant(mut self, d: T) -> Result<Self> {
        self.lattice_constant = d;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidLattice(m));
        if self.n_sites < 2 {
            return bad(format!("need at least 2 sites, got {}", self.n_sites));
        }
        if !(2..=3).contains(&self.local_dim) {
            return bad(format!("local_dim must be 2 or 3, got {}", self.local_dim));
        }
        if self.boundary == Boundary::Periodic && self.n_sites % 2 != 0 {
            return bad(format!("periodic ring needs an even site count, got {}", self.n_sites));
        }
        if self.interaction.len() != self.n_sites {
            return bad(format!(
                "interaction list has {} entries for {} sites",
                self.interaction.len(),
                self.n_sites
            ));
        }
        if self.interaction.iter().any(|u| !u.is_finite()) {
            return bad("interaction must be finite".into());
        }
        if !(self.lattice_constant.is_finite() && self.lattice_constant > T::zero()) {
            return bad("lattice constant must be positive".into());
        }
        if self.origin == 0 {
            return bad("origin index is 1-based".into());
        }
        Ok(())
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn lattice_constant(&self) -> T {
        self.lattice_constant
    }

    pub fn interaction(&self) -> &[T] {
        &self.interaction
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn origin(&self) -> usize {
        self.origin
    }

    /// Original index of internal site `i` (0-based).
    pub fn original_index(&self, i: usize) -> usize {
        self.origin + i
    }

    /// `(-1)^j` for internal site `i` (0-based), `j` its original index.
    pub fn parity(&self, i: usize) -> T {
        if self.original_index(i) % 2 == 0 {
            T::one()
        } else {
            -T::one()
        }
    }

    /// Bonds as `(left, right)` 0-based site pairs; bond `b` carries the parity of site `b`.
    /// On a ring the last bond closes `(N-1, 0)`.
    pub fn bonds(&self) -> Vec<(usize, usize)> {
        let mut b: Vec<_> = (0..self.n_sites - 1).map(|i| (i, i + 1)).collect();
        if self.boundary == Boundary::Periodic {
            b.push((self.n_sites - 1, 0));
        }
        b
    }

    /// Largest particle number that fits.
    pub fn max_particles(&self) -> usize {
        (self.local_dim - 1) * self.n_sites
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_specs() {
        assert!(LatticeSpec::<f64>::new(1, 3, 0.0).is_err());
        assert!(LatticeSpec::<f64>::new(4, 4, 0.0).is_err());
        assert!(LatticeSpec::<f64>::new(5, 3, 0.0).unwrap().with_boundary(Boundary::Periodic).is_err());
        assert!(LatticeSpec::<f64>::new(4, 3, f64::NAN).is_err());
        assert!(LatticeSpec::<f64>::new(4, 3, 0.0).unwrap().with_interaction(vec![0.0; 3]).is_err());
    }

    #[test]
    fn parity_follows_original_index() {
        let s = LatticeSpec::<f64>::new(4, 3, 0.0).unwrap();
        assert_eq!(s.parity(0), -1.0);
        let s = s.with_origin(18).unwrap();
        assert_eq!(s.parity(0), 1.0);
        assert_eq!(s.parity(1), -1.0);
    }

    #[test]
    fn ring_bonds_close() {
        let s = LatticeSpec::<f64>::new(4, 2, 0.0).unwrap().with_boundary(Boundary::Periodic).unwrap();
        assert_eq!(s.bonds().last(), Some(&(3, 0)));
        assert_eq!(s.bonds().len(), 4);
    }
}
