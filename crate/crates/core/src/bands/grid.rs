use crate::error::{Error, Result};
use crate::scalar::Real;

/// Uniform `(k, t)` grid over one Brillouin zone `[−π/d, π/d)` and one period `[0, T)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlochGrid {
    pub n_k: usize,
    pub n_t: usize,
}

impl Default for BlochGrid {
    fn default() -> Self {
        Self { n_k: 64, n_t: 64 }
    }
}

impl BlochGrid {
    pub fn new(n_k: usize, n_t: usize) -> Result<Self> {
        if n_k < 8 || n_t < 8 {
            return Err(Error::InvalidGrid(format!("need n_k, n_t >= 8, got {n_k}x{n_t}")));
        }
        Ok(Self { n_k, n_t })
    }

    pub fn square(n: usize) -> Result<Self> {
        Self::new(n, n)
    }

    pub fn k<T: Real>(&self, i: usize, d: T) -> T {
        let pi = T::pi();
        -pi / d + T::two_pi() * T::of_usize(i) / (T::of_usize(self.n_k) * d)
    }

    pub fn t<T: Real>(&self, j: usize, period: T) -> T {
        period * T::of_usize(j) / T::of_usize(self.n_t)
    }

    pub fn len(&self) -> usize {
        self.n_k * self.n_t
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Flat index of `(i_k, i_t)` with periodic wrap-around.
    pub fn index(&self, i: usize, j: usize) -> usize {
        (i % self.n_k) * self.n_t + (j % self.n_t)
    }
}
