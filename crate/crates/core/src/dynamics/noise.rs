use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::FockBasis;
use crate::scalar::{cabs, Real, C};

/// Effective relaxation and pure-dephasing times in µs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel<T> {
    pub t1_eff: T,
    pub tphi_eff: T,
    pub relaxation: bool,
    pub dephasing: bool,
}

impl<T: Real> Default for NoiseModel<T> {
    fn default() -> Self {
        Self { t1_eff: T::of(25.0), tphi_eff: T::of(1.0), relaxation: true, dephasing: true }
    }
}

impl<T: Real> NoiseModel<T> {
    pub fn disabled() -> Self {
        Self { relaxation: false, dephasing: false, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t1_eff > T::zero() && self.tphi_eff > T::zero()) {
            return Err(Error::InvalidArgument("T1 and Tphi must be positive".into()));
        }
        Ok(())
    }
}

/// `Σ_j D[√(1/T₁) a_j] + D[√(2/T_φ) n_j]` on a sector-sum basis.
#[derive(Debug, Clone)]
pub struct Dissipator<T> {
    /// Element-wise factor from the anticommutator and dephasing terms.
    decay: DMatrix<T>,
    /// Per site: `(from, to, √n)` for `a_j`.
    jumps: Vec<Vec<(usize, usize, T)>>,
    gamma1: T,
    rate_bound: T,
}

impl<T: Real> Dissipator<T> {
    pub fn new(basis: &FockBasis, noise: &NoiseModel<T>) -> Result<Self> {
        noise.validate()?;
        let dim = basis.dim();
        let gamma1 = if noise.relaxation { T::one() / noise.t1_eff } else { T::zero() };
        let gammaphi = if noise.dephasing { T::of(2.0) / noise.tphi_eff } else { T::zero() };
        let half = T::of(0.5);
        let occ: Vec<Vec<T>> =
            basis.states().iter().map(|s| s.iter().map(|&n| T::of(n as f64)).collect()).collect();
        let total: Vec<T> = occ.iter().map(|s| s.iter().fold(T::zero(), |a, &b| a + b)).collect();
        let decay = DMatrix::from_fn(dim, dim, |a, b| {
            let deph = occ[a].iter().zip(&occ[b]).fold(T::zero(), |acc, (&x, &y)| acc + (x - y) * (x - y));
            -half * gamma1 * (total[a] + total[b]) - half * gammaphi * deph
        });
        let mut jumps = vec![Vec::new(); basis.n_sites()];
        if noise.relaxation {
            for (a, s) in basis.states().iter().enumerate() {
                for (j, &n) in s.iter().enumerate() {
                    if n > 0 {
                        let mut t = s.clone();
                        t[j] -= 1;
                        if let Some(c) = basis.index_of(&t) {
                            jumps[j].push((a, c, T::of(n as f64).sqrt()));
                        } else {
                            return Err(Error::InvalidArgument(
                                "relaxation needs every lower particle-number sector in the basis".into(),
                            ));
                        }
                    }
                }
            }
        }
        let max_decay = decay.iter().fold(T::zero(), |m, &x| m.max(x.abs()));
        let max_n = total.iter().fold(T::zero(), |m, &x| m.max(x));
        let rate_bound = max_decay + gamma1 * max_n;
        Ok(Self { decay, jumps, gamma1, rate_bound })
    }

    /// Upper bound on the superoperator norm, used for step selection.
    pub fn rate_bound(&self) -> T {
        self.rate_bound
    }

    pub fn is_zero(&self) -> bool {
        self.rate_bound == T::zero()
    }

    pub fn apply(&self, rho: &DMatrix<C<T>>) -> DMatrix<C<T>> {
        let mut out = rho.component_mul(&self.decay.map(|x| C::new(x, T::zero())));
        if self.gamma1 > T::zero() {
            for list in &self.jumps {
                for &(a, c, amp_a) in list {
                    for &(b, d, amp_b) in list {
                        out[(c, d)] += rho[(a, b)] * (self.gamma1 * amp_a * amp_b);
                    }
                }
            }
        }
        out
    }

    /// `ρ ← exp(h 𝒟) ρ` by a Taylor series.
    pub fn exp_apply(&self, h: T, rho: &mut DMatrix<C<T>>) {
        if self.is_zero() {
            return;
        }
        let scale = rho.iter().fold(T::zero(), |m, &z| m.max(cabs(z)));
        let tol = T::eps() * scale;
        let mut term = rho.clone();
        for k in 1..=64 {
            term = self.apply(&term) * C::new(h / T::of_usize(k), T::zero());
            *rho += &term;
            if term.iter().fold(T::zero(), |m, &z| m.max(cabs(z))) <= tol {
                break;
            }
        }
    }
}
