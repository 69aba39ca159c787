use rand::{RngExt, SeedableRng};
use rand_pcg::Pcg64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DriveKind {
    /// `Δ = Δ₀[cos(ωt+φ₀) + Δ_r + Wξ_l]`, `δ = δ₀ sin(ωt+φ₀)`.
    BulkPump,
    /// `Δ = Δ₀ sin(2πt/T_e)`, `δ = −δ₀ cos(2πt/T_e)`.
    EdgePump,
    /// Bulk law frozen at `t = 0`.
    Static,
}

/// Modulation law for `(Δ(t), δ(t))`. All rates in rad/µs, times in µs.
#[derive(Debug, Clone, PartialEq)]
pub struct DriveProtocol<T> {
    pub kind: DriveKind,
    pub j_hop: T,
    pub delta0: T,
    pub capdelta0: T,
    pub period: T,
    pub phase0: T,
    pub offset_r: T,
    pub disorder_w: T,
    pub disorder_seed: u64,
}

/// Drive values at one instant: per-site `Δ_l(t)` (before the `(−1)^j`
/// staggering) and the uniform hopping modulation `δ(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DriveParams<T> {
    pub capdelta: Vec<T>,
    pub smalldelta: T,
}

impl<T: Real> DriveProtocol<T> {
    pub fn bulk(j_hop: T, delta0: T, capdelta0: T, period: T) -> Self {
        Self {
            kind: DriveKind::BulkPump,
            j_hop,
            delta0,
            capdelta0,
            period,
            phase0: T::zero(),
            offset_r: T::zero(),
            disorder_w: T::zero(),
            disorder_seed: 0,
        }
    }

    pub fn edge(j_hop: T, delta0: T, capdelta0: T, period: T) -> Self {
        Self { kind: DriveKind::EdgePump, ..Self::bulk(j_hop, delta0, capdelta0, period) }
    }

    pub fn validate(&self) -> Result<()> {
        let fin = [
            self.j_hop,
            self.delta0,
            self.capdelta0,
            self.period,
            self.phase0,
            self.offset_r,
            self.disorder_w,
        ];
        if fin.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidDrive("non-finite parameter".into()));
        }
        if self.period <= T::zero() {
            return Err(Error::InvalidDrive("period must be positive".into()));
        }
        if self.j_hop < T::zero() {
            return Err(Error::InvalidDrive("j_hop must be non-negative".into()));
        }
        Ok(())
    }

    pub fn omega(&self) -> T {
        T::two_pi() / self.period
    }

    /// Per-site disorder `ξ_l ∈ [−0.5, 0.5)` from a PCG-64 stream seeded with
    /// `disorder_seed` (`Pcg64::seed_from_u64`). Site `l` always takes the
    /// `l`-th draw, so the pattern is a prefix-stable function of the seed.
    pub fn disorder(&self, site_count: usize) -> Vec<T> {
        let mut rng = Pcg64::seed_from_u64(self.disorder_seed);
        (0..site_count).map(|_| T::of(rng.random_range(-0.5..0.5))).collect()
    }

    /// Precomputes the disorder pattern for repeated evaluation.
    pub fn schedule(&self, site_count: usize) -> DriveSchedule<T> {
        let xi = if self.disorder_w == T::zero() {
            vec![T::zero(); site_count]
        } else {
            self.disorder(site_count)
        };
        DriveSchedule { drive: self.clone(), xi }
    }

    /// Phase `ωt` reduced to one period so `t` and `t + T` agree.
    fn cycle_phase(&self, t: T) -> T {
        let frac = t / self.period;
        let frac = frac - frac.floor();
        T::two_pi() * frac
    }

    /// Translation-invariant part (no disorder): `(Δ(t), δ(t))`.
    pub fn uniform_at(&self, t: T) -> (T, T) {
        let t = if self.kind == DriveKind::Static { T::zero() } else { t };
        let wt = self.cycle_phase(t);
        match self.kind {
            DriveKind::BulkPump | DriveKind::Static => {
                let ph = wt + self.phase0;
                (self.capdelta0 * (ph.cos() + self.offset_r), self.delta0 * ph.sin())
            }
            DriveKind::EdgePump => (self.capdelta0 * wt.sin(), -self.delta0 * wt.cos()),
        }
    }
}

/// A drive with its disorder realization fixed.
#[derive(Debug, Clone)]
pub struct DriveSchedule<T> {
    drive: DriveProtocol<T>,
    xi: Vec<T>,
}

impl<T: Real> DriveSchedule<T> {
    pub fn drive(&self) -> &DriveProtocol<T> {
        &self.drive
    }

    pub fn xi(&self) -> &[T] {
        &self.xi
    }

    pub fn at(&self, t: T) -> DriveParams<T> {
        let (base, smalldelta) = self.drive.uniform_at(t);
        let capdelta = match self.drive.kind {
            DriveKind::EdgePump => vec![base; self.xi.len()],
            _ => {
                let s = self.drive.capdelta0 * self.drive.disorder_w;
                self.xi.iter().map(|&x| base + s * x).collect()
            }
        };
        DriveParams { capdelta, smalldelta }
    }
}

/// Drive values at time `t` for a chain of `site_count` sites.
pub fn instantaneous_params<T: Real>(drive: &DriveProtocol<T>, t: T, site_count: usize) -> DriveParams<T> {
    drive.schedule(site_count).at(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn fig1() -> DriveProtocol<f64> {
        let m = 2.0 * PI;
        DriveProtocol::bulk(8.0 * m, 8.0 * m, 80.0 * m, 0.4)
    }

    #[test]
    fn bulk_start_and_quarter() {
        let d = fig1();
        let p = instantaneous_params(&d, 0.0, 4);
        assert!(p.capdelta.iter().all(|&x| (x - d.capdelta0).abs() < 1e-12));
        assert_eq!(p.smalldelta, 0.0);
        let p = instantaneous_params(&d, 0.1, 4);
        assert!(p.capdelta[0].abs() < 1e-9);
        assert!((p.smalldelta - d.delta0).abs() < 1e-9);
    }

    #[test]
    fn sine_variant_is_phase_shift() {
        let mut d = fig1();
        d.phase0 = -PI / 2.0;
        let p = instantaneous_params(&d, 0.05, 1);
        let w = d.omega();
        assert!((p.capdelta[0] - d.capdelta0 * (w * 0.05).sin()).abs() < 1e-9);
    }

    #[test]
    fn edge_law() {
        let d = DriveProtocol::<f64>::edge(1.0, 2.0, 3.0, 4.0);
        let (cd, sd) = d.uniform_at(0.0);
        assert_eq!(cd, 0.0);
        assert_eq!(sd, -2.0);
        let (cd, sd) = d.uniform_at(1.0);
        assert!((cd - 3.0).abs() < 1e-12 && sd.abs() < 1e-12);
    }

    #[test]
    fn static_is_frozen() {
        let mut d = fig1();
        d.kind = DriveKind::Static;
        assert_eq!(d.uniform_at(0.0), d.uniform_at(0.123));
    }

    #[test]
    fn disorder_reproducible_and_bounded() {
        let mut d = fig1();
        d.disorder_w = 2.0;
        d.disorder_seed = 42;
        let a = d.disorder(36);
        assert_eq!(a, d.disorder(36));
        assert!(a.iter().all(|x| (-0.5..0.5).contains(x)));
        assert_eq!(&d.disorder(40)[..36], &a[..]);
        d.disorder_seed = 43;
        assert_ne!(a, d.disorder(36));
    }

    #[test]
    fn rejects_bad_period() {
        let mut d = fig1();
        d.period = 0.0;
        assert!(d.validate().is_err());
    }
}
