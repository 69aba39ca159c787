//! Generic real scalar used throughout the crate.

use nalgebra as na;
use num_complex::Complex;
use num_traits as nt;

/// Floating point type the physics is generic over (`f32` or `f64`).
pub trait Real:
    Copy + Default + na::RealField + nt::FromPrimitive + nt::ToPrimitive + Send + Sync + 'static
{
    /// Converts an `f64` literal; every finite `f64` is representable (possibly rounded).
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    #[inline]
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("representable count")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite value")
    }

    /// Machine epsilon of the concrete type.
    fn eps() -> Self;
}

impl Real for f32 {
    fn eps() -> Self {
        f32::EPSILON
    }
}

impl Real for f64 {
    fn eps() -> Self {
        f64::EPSILON
    }
}

pub type C<T> = Complex<T>;

#[inline]
pub(crate) fn cr<T: Real>(re: T) -> C<T> {
    Complex::new(re, T::zero())
}

#[inline]
pub(crate) fn cis<T: Real>(phase: T) -> C<T> {
    Complex::new(phase.cos(), phase.sin())
}

#[inline]
pub(crate) fn cabs<T: Real>(z: C<T>) -> T {
    z.re.hypot(z.im)
}

#[inline]
pub(crate) fn carg<T: Real>(z: C<T>) -> T {
    z.im.atan2(z.re)
}
