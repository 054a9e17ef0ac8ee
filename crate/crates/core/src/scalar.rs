//! Scalar abstraction shared by every numerical routine in the crate.
//!
//! All physics is written once against [`Real`] and instantiated for `f32`
//! and `f64`. Natural units are used throughout: `hbar = m = 1`.

use core::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use rustfft::FftNum;

/// Real floating-point scalar usable by the scattering routines.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + FftNum + Default + Debug + Display + LowerExp
{
    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    /// Lossy conversion to `f64`, used for diagnostics and error payloads.
    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Converts a count into `Self`.
    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `2m/hbar^2` in natural units. Energies convert to squared wave numbers
/// through this factor.
#[inline]
pub fn two_m_over_hbar2<T: Real>() -> T {
    T::lit(2.0)
}

/// Squared wave number `2m(E - V)/hbar^2` for kinetic energy `energy - potential`.
#[inline]
pub fn wave_number_sq<T: Real>(energy: T, potential: T) -> T {
    two_m_over_hbar2::<T>() * (energy - potential)
}

/// Energy `hbar^2 k^2 / 2m` of a plane wave with wave number `k`.
#[inline]
pub fn energy_of<T: Real>(k: T) -> T {
    k * k / two_m_over_hbar2::<T>()
}
