//! Scalar abstraction shared by every numeric module.
//!
//! All matrix code is written against [`Real`], which is implemented for `f32` and `f64`.
//! Tolerances throughout the crate are quoted in double precision; [`Real::tol`] maps them onto
//! whatever the concrete precision can actually resolve.

use std::fmt::{Debug, Display, LowerExp};

use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};

pub use nalgebra::Complex;

/// Floating point type usable as the real part of matrix entries.
pub trait Real:
    RealField + Copy + FromPrimitive + ToPrimitive + Debug + Display + LowerExp + Send + Sync + 'static
{
    /// Smallest absolute tolerance this precision can honour.
    const TOLERANCE_FLOOR: f64;
    /// Term size below which power series are truncated.
    const SERIES_CUTOFF: f64;

    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in target precision")
    }

    /// A double-precision tolerance, clamped to what this precision can resolve.
    fn tol(x: f64) -> Self {
        Self::lit(x.max(Self::TOLERANCE_FLOOR))
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    const TOLERANCE_FLOOR: f64 = 0.0;
    const SERIES_CUTOFF: f64 = 1e-17;
}

impl Real for f32 {
    const TOLERANCE_FLOOR: f64 = 1e-4;
    const SERIES_CUTOFF: f64 = 1e-9;
}

pub(crate) fn cplx<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::lit(im))
}

/// `e^{2πi·turns}` evaluated from the angle, not by repeated multiplication.
pub fn unit_phase<T: Real>(turns: f64) -> Complex<T> {
    let angle = std::f64::consts::TAU * turns;
    cplx(angle.cos(), angle.sin())
}

/// `1 / (2πi)`.
pub(crate) fn inv_two_pi_i<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), -(T::one() / T::two_pi()))
}
