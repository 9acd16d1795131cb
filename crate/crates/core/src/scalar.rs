//! Scalar abstraction so the whole pipeline runs in `f32` or `f64`.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::ops::{AddAssign, MulAssign, SubAssign};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar usable for fields, energies and gradients.
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + Sum
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + 'static
{
}

impl<T> Real for T where
    T: Float
        + FromPrimitive
        + ToPrimitive
        + AddAssign
        + SubAssign
        + MulAssign
        + Sum
        + Debug
        + Display
        + LowerExp
        + Default
        + Send
        + Sync
        + 'static
{
}

/// Converts an `f64` literal into the working scalar type.
#[inline]
pub fn real<S: Real>(x: f64) -> S {
    S::from_f64(x).expect("literal representable in scalar type")
}

/// `q^(p/2)` with exact fast paths for the common integer exponents.
#[inline]
pub(crate) fn pow_half<S: Real>(q: S, p: S) -> S {
    let two = real::<S>(2.0);
    if p == two {
        q
    } else if p == real(4.0) {
        q * q
    } else if p == real(3.0) {
        q * q.sqrt()
    } else if q == S::zero() {
        S::zero()
    } else {
        q.powf(p / two)
    }
}
