//! Floating-point abstraction for the soft-decision path.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, MulAssign, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar used for log-likelihoods, channel samples and metrics: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Converts a literal; every `f64` is representable (possibly rounded).
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Log-domain clamp applied to every likelihood and LLR.
pub const LLR_CLAMP: f64 = 50.0;

#[inline]
pub(crate) fn clamp_llr<T: Real>(v: T) -> T {
    let c = T::lit(LLR_CLAMP);
    if v.is_nan() {
        T::zero()
    } else {
        v.max(-c).min(c)
    }
}
