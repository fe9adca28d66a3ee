//! Scalar abstraction for the numeric kernels.
//!
//! Channel models, code construction, and the decoders are generic over
//! [`Float`], implemented for `f32` and `f64`. The crate root exports `f64`
//! aliases for the main types; simulations and the CLI run on `f64`.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, SubAssign};

/// Floating-point scalar used throughout the coding and simulation kernels.
pub trait Float:
    num_traits::Float
    + num_traits::FloatConst
    + AddAssign
    + SubAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from `f64`, used for constants and sampled noise.
    fn from_f64(x: f64) -> Self;

    /// Conversion to `f64`, used when aggregating statistics.
    fn as_f64(self) -> f64;
}

impl Float for f32 {
    #[inline]
    fn from_f64(x: f64) -> Self {
        x as f32
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self as f64
    }
}

impl Float for f64 {
    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self
    }
}
