//! Floating-point scalar abstraction.
//!
//! All core computations are generic over the scalar type; `f32` and `f64`
//! both satisfy [`Scalar`]. The crate-root type aliases fix `f64`, which is
//! the precision every default tolerance is calibrated for.

use std::fmt::Debug;

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar: `f32` or `f64`.
pub trait Scalar: Float + FromPrimitive + Debug + 'static {}

impl<T> Scalar for T where T: Float + FromPrimitive + Debug + 'static {}

/// Convert an `f64` constant (tolerance, coefficient) into the working scalar.
pub fn from_f64<F: Scalar>(x: f64) -> F {
    F::from(x).expect("f64 constant not representable in scalar type")
}

/// Convert a count into the working scalar.
pub fn from_usize<F: Scalar>(n: usize) -> F {
    F::from(n).expect("usize not representable in scalar type")
}
