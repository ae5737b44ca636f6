//! Floating-point scalar abstraction: f32 or f64.

use std::fmt::{Debug, Display};
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Everything the numeric kernels need from a floating-point type.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Debug
    + Display
{
    /// Lossless-enough conversion from `f64` for tabulated constants.
    fn from_f(x: f64) -> Self {
        Self::from_f64(x).expect("constant representable")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

#[cfg(test)]
mod tests {
    use super::*;

    fn ln_of_two<S: Scalar>() -> S {
        S::LN_2()
    }

    #[test]
    fn both_widths_instantiate() {
        assert!((ln_of_two::<f32>() - 0.6931472f32).abs() < 1e-6);
        assert!((ln_of_two::<f64>() - std::f64::consts::LN_2).abs() < 1e-15);
        assert_eq!(f64::from_f(1.5), 1.5);
    }
}
