//! Scalar abstraction shared by the linear-programming and rotation code.
//!
//! Everything numeric in this crate is written against [`Scalar`], so the same
//! simplex tableau and matrix routines run over exact rationals (the default,
//! see [`crate::Rational`]) or over `f64` for quick approximate work.

use std::fmt::Debug;
use std::ops::Neg;

use num_traits::{Num, Signed};

/// A field element: ordered, signed, cloneable.
pub trait Scalar: Num + Signed + Neg<Output = Self> + PartialOrd + Clone + Debug {
    /// Converts a small integer into the scalar type.
    fn from_i64(v: i64) -> Self;

    /// Magnitude below which a value counts as zero in pivoting decisions.
    fn tolerance() -> Self {
        Self::zero()
    }

    fn is_above_tolerance(&self) -> bool {
        *self > Self::tolerance()
    }
}

impl Scalar for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn tolerance() -> Self {
        1e-9
    }
}

impl Scalar for f32 {
    fn from_i64(v: i64) -> Self {
        v as f32
    }

    fn tolerance() -> Self {
        1e-5
    }
}

impl<I> Scalar for num_rational::Ratio<I>
where
    I: num_integer::Integer + Signed + Clone + Debug + From<i64>,
{
    fn from_i64(v: i64) -> Self {
        num_rational::Ratio::from_integer(I::from(v))
    }
}
