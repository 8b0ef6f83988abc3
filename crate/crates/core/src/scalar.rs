//! Numeric scalar traits.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::{Float, Num};

use crate::Rational;

/// A number type proportions and strengths can be expressed in.
///
/// Implemented for `f32`, `f64` and the exact [`Rational`].
pub trait Scalar: Num + Clone + PartialOrd + Debug + Send + Sync {
    /// `num / den`, rounded when `Self` is a float.
    fn from_ratio(num: u64, den: u64) -> Self;

    fn as_f64(&self) -> f64;
}

/// Floating-point scalars, for closed forms involving logarithms and roots.
pub trait Real: Scalar + Float {
    fn from_f64(value: f64) -> Self;
}

macro_rules! impl_float_scalar {
    ($($t:ty)*) => ($(
        impl Scalar for $t {
            #[inline]
            fn from_ratio(num: u64, den: u64) -> Self {
                (num as f64 / den as f64) as $t
            }

            #[inline]
            fn as_f64(&self) -> f64 {
                *self as f64
            }
        }

        impl Real for $t {
            #[inline]
            fn from_f64(value: f64) -> Self {
                value as $t
            }
        }
    )*)
}

impl_float_scalar!(f32 f64);

impl Scalar for Rational {
    fn from_ratio(num: u64, den: u64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn as_f64(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}
