//! Numeric carriers for the weight algebras.
//!
//! Tropical weights need a representation of the two infinities and an
//! addition that never wraps; integers use their extreme values for that,
//! floats use IEEE infinities.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_traits::{Float, Num};

/// Anything usable as a weight carrier.
pub trait Scalar:
    Num + Copy + Default + PartialOrd + Debug + Display + FromStr + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: Num + Copy + Default + PartialOrd + Debug + Display + FromStr + Send + Sync + 'static
{
}

/// Carrier of a tropical semiring: an ordered group extended with `+inf` and `-inf`.
pub trait TropicalScalar: Scalar + num_traits::Signed {
    fn pos_infinity() -> Self;
    fn neg_infinity() -> Self;

    /// Addition that clamps at the infinities instead of overflowing.
    fn saturating_sum(self, other: Self) -> Self;

    fn is_pos_infinite(self) -> bool {
        self == Self::pos_infinity()
    }

    fn is_neg_infinite(self) -> bool {
        self == Self::neg_infinity()
    }
}

macro_rules! tropical_int {
    ($($t:ty),*) => {$(
        impl TropicalScalar for $t {
            #[inline]
            fn pos_infinity() -> Self {
                <$t>::MAX
            }

            #[inline]
            fn neg_infinity() -> Self {
                <$t>::MIN
            }

            #[inline]
            fn saturating_sum(self, other: Self) -> Self {
                self.saturating_add(other)
            }
        }
    )*};
}

macro_rules! tropical_float {
    ($($t:ty),*) => {$(
        impl TropicalScalar for $t {
            #[inline]
            fn pos_infinity() -> Self {
                <$t>::INFINITY
            }

            #[inline]
            fn neg_infinity() -> Self {
                <$t>::NEG_INFINITY
            }

            #[inline]
            fn saturating_sum(self, other: Self) -> Self {
                self + other
            }
        }
    )*};
}

tropical_int!(i32, i64);
tropical_float!(f32, f64);

/// Carrier of the max-times probability semiring.
pub trait ProbabilityScalar: Scalar + Float {}

impl<T> ProbabilityScalar for T where T: Scalar + Float {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_sum_clamps() {
        assert_eq!(i64::MAX.saturating_sum(5), i64::MAX);
        assert_eq!(3i64.saturating_sum(5), 8);
        assert!(i32::pos_infinity().is_pos_infinite());
        assert!(i32::neg_infinity().is_neg_infinite());
    }

    #[test]
    fn float_infinities() {
        assert_eq!(f64::pos_infinity().saturating_sum(1.0), f64::INFINITY);
        assert!(<f32 as TropicalScalar>::neg_infinity().is_neg_infinite());
    }
}
