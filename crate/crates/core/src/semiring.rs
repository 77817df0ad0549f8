//! Weight algebras `<K, plus, times, zero, one>` together with the order a
//! best-path search optimises.
//!
//! A semiring here is a zero-sized type; the carrier is its associated
//! `Weight`. Searches only use [`Semiring::times`] and [`Semiring::better`];
//! `plus` is exposed for relation weights and for the algebraic law tests.

use std::fmt::Debug;
use std::marker::PhantomData;

use thiserror::Error;

use crate::scalar::{ProbabilityScalar, TropicalScalar};

/// Whether a search looks for the minimal or the maximal weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Min,
    Max,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid weight `{text}` for semiring {semiring}")]
pub struct WeightParseError {
    pub text: String,
    pub semiring: &'static str,
}

pub trait Semiring: Copy + Debug + Default + PartialEq + Send + Sync + 'static {
    type Weight: Copy + Debug + PartialEq + Send + Sync + 'static;

    /// Name used in machine files and on the command line.
    const NAME: &'static str;
    const DIRECTION: Direction;

    fn zero() -> Self::Weight;
    fn one() -> Self::Weight;
    fn plus(a: Self::Weight, b: Self::Weight) -> Self::Weight;
    fn times(a: Self::Weight, b: Self::Weight) -> Self::Weight;

    /// Strict "improves upon" relation in the search direction.
    fn better(a: Self::Weight, b: Self::Weight) -> bool;

    fn parse_weight(text: &str) -> Result<Self::Weight, WeightParseError>;
    fn format_weight(w: Self::Weight) -> String;

    fn is_zero(w: Self::Weight) -> bool {
        w == Self::zero()
    }
}

/// `better` lifted to an optional (possibly undefined) current weight.
///
/// An undefined weight is improved upon by every defined one.
#[inline]
pub fn improves<S: Semiring>(candidate: S::Weight, current: Option<S::Weight>) -> bool {
    match current {
        None => true,
        Some(w) => S::better(candidate, w),
    }
}

fn parse_error<S: Semiring>(text: &str) -> WeightParseError {
    WeightParseError {
        text: text.to_string(),
        semiring: S::NAME,
    }
}

fn parse_finite<T: TropicalScalar>(text: &str) -> Option<T> {
    let v = text.parse::<T>().ok()?;
    if v.is_pos_infinite() || v.is_neg_infinite() {
        None
    } else {
        Some(v)
    }
}

/// `<K ∪ {+inf}, min, +, +inf, 0>`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct TropicalMin<T>(PhantomData<T>);

impl<T: TropicalScalar> Semiring for TropicalMin<T> {
    type Weight = T;
    const NAME: &'static str = "tropical-min";
    const DIRECTION: Direction = Direction::Min;

    #[inline]
    fn zero() -> T {
        T::pos_infinity()
    }

    #[inline]
    fn one() -> T {
        T::zero()
    }

    #[inline]
    fn plus(a: T, b: T) -> T {
        if b < a {
            b
        } else {
            a
        }
    }

    #[inline]
    fn times(a: T, b: T) -> T {
        if a.is_pos_infinite() || b.is_pos_infinite() {
            T::pos_infinity()
        } else {
            a.saturating_sum(b)
        }
    }

    #[inline]
    fn better(a: T, b: T) -> bool {
        a < b
    }

    fn parse_weight(text: &str) -> Result<T, WeightParseError> {
        match text {
            "inf" | "+inf" => Ok(T::pos_infinity()),
            _ => parse_finite(text).ok_or_else(|| parse_error::<Self>(text)),
        }
    }

    fn format_weight(w: T) -> String {
        if w.is_pos_infinite() {
            "inf".to_string()
        } else {
            w.to_string()
        }
    }
}

/// `<K ∪ {-inf}, max, +, -inf, 0>`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct TropicalMax<T>(PhantomData<T>);

impl<T: TropicalScalar> Semiring for TropicalMax<T> {
    type Weight = T;
    const NAME: &'static str = "tropical-max";
    const DIRECTION: Direction = Direction::Max;

    #[inline]
    fn zero() -> T {
        T::neg_infinity()
    }

    #[inline]
    fn one() -> T {
        T::zero()
    }

    #[inline]
    fn plus(a: T, b: T) -> T {
        if b > a {
            b
        } else {
            a
        }
    }

    #[inline]
    fn times(a: T, b: T) -> T {
        if a.is_neg_infinite() || b.is_neg_infinite() {
            T::neg_infinity()
        } else {
            a.saturating_sum(b)
        }
    }

    #[inline]
    fn better(a: T, b: T) -> bool {
        a > b
    }

    fn parse_weight(text: &str) -> Result<T, WeightParseError> {
        match text {
            "-inf" => Ok(T::neg_infinity()),
            _ => parse_finite(text).ok_or_else(|| parse_error::<Self>(text)),
        }
    }

    fn format_weight(w: T) -> String {
        if w.is_neg_infinite() {
            "-inf".to_string()
        } else {
            w.to_string()
        }
    }
}

/// Max-times probability semiring `<[0, inf), max, *, 0, 1>`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct ProbMax<T>(PhantomData<T>);

impl<T: ProbabilityScalar> Semiring for ProbMax<T> {
    type Weight = T;
    const NAME: &'static str = "prob-max";
    const DIRECTION: Direction = Direction::Max;

    #[inline]
    fn zero() -> T {
        T::zero()
    }

    #[inline]
    fn one() -> T {
        T::one()
    }

    #[inline]
    fn plus(a: T, b: T) -> T {
        a.max(b)
    }

    #[inline]
    fn times(a: T, b: T) -> T {
        a * b
    }

    #[inline]
    fn better(a: T, b: T) -> bool {
        a > b
    }

    fn parse_weight(text: &str) -> Result<T, WeightParseError> {
        match text.parse::<T>() {
            Ok(v) if v.is_finite() && v >= T::zero() => Ok(v),
            _ => Err(parse_error::<Self>(text)),
        }
    }

    fn format_weight(w: T) -> String {
        w.to_string()
    }
}

/// Names accepted wherever a semiring is selected at runtime.
pub const SEMIRING_NAMES: [&str; 3] = ["tropical-min", "tropical-max", "prob-max"];

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type Tmin = TropicalMin<i64>;
    type Tmax = TropicalMax<i64>;
    type Prob = ProbMax<f64>;

    #[test]
    fn times_examples() {
        assert_eq!(Tmin::times(3, 5), 8);
        assert_eq!(Tmin::times(Tmin::zero(), 5), Tmin::zero());
        assert_eq!(Prob::times(0.5, 0.5), 0.25);
        assert_eq!(Tmax::times(Tmax::zero(), 7), Tmax::zero());
    }

    #[test]
    fn better_examples() {
        assert!(Tmin::better(2, 5));
        assert!(!Tmin::better(5, 5));
        assert!(Prob::better(0.9, 0.2));
        assert!(Tmax::better(5, 2));
        assert!(improves::<Tmin>(100, None));
        assert!(improves::<Tmax>(Tmax::zero(), None));
        assert!(!improves::<Tmin>(3, Some(3)));
    }

    #[test]
    fn weights_parse_and_format() {
        assert_eq!(Tmin::parse_weight("inf").unwrap(), i64::MAX);
        assert_eq!(Tmin::parse_weight("-4").unwrap(), -4);
        assert!(Tmin::parse_weight("-inf").is_err());
        assert!(Tmin::parse_weight("x").is_err());
        assert_eq!(Tmax::parse_weight("-inf").unwrap(), i64::MIN);
        assert_eq!(Tmin::format_weight(i64::MAX), "inf");
        assert_eq!(Tmax::format_weight(i64::MIN), "-inf");
        assert_eq!(Prob::parse_weight("0.25").unwrap(), 0.25);
        assert!(Prob::parse_weight("-0.5").is_err());
        assert!(Prob::parse_weight("inf").is_err());
        assert_eq!(TropicalMin::<f64>::parse_weight("inf").unwrap(), f64::INFINITY);
    }

    fn tropical_weight() -> impl Strategy<Value = i64> {
        prop_oneof![9 => -1000i64..1000, 1 => Just(i64::MAX)]
    }

    fn check_laws<S: Semiring>(a: S::Weight, b: S::Weight, c: S::Weight, eq: impl Fn(S::Weight, S::Weight) -> bool) {
        assert!(eq(S::plus(S::plus(a, b), c), S::plus(a, S::plus(b, c))));
        assert!(eq(S::plus(a, b), S::plus(b, a)));
        assert!(eq(S::plus(a, S::zero()), a));
        assert!(eq(S::times(S::times(a, b), c), S::times(a, S::times(b, c))));
        assert!(eq(S::times(a, S::one()), a));
        assert!(eq(S::times(S::one(), a), a));
        assert!(eq(S::times(a, S::zero()), S::zero()));
        assert!(eq(S::times(S::zero(), a), S::zero()));
        assert!(!(S::better(a, b) && S::better(b, a)));
        assert!(!S::better(a, a));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn tropical_min_laws(a in tropical_weight(), b in tropical_weight(), c in tropical_weight()) {
            check_laws::<Tmin>(a, b, c, |x, y| x == y);
        }

        #[test]
        fn tropical_max_laws(a in tropical_weight(), b in tropical_weight(), c in tropical_weight()) {
            let neg = |w: i64| if w == i64::MAX { i64::MIN } else { -w };
            check_laws::<Tmax>(neg(a), neg(b), neg(c), |x, y| x == y);
        }

        #[test]
        fn prob_max_laws(a in 0.0f64..=1.0, b in 0.0f64..=1.0, c in 0.0f64..=1.0) {
            check_laws::<Prob>(a, b, c, |x, y| (x - y).abs() <= 1e-12);
        }
    }
}
