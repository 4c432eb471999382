//! Numeric backends for probability computations.
//!
//! Every closed form and the exhaustive enumeration are generic over
//! [`Scalar`], so the same code runs in double precision and in exact
//! rational arithmetic ([`Rational`]).

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive, Zero};

/// Exact arbitrary-precision rational number.
pub type Rational = BigRational;

/// A field element usable as a probability.
pub trait Scalar: Num + Signed + Clone + PartialOrd + Debug + Send + Sync {
    /// The value `num / den`.
    fn ratio(num: i64, den: i64) -> Self;

    fn to_f64(&self) -> f64;

    /// Equality up to `tol` in floating point, exact equality for rationals.
    fn approx_eq(&self, other: &Self, tol: f64) -> bool;

    fn powu(&self, exp: u32) -> Self {
        num_traits::pow(self.clone(), exp as usize)
    }

    fn half() -> Self {
        Self::ratio(1, 2)
    }

    fn fifth() -> Self {
        Self::ratio(1, 5)
    }
}

impl Scalar for f64 {
    fn ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self - other).abs() <= tol
    }

    fn powu(&self, exp: u32) -> Self {
        // powi(0) is 1 for every base including 0, which matches the
        // convention that zero cuts leave the deck unchanged.
        self.powi(exp as i32)
    }
}

impl Scalar for Rational {
    fn ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn approx_eq(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }
}

/// Clamp-free check that `x` lies in `[0, 1]`.
pub(crate) fn is_probability<T: Scalar>(x: &T) -> bool {
    *x >= T::zero() && *x <= T::one()
}

pub(crate) fn sum<'a, T: Scalar + 'a>(xs: impl IntoIterator<Item = &'a T>) -> T {
    xs.into_iter().fold(T::zero(), |acc, x| acc + x.clone())
}

pub(crate) fn is_zero<T: Scalar>(x: &T) -> bool {
    Zero::is_zero(x)
}
