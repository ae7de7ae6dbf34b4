//! Scalar types used for evaluation and pointwise linear algebra.
//!
//! Symbolic coefficients are always exact rationals; evaluation, sampling and
//! the numeric oracles are generic over [`Scalar`], which covers exact
//! rationals as well as `f64`/`f32`.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive};

/// A field usable as a value domain for expressions.
///
/// Transcendental functions are optional: exact domains return `None`.
pub trait Scalar: Num + Neg<Output = Self> + Clone + Debug {
    fn from_rational(q: &BigRational) -> Self;

    fn sin(&self) -> Option<Self>;
    fn cos(&self) -> Option<Self>;
    fn exp(&self) -> Option<Self>;

    /// Absolute value as an `f64`, used for tolerances and pivoting.
    fn magnitude(&self) -> f64;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(v)))
    }
}

impl Scalar for BigRational {
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }

    fn sin(&self) -> Option<Self> {
        None
    }

    fn cos(&self) -> Option<Self> {
        None
    }

    fn exp(&self) -> Option<Self> {
        None
    }

    fn magnitude(&self) -> f64 {
        rational_to_f64(&self.abs())
    }
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            fn from_rational(q: &BigRational) -> Self {
                rational_to_f64(q) as $t
            }

            fn sin(&self) -> Option<Self> {
                Some(<$t>::sin(*self))
            }

            fn cos(&self) -> Option<Self> {
                Some(<$t>::cos(*self))
            }

            fn exp(&self) -> Option<Self> {
                Some(<$t>::exp(*self))
            }

            fn magnitude(&self) -> f64 {
                self.abs() as f64
            }
        }
    };
}

float_scalar!(f64);
float_scalar!(f32);

/// Converts an exact rational to the nearest representable `f64`.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// A point of a chart with coordinates in `T`.
#[derive(Clone, Debug, PartialEq)]
pub struct Point<T>(pub Vec<T>);

pub type ExactPoint = Point<BigRational>;
pub type FloatPoint = Point<f64>;

impl<T> Point<T> {
    pub fn new(coords: Vec<T>) -> Self {
        Self(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[T] {
        &self.0
    }
}

impl Point<BigRational> {
    pub fn to_float(&self) -> Point<f64> {
        Point(self.0.iter().map(rational_to_f64).collect())
    }
}

impl std::fmt::Display for Point<BigRational> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}
