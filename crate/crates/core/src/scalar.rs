//! Scalar abstraction for the exact kernels.
//!
//! Geometry in [`crate::exact`] is written once against [`ExactScalar`] and
//! instantiated with [`BigRational`] or the quadratic-field
//! [`Scalar`](crate::quadratic::Scalar). Floating helpers use
//! [`num_traits::Float`] instead and work for `f32` and `f64`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of_ordering(o: Ordering) -> Sign {
        match o {
            Ordering::Less => Sign::Negative,
            Ordering::Equal => Sign::Zero,
            Ordering::Greater => Sign::Positive,
        }
    }

    pub fn to_ordering(self) -> Ordering {
        match self {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }

    pub fn negate(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

/// An exactly representable ordered ring element with a decidable sign.
pub trait ExactScalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn sign(&self) -> Sign;

    fn to_f64(&self) -> f64;

    fn from_rational(r: BigRational) -> Self;

    /// Whether the two values can be combined arithmetically. Always true
    /// for rationals; quadratic scalars require a common field.
    fn compatible_with(&self, _other: &Self) -> bool {
        true
    }

    fn abs_exact(&self) -> Self {
        if self.sign() == Sign::Negative {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn cmp_exact(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).sign().to_ordering()
    }

    fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }
}

/// Exact scalars that also divide.
pub trait ExactField: ExactScalar + Div<Output = Self> {}

impl ExactScalar for BigRational {
    fn sign(&self) -> Sign {
        if self.is_zero() {
            Sign::Zero
        } else if self.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn from_rational(r: BigRational) -> Self {
        r
    }

    fn cmp_exact(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
}

impl ExactField for BigRational {}

/// Shorthand for building rationals in tests and generators.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}
