//! Scalar fields used throughout the crate.
//!
//! Two instantiations exist: [`Rational`] (arbitrary precision, exact) for
//! identity and certificate work, and `f64` for the numerical solvers. Every
//! zero test goes through [`Scalar::negligible`] so that the float tolerance
//! policy lives in one place.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
pub use num_traits::{One, Zero};
use num_traits::{Signed, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Relative tolerance used by `f64` zero tests.
pub const FLOAT_ZERO_TOL: f64 = 1e-9;

pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// True when arithmetic is exact (no rounding).
    const EXACT: bool;

    fn from_i64(n: i64) -> Self;

    fn ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    fn from_f64(x: f64) -> Self;

    fn to_f64(&self) -> f64;

    fn from_rational(x: &Rational) -> Self;

    fn abs(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Zero test. Exact scalars compare with zero; floats compare `|x|`
    /// against [`FLOAT_ZERO_TOL`] times `scale`.
    fn negligible(&self, scale: f64) -> bool;

    fn is_negligible(&self) -> bool {
        self.negligible(1.0)
    }

    fn square(&self) -> Self {
        self.clone() * self.clone()
    }

    /// Square root when it exists in the scalar type (perfect squares for
    /// rationals, non-negative values for floats).
    fn sqrt_exact(&self) -> Option<Self>;

    /// Sign as -1, 0, 1 with the same zero policy as [`Scalar::negligible`].
    fn signum_tol(&self, scale: f64) -> i32 {
        if self.negligible(scale) {
            0
        } else if *self > Self::zero() {
            1
        } else {
            -1
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn from_f64(x: f64) -> Self {
        x
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_rational(x: &Rational) -> Self {
        x.to_f64()
    }

    fn negligible(&self, scale: f64) -> bool {
        f64::abs(*self) <= FLOAT_ZERO_TOL * scale.abs().max(f64::MIN_POSITIVE)
    }

    fn sqrt_exact(&self) -> Option<Self> {
        (*self >= 0.0).then(|| self.sqrt())
    }
}

/// Arbitrary-precision rational number. Serialized as the string `"num/den"`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(pub BigRational);

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn integer(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// Best rational approximation of `x` with denominator at most `max_den`
    /// (continued-fraction convergents).
    pub fn approximate(x: f64, max_den: i64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        let (mut h0, mut h1) = (0i128, 1i128);
        let (mut k0, mut k1) = (1i128, 0i128);
        let mut r = x;
        for _ in 0..64 {
            let a = r.floor();
            if a.abs() > 1e15 {
                break;
            }
            let ai = a as i128;
            let h2 = ai * h1 + h0;
            let k2 = ai * k1 + k0;
            if k2 > max_den as i128 {
                break;
            }
            h0 = h1;
            h1 = h2;
            k0 = k1;
            k1 = k2;
            let frac = r - a;
            if frac.abs() < 1e-15 {
                break;
            }
            r = 1.0 / frac;
        }
        if k1 == 0 {
            return None;
        }
        Some(Rational(BigRational::new(BigInt::from(h1), BigInt::from(k1))))
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

#[derive(Debug, thiserror::Error)]
#[error("malformed rational literal `{0}`")]
pub struct ParseRationalError(String);

impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseRationalError(s.to_string());
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| err())?;
        let den: BigInt = den.parse().map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        Ok(Rational(BigRational::new(num, den)))
    }
}

impl Serialize for Rational {
    fn serialize<Se: Serializer>(&self, serializer: Se) -> Result<Se::Ok, Se::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Int(i64),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Repr::Int(n) => Ok(Rational::integer(n)),
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($tr::$method(self.0, rhs.0))
            }
        }
        impl<'a> $tr<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational($tr::$method(&self.0, &rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Rational(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for Rational {
    fn one() -> Self {
        Rational(BigRational::one())
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn sqrt_exact(&self) -> Option<Self> {
        if self.0.numer().sign() == num_bigint::Sign::Minus {
            return None;
        }
        let (n, d) = (self.0.numer().sqrt(), self.0.denom().sqrt());
        let r = Rational(BigRational::new(n, d));
        (r.square() == *self).then_some(r)
    }

    fn from_i64(n: i64) -> Self {
        Rational::integer(n)
    }

    fn ratio(num: i64, den: i64) -> Self {
        Rational::new(num, den)
    }

    fn from_f64(x: f64) -> Self {
        Rational(BigRational::from_float(x).unwrap_or_else(BigRational::zero))
    }

    fn to_f64(&self) -> f64 {
        // Scale down huge numerators/denominators before converting.
        match (self.0.numer().to_f64(), self.0.denom().to_f64()) {
            (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
            _ => {
                let bits = self.0.numer().bits().max(self.0.denom().bits());
                let shift = bits.saturating_sub(900);
                let n = (self.0.numer() >> shift).to_f64().unwrap_or(0.0);
                let d = (self.0.denom() >> shift).to_f64().unwrap_or(1.0);
                n / d
            }
        }
    }

    fn from_rational(x: &Rational) -> Self {
        x.clone()
    }

    fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    fn negligible(&self, _scale: f64) -> bool {
        self.0.is_zero()
    }
}

impl PartialEq<i64> for Rational {
    fn eq(&self, other: &i64) -> bool {
        self.0 == BigRational::from_integer(BigInt::from(*other))
    }
}

impl PartialOrd<i64> for Rational {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        self.0.partial_cmp(&BigRational::from_integer(BigInt::from(*other)))
    }
}

/// Largest absolute value of a slice, as `f64`. Used as the scale for
/// relative zero tests.
pub fn max_abs<S: Scalar>(xs: &[S]) -> f64 {
    xs.iter().map(|x| x.to_f64().abs()).fold(0.0, f64::max)
}

/// Converts a slice between scalar types through `f64` (float targets) or the
/// exact binary expansion (rational targets).
pub fn convert<S: Scalar, T: Scalar>(x: &S) -> T {
    T::from_f64(x.to_f64())
}
