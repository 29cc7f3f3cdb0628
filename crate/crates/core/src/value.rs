//! Exact rational scalars.
//!
//! Every quantity in the simulator (coalition values, bounds, thresholds,
//! allocations, bank balances, ratios) is a [`Value`]: an arbitrary-precision
//! rational kept in lowest terms. There is no floating point anywhere in the
//! simulation path; ties and perturbation arguments depend on exact equality.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

/// An exact rational number. Denominator is always positive and the fraction
/// is stored in lowest terms (both guaranteed by the underlying representation).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Value(BigRational);

impl Value {
    pub fn zero() -> Self {
        Value(BigRational::zero())
    }

    pub fn one() -> Self {
        Value(BigRational::one())
    }

    pub fn integer(n: i64) -> Self {
        Value(BigRational::from_integer(BigInt::from(n)))
    }

    /// Builds `num/den`. Panics if `den == 0`; normalizes sign and reduces.
    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Value(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_big(r: BigRational) -> Self {
        Value(r)
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn abs(&self) -> Self {
        Value(self.0.abs())
    }

    /// Largest integer `k` with `k <= self`.
    pub fn floor_int(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// Smallest integer `k` with `k >= self`.
    pub fn ceil_int(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    /// Lossy conversion for display purposes only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }
}

/// Rational lower bound on the square root of a nonnegative rational.
///
/// Returns `r <= sqrt(x)` with relative error at most `1/scale`: with
/// `x = p/q`, `r = floor(sqrt(p*q*scale^2)) / (q*scale)` and the floor loses
/// at most `1/(q*scale) <= sqrt(x)/scale`.
pub fn sqrt_lower(x: &Value, scale: u64) -> Value {
    assert!(!x.is_negative(), "sqrt of negative value");
    assert!(scale > 0);
    if x.is_zero() {
        return Value::zero();
    }
    let p = x.numer().clone();
    let q = x.denom().clone();
    let k = BigInt::from(scale);
    let root = (&p * &q * &k * &k).sqrt();
    Value(BigRational::new(root, q * k))
}

/// Rational upper bound on the square root, same construction with the floor
/// bumped by one.
pub fn sqrt_upper(x: &Value, scale: u64) -> Value {
    assert!(!x.is_negative(), "sqrt of negative value");
    assert!(scale > 0);
    if x.is_zero() {
        return Value::zero();
    }
    let p = x.numer().clone();
    let q = x.denom().clone();
    let k = BigInt::from(scale);
    let root = (&p * &q * &k * &k).sqrt() + 1;
    Value(BigRational::new(root, q * k))
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Value {
            type Output = Value;
            fn $method(self, rhs: Value) -> Value {
                Value((self.0).$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Value> for Value {
            type Output = Value;
            fn $method(self, rhs: &'a Value) -> Value {
                Value((self.0).$method(&rhs.0))
            }
        }
        impl<'a> $trait<&'a Value> for &'a Value {
            type Output = Value;
            fn $method(self, rhs: &'a Value) -> Value {
                Value((&self.0).$method(&rhs.0))
            }
        }
        impl<'a> $trait<Value> for &'a Value {
            type Output = Value;
            fn $method(self, rhs: Value) -> Value {
                Value((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Div for Value {
    type Output = Value;
    fn div(self, rhs: Value) -> Value {
        assert!(!rhs.is_zero(), "division by zero");
        Value(self.0 / rhs.0)
    }
}

impl<'a> Div<&'a Value> for &'a Value {
    type Output = Value;
    fn div(self, rhs: &'a Value) -> Value {
        assert!(!rhs.is_zero(), "division by zero");
        Value(&self.0 / &rhs.0)
    }
}

impl Neg for Value {
    type Output = Value;
    fn neg(self) -> Value {
        Value(-self.0)
    }
}

impl AddAssign<Value> for Value {
    fn add_assign(&mut self, rhs: Value) {
        self.0 += rhs.0;
    }
}

impl<'a> AddAssign<&'a Value> for Value {
    fn add_assign(&mut self, rhs: &'a Value) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<Value> for Value {
    fn sub_assign(&mut self, rhs: Value) {
        self.0 -= rhs.0;
    }
}

impl<'a> SubAssign<&'a Value> for Value {
    fn sub_assign(&mut self, rhs: &'a Value) {
        self.0 -= &rhs.0;
    }
}

impl Mul<u64> for &Value {
    type Output = Value;
    fn mul(self, rhs: u64) -> Value {
        Value(&self.0 * BigInt::from(rhs))
    }
}

impl Mul<u64> for Value {
    type Output = Value;
    fn mul(self, rhs: u64) -> Value {
        Value(self.0 * BigInt::from(rhs))
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Parse error for the `"p/q"` rational syntax.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational {input:?}: {reason}")]
pub struct ParseValueError {
    pub input: String,
    pub reason: String,
}

impl FromStr for Value {
    type Err = ParseValueError;

    /// Accepts `"p"` or `"p/q"` with arbitrary-precision integers and `q > 0`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| ParseValueError {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let t = s.trim();
        let (num_s, den_s) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (t, None),
        };
        let num = BigInt::from_str(num_s).map_err(|_| err("bad numerator"))?;
        let den = match den_s {
            Some(d) => BigInt::from_str(d).map_err(|_| err("bad denominator"))?,
            None => BigInt::one(),
        };
        if den.is_zero() {
            return Err(err("zero denominator"));
        }
        if den.is_negative() {
            return Err(err("denominator must be positive"));
        }
        Ok(Value(BigRational::new(num, den)))
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Value {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}
