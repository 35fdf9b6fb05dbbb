use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An exact rational number in canonical reduced form.
pub type Rational = BigRational;

/// A domain element.
///
/// Ordered families (thresholds, finite-support over the naturals) use exact
/// rationals; explicit classes may use opaque names. Strings that parse as
/// integers or `p/q` fractions always become [`Point::Value`], so `"3"` and
/// `3` denote the same point.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Named(String),
    Value(Rational),
}

impl Point {
    pub fn named(name: impl Into<String>) -> Self {
        Point::Named(name.into())
    }

    pub fn int(v: i64) -> Self {
        Point::Value(Rational::from_integer(BigInt::from(v)))
    }

    pub fn ratio(numer: i64, denom: i64) -> Self {
        Point::Value(Rational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn value(&self) -> Option<&Rational> {
        match self {
            Point::Value(v) => Some(v),
            Point::Named(_) => None,
        }
    }

    /// The point as a positive integer, if it is one.
    pub fn positive_integer(&self) -> Option<u64> {
        let v = self.value()?;
        if !v.is_integer() || !v.is_positive() {
            return None;
        }
        u64::try_from(v.to_integer()).ok()
    }
}

/// Parses `p/q` or an integer into a reduced rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).ok()?;
    let den = BigInt::from_str(den).ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

pub fn format_rational(v: &Rational) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

impl From<&str> for Point {
    fn from(s: &str) -> Self {
        match parse_rational(s) {
            Some(v) => Point::Value(v),
            None => Point::Named(s.to_string()),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Named(s) => f.write_str(s),
            Point::Value(v) => f.write_str(&format_rational(v)),
        }
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        match serde_json::Value::deserialize(deserializer)? {
            serde_json::Value::String(s) => Ok(Point::from(s.as_str())),
            serde_json::Value::Number(n) => n
                .as_i64()
                .map(Point::int)
                .ok_or_else(|| serde::de::Error::custom(format!("point {n} is not an integer; use a \"p/q\" string"))),
            other => Err(serde::de::Error::custom(format!("invalid point {other}"))),
        }
    }
}
