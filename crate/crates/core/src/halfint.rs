//! Exact half-integers stored as twice their value.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// A number in `(1/2)Z`, stored as `twice_value`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HalfInt {
    twice_value: i64,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice_value: 0 };

    pub const fn from_twice(twice_value: i64) -> Self {
        HalfInt { twice_value }
    }

    pub const fn from_int(value: i64) -> Self {
        HalfInt { twice_value: 2 * value }
    }

    pub const fn twice(self) -> i64 {
        self.twice_value
    }

    pub const fn is_integer(self) -> bool {
        self.twice_value % 2 == 0
    }

    /// The integer value if this half-integer is integral.
    pub fn to_int(self) -> Option<i64> {
        self.is_integer().then_some(self.twice_value / 2)
    }

    /// Smallest integer `>= self`.
    pub fn ceil(self) -> i64 {
        self.twice_value.div_euclid(2) + self.twice_value.rem_euclid(2)
    }

    /// Largest integer `<= self`.
    pub fn floor(self) -> i64 {
        self.twice_value.div_euclid(2)
    }

    /// Parses `3`, `-1`, `5/2` or `-1/2`.
    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        match s.split_once('/') {
            None => s.parse::<i64>().ok().map(HalfInt::from_int),
            Some((num, "2")) => num.trim().parse::<i64>().ok().map(HalfInt::from_twice),
            Some(_) => None,
        }
    }
}

impl From<i64> for HalfInt {
    fn from(v: i64) -> Self {
        HalfInt::from_int(v)
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt::from_twice(self.twice_value + rhs.twice_value)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt::from_twice(self.twice_value - rhs.twice_value)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt::from_twice(-self.twice_value)
    }
}

impl Mul<i64> for HalfInt {
    type Output = HalfInt;
    fn mul(self, rhs: i64) -> HalfInt {
        HalfInt::from_twice(self.twice_value * rhs)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_int() {
            Some(v) => write!(f, "{v}"),
            None => write!(f, "{}/2", self.twice_value),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_is_exact() {
        let a = HalfInt::from_twice(1);
        assert_eq!(a + a, HalfInt::from_int(1));
        assert_eq!((a * 3).to_string(), "3/2");
        assert_eq!(HalfInt::from_twice(-3).floor(), -2);
        assert_eq!(HalfInt::from_twice(-3).ceil(), -1);
        assert_eq!(HalfInt::from_twice(5).ceil(), 3);
        assert!(HalfInt::from_twice(1) < HalfInt::from_int(1));
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["0", "7", "-4", "5/2", "-1/2"] {
            assert_eq!(HalfInt::parse(s).unwrap().to_string(), s);
        }
        assert!(HalfInt::parse("1/3").is_none());
    }
}
