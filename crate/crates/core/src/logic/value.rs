//! Exact truth values in `[0, 1]`, with `0` meaning true and `1` meaning false.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::LogicError;

/// An exact rational truth value `q` with `0 <= q <= 1`.
///
/// The underlying ratio is always in lowest terms with a positive
/// denominator, so structural equality coincides with numeric equality.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Value(Ratio<i64>);

impl Value {
    pub const ZERO: Value = Value(Ratio::new_raw(0, 1));
    pub const ONE: Value = Value(Ratio::new_raw(1, 1));
    pub const HALF: Value = Value(Ratio::new_raw(1, 2));

    pub fn new(numer: i64, denom: i64) -> Result<Self, LogicError> {
        if denom == 0 {
            return Err(LogicError::ValueOutOfRange(format!("{numer}/0")));
        }
        Self::from_ratio(Ratio::new(numer, denom))
    }

    pub fn from_ratio(r: Ratio<i64>) -> Result<Self, LogicError> {
        if r < Ratio::zero() || r > Ratio::one() {
            return Err(LogicError::ValueOutOfRange(r.to_string()));
        }
        Ok(Value(r))
    }

    /// `j / 2^k`; panics if out of range (callers pass grid indices).
    pub fn dyadic(j: i64, k: u32) -> Self {
        Self::new(j, 1i64 << k).expect("dyadic grid point out of [0,1]")
    }

    pub fn ratio(self) -> Ratio<i64> {
        self.0
    }

    pub fn numer(self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(self) -> i64 {
        *self.0.denom()
    }

    pub fn is_zero(self) -> bool {
        self.0.is_zero()
    }

    pub fn is_dyadic(self) -> bool {
        let d = self.denom();
        d > 0 && (d & (d - 1)) == 0
    }

    /// `max(self - other, 0)`.
    pub fn trunc_sub(self, other: Value) -> Value {
        if self <= other {
            Value::ZERO
        } else {
            Value(self.0 - other.0)
        }
    }

    /// `min(self + other, 1)`.
    pub fn trunc_add(self, other: Value) -> Value {
        let s = self.0 + other.0;
        if s >= Ratio::one() {
            Value::ONE
        } else {
            Value(s)
        }
    }

    pub fn half(self) -> Value {
        Value(self.0 / 2)
    }

    /// `1 - self`.
    pub fn complement(self) -> Value {
        Value(Ratio::one() - self.0)
    }

    /// Largest `j / 2^bits` not exceeding `self`.
    pub fn floor_dyadic(self, bits: u32) -> Value {
        let scale = 1i64 << bits;
        let j = (self.0 * scale).floor().to_integer();
        Value::dyadic(j, bits)
    }

    /// Closest `f64`, for display and plotting only.
    pub fn to_f64(self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Value {
    type Err = LogicError;

    /// Accepts `n`, `n/d` and `n/2^k`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || LogicError::BadLiteral(s.to_string());
        let (num, den) = match s.split_once('/') {
            None => (s, "1"),
            Some((n, d)) => (n.trim(), d.trim()),
        };
        let numer: i64 = num.parse().map_err(|_| bad())?;
        let denom: i64 = match den.split_once('^') {
            Some((base, exp)) => {
                let base: i64 = base.trim().parse().map_err(|_| bad())?;
                let exp: u32 = exp.trim().parse().map_err(|_| bad())?;
                base.checked_pow(exp).ok_or_else(bad)?
            }
            None => den.parse().map_err(|_| bad())?,
        };
        Value::new(numer, denom)
    }
}

impl Serialize for Value {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Value {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
