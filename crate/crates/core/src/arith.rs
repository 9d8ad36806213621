//! Exact integer helpers and the quarter-integer value type.
//!
//! Every invariant computed by this crate lives in (1/4)Z, so values are
//! stored as a single integer equal to four times the value. All arithmetic
//! is checked; overflow surfaces as [`ArithError::Overflow`].

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("floor_half expects a nonnegative argument, got {0}")]
    NegativeHalf(i128),
    #[error("two_adic_split expects a positive argument, got {0}")]
    NonPositive(i128),
    #[error("gcd of an all-zero list is undefined")]
    AllZero,
    #[error("{0} is not a multiple of 1/4")]
    NotQuarter(String),
}

pub type Result<T> = std::result::Result<T, ArithError>;

pub(crate) fn add(a: i128, b: i128) -> Result<i128> {
    a.checked_add(b).ok_or(ArithError::Overflow("add"))
}

pub(crate) fn sub(a: i128, b: i128) -> Result<i128> {
    a.checked_sub(b).ok_or(ArithError::Overflow("sub"))
}

pub(crate) fn mul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or(ArithError::Overflow("mul"))
}

pub(crate) fn abs(a: i128) -> Result<i128> {
    a.checked_abs().ok_or(ArithError::Overflow("abs"))
}

/// `⌊n/2⌋` for `n ≥ 0`.
pub fn floor_half(n: i128) -> Result<i128> {
    if n < 0 {
        return Err(ArithError::NegativeHalf(n));
    }
    Ok(n / 2)
}

/// Splits `n = 2^valuation · odd_part`.
pub fn two_adic_split(n: i128) -> Result<(u32, i128)> {
    if n <= 0 {
        return Err(ArithError::NonPositive(n));
    }
    let valuation = n.trailing_zeros();
    Ok((valuation, n >> valuation))
}

pub fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    // i128::MIN is the only value whose magnitude does not fit back.
    i128::try_from(a).unwrap_or(i128::MAX)
}

pub fn gcd_all(values: &[i128]) -> Result<i128> {
    let g = values.iter().fold(0, |acc, &v| gcd(acc, v));
    if g == 0 {
        Err(ArithError::AllZero)
    } else {
        Ok(g)
    }
}

pub fn lcm(a: i128, b: i128) -> Result<i128> {
    if a == 0 || b == 0 {
        return Ok(0);
    }
    abs(mul(a / gcd(a, b), b)?)
}

pub fn lcm_all(values: &[i128]) -> Result<i128> {
    values.iter().try_fold(1, |acc, &v| lcm(acc, v))
}

/// An exact element of (1/4)Z.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct QuarterRational {
    quarters: i64,
}

impl QuarterRational {
    pub const ZERO: QuarterRational = QuarterRational { quarters: 0 };

    pub const fn from_quarters(quarters: i64) -> Self {
        QuarterRational { quarters }
    }

    pub fn from_quarters_wide(quarters: i128) -> Result<Self> {
        i64::try_from(quarters)
            .map(Self::from_quarters)
            .map_err(|_| ArithError::Overflow("quarter-rational range"))
    }

    pub fn from_int(n: i128) -> Result<Self> {
        Self::from_quarters_wide(mul(n, 4)?)
    }

    /// Value `numerator / denominator`, which must land in (1/4)Z.
    pub fn from_ratio(numerator: i128, denominator: i128) -> Result<Self> {
        let scaled = mul(numerator, 4)?;
        if denominator == 0 || scaled % denominator != 0 {
            return Err(ArithError::NotQuarter(format!("{numerator}/{denominator}")));
        }
        Self::from_quarters_wide(scaled / denominator)
    }

    /// Four times the value.
    pub const fn quarters(self) -> i64 {
        self.quarters
    }

    pub fn is_integer(self) -> bool {
        self.quarters % 4 == 0
    }

    /// The integer value, if the denominator is 1.
    pub fn to_integer(self) -> Option<i64> {
        self.is_integer().then_some(self.quarters / 4)
    }

    /// Reduced `(numerator, denominator)` with denominator in {1, 2, 4}.
    pub fn reduced(self) -> (i64, i64) {
        let g = gcd(self.quarters as i128, 4).max(1) as i64;
        (self.quarters / g, 4 / g)
    }

    pub fn checked_add(self, other: Self) -> Result<Self> {
        self.quarters
            .checked_add(other.quarters)
            .map(Self::from_quarters)
            .ok_or(ArithError::Overflow("quarter add"))
    }

    pub fn checked_sub(self, other: Self) -> Result<Self> {
        self.quarters
            .checked_sub(other.quarters)
            .map(Self::from_quarters)
            .ok_or(ArithError::Overflow("quarter sub"))
    }

    pub fn checked_neg(self) -> Result<Self> {
        self.quarters
            .checked_neg()
            .map(Self::from_quarters)
            .ok_or(ArithError::Overflow("quarter neg"))
    }

    pub fn checked_scale(self, k: i64) -> Result<Self> {
        self.quarters
            .checked_mul(k)
            .map(Self::from_quarters)
            .ok_or(ArithError::Overflow("quarter scale"))
    }

    /// Exact division by a positive integer; fails if the quotient leaves (1/4)Z.
    pub fn checked_div_int(self, k: i64) -> Result<Self> {
        if k == 0 || self.quarters % k != 0 {
            return Err(ArithError::NotQuarter(format!("({self})/{k}")));
        }
        Ok(Self::from_quarters(self.quarters / k))
    }

    pub fn is_negative(self) -> bool {
        self.quarters < 0
    }
}

impl PartialOrd for QuarterRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuarterRational {
    fn cmp(&self, other: &Self) -> Ordering {
        self.quarters.cmp(&other.quarters)
    }
}

impl fmt::Display for QuarterRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.reduced() {
            (n, 1) => write!(f, "{n}"),
            (n, d) => write!(f, "{n}/{d}"),
        }
    }
}

impl FromStr for QuarterRational {
    type Err = ArithError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || ArithError::NotQuarter(s.to_string());
        let (num, den) = match s.trim().split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let num: i128 = num.parse().map_err(|_| bad())?;
        let den: i128 = den.parse().map_err(|_| bad())?;
        if den <= 0 {
            return Err(bad());
        }
        Self::from_ratio(num, den)
    }
}

impl Serialize for QuarterRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for QuarterRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Sums a sequence of quarter values with overflow checking.
pub fn sum_quarters<I: IntoIterator<Item = QuarterRational>>(items: I) -> Result<QuarterRational> {
    items
        .into_iter()
        .try_fold(QuarterRational::ZERO, QuarterRational::checked_add)
}
