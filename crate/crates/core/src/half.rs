//! Half-integer quantum numbers stored as exact twice-values.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use crate::error::Error;
use crate::exact::Q;

/// A half-integer `k/2`, stored as the integer `k`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Half(i64);

impl Half {
    pub const ZERO: Half = Half(0);

    /// Builds the half-integer whose double is `twice`.
    pub const fn from_twice(twice: i64) -> Self {
        Half(twice)
    }

    pub const fn from_int(n: i64) -> Self {
        Half(2 * n)
    }

    pub const fn twice(self) -> i64 {
        self.0
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// True when `self - other` is an integer.
    pub const fn same_parity(self, other: Half) -> bool {
        (self.0 - other.0) % 2 == 0
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn to_rational(self) -> Q {
        Q::new(self.0 as i128, 2)
    }

    pub fn abs(self) -> Half {
        Half(self.0.abs())
    }

    /// `self, self - 1, ..., down to` inclusive. Empty if `to > self`.
    pub fn down_to(self, to: Half) -> impl Iterator<Item = Half> {
        let top = self.0;
        let bottom = to.0;
        (0..)
            .map(move |k| Half(top - 2 * k))
            .take_while(move |h| h.0 >= bottom)
    }
}

impl Add for Half {
    type Output = Half;
    fn add(self, rhs: Half) -> Half {
        Half(self.0 + rhs.0)
    }
}

impl Sub for Half {
    type Output = Half;
    fn sub(self, rhs: Half) -> Half {
        Half(self.0 - rhs.0)
    }
}

impl Neg for Half {
    type Output = Half;
    fn neg(self) -> Half {
        Half(-self.0)
    }
}

impl PartialEq<i64> for Half {
    fn eq(&self, other: &i64) -> bool {
        self.0 == 2 * other
    }
}

impl PartialOrd<i64> for Half {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        self.0.partial_cmp(&(2 * other))
    }
}

/// Prints integers plainly and odd halves as `k/2`.
impl fmt::Display for Half {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Accepts `n`, `-n`, `k/2` and decimal forms ending in `.0` or `.5`.
impl FromStr for Half {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || Error::Parse(format!("not a half-integer: {s:?}"));
        let t = s.trim();
        if t.is_empty() || t.len() > 40 {
            return Err(bad());
        }
        if let Some((num, den)) = t.split_once('/') {
            let num: i64 = num.trim().parse().map_err(|_| bad())?;
            let den: i64 = den.trim().parse().map_err(|_| bad())?;
            return match den {
                1 => num.checked_mul(2).map(Half).ok_or_else(bad),
                2 => Ok(Half(num)),
                _ => Err(bad()),
            };
        }
        if let Some((int, frac)) = t.split_once('.') {
            let neg = int.starts_with('-');
            let whole: i64 = if int == "-" || int.is_empty() {
                0
            } else {
                int.parse().map_err(|_| bad())?
            };
            let frac = frac.trim_end_matches('0');
            let half = match frac {
                "" => 0,
                "5" => 1,
                _ => return Err(bad()),
            };
            let twice = whole.checked_mul(2).ok_or_else(bad)?;
            return Ok(Half(if neg { twice - half } else { twice + half }));
        }
        let n: i64 = t.parse().map_err(|_| bad())?;
        n.checked_mul(2).map(Half).ok_or_else(bad)
    }
}
