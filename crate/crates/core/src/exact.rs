//! Exact arithmetic for algebra coefficients.
//!
//! Ladder products and secular-equation coefficients are rationals with `N²`
//! denominators. The one irrational ingredient is the shift `c`, whose square
//! is always rational, so products are kept as quadratic surds `a + b·√r`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_integer::Roots;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Exact rational.
pub type Q = Ratio<i128>;

pub fn q(n: i128, d: i128) -> Q {
    Q::new(n, d)
}

pub fn q_int(n: i128) -> Q {
    Q::from_integer(n)
}

pub fn q_to_f64(x: &Q) -> f64 {
    // Both parts stay far below 2^53 for every N we accept.
    x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN)
}

fn exact_sqrt_int(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let r = n.sqrt();
    (r * r == n).then_some(r)
}

/// Rational square root when one exists.
pub fn exact_sqrt(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    Some(Q::new(exact_sqrt_int(*x.numer())?, exact_sqrt_int(*x.denom())?))
}

/// A real number `sign · √square` with rational `square`.
///
/// This is the representation-label `c`: it is `0`, `±1/4`, or an irrational
/// root of a rational radicand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Shift {
    sign: i8,
    square: Q,
}

impl Shift {
    pub const ZERO: Shift = Shift { sign: 0, square: Ratio::new_raw(0, 1) };

    pub fn from_rational(c: Q) -> Self {
        let sign = if c.is_zero() { 0 } else if c.is_positive() { 1 } else { -1 };
        Shift { sign, square: c * c }
    }

    /// `sign · √square`. Returns `None` for a negative radicand.
    pub fn from_square(positive: bool, square: Q) -> Option<Self> {
        if square.is_negative() {
            return None;
        }
        let sign = match (square.is_zero(), positive) {
            (true, _) => 0,
            (false, true) => 1,
            (false, false) => -1,
        };
        Some(Shift { sign, square })
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn square(&self) -> Q {
        self.square
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn to_f64(&self) -> f64 {
        f64::from(self.sign) * q_to_f64(&self.square).sqrt()
    }

    pub fn as_rational(&self) -> Option<Q> {
        exact_sqrt(&self.square).map(|r| r * q_int(i128::from(self.sign)))
    }

    /// `self` as the surd `0 + sign·√square`.
    pub fn to_surd(&self) -> Surd {
        Surd::new(Q::zero(), q_int(i128::from(self.sign)), self.square)
    }
}

impl Neg for Shift {
    type Output = Shift;
    fn neg(self) -> Shift {
        Shift { sign: -self.sign, square: self.square }
    }
}

impl PartialOrd for Shift {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Shift {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.sign.cmp(&other.sign) {
            Ordering::Equal => match self.sign {
                0 => Ordering::Equal,
                1 => self.square.cmp(&other.square),
                _ => other.square.cmp(&self.square),
            },
            o => o,
        }
    }
}

impl fmt::Display for Shift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_rational() {
            Some(r) => write!(f, "{r}"),
            None => {
                let s = if self.sign < 0 { "-" } else { "" };
                write!(f, "{s}sqrt({})", self.square)
            }
        }
    }
}

/// Parses the forms produced by `Display`: `p/q`, `-p/q`, `sqrt(p/q)`, `-sqrt(p/q)`.
impl FromStr for Shift {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || Error::Parse(format!("not a shift label: {s:?}"));
        let t = s.trim();
        if t.len() > 80 {
            return Err(bad());
        }
        let (positive, body) = match t.strip_prefix('-') {
            Some(rest) => (false, rest),
            None => (true, t),
        };
        if let Some(inner) = body.strip_prefix("sqrt(").and_then(|b| b.strip_suffix(')')) {
            let square = parse_rational(inner).ok_or_else(bad)?;
            return Shift::from_square(positive, square).ok_or_else(bad);
        }
        let r = parse_rational(body).ok_or_else(bad)?;
        if r.is_negative() {
            return Err(bad());
        }
        Ok(Shift::from_rational(if positive { r } else { -r }))
    }
}

pub fn parse_rational(s: &str) -> Option<Q> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse::<i64>().ok()?, d.trim().parse::<i64>().ok()?),
        None => (s.parse::<i64>().ok()?, 1),
    };
    (d != 0).then(|| Q::new(i128::from(n), i128::from(d)))
}

/// `rational + coeff · √radicand` with a nonnegative rational radicand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Surd {
    pub rational: Q,
    pub coeff: Q,
    pub radicand: Q,
}

impl Surd {
    pub fn new(rational: Q, coeff: Q, radicand: Q) -> Self {
        debug_assert!(!radicand.is_negative());
        Surd { rational, coeff, radicand }
    }

    pub fn from_rational(r: Q) -> Self {
        Surd { rational: r, coeff: Q::zero(), radicand: Q::zero() }
    }

    /// Exact sign: -1, 0 or 1.
    pub fn signum(&self) -> i8 {
        let sgn = |x: &Q| -> i8 {
            if x.is_zero() {
                0
            } else if x.is_positive() {
                1
            } else {
                -1
            }
        };
        let a = sgn(&self.rational);
        let b = if self.radicand.is_zero() { 0 } else { sgn(&self.coeff) };
        if b == 0 || a == b {
            return if a == 0 { b } else { a };
        }
        if a == 0 {
            return b;
        }
        let lhs = self.rational * self.rational;
        let rhs = self.coeff * self.coeff * self.radicand;
        match lhs.cmp(&rhs) {
            Ordering::Greater => a,
            Ordering::Equal => 0,
            Ordering::Less => b,
        }
    }

    pub fn as_rational(&self) -> Option<Q> {
        if self.coeff.is_zero() {
            return Some(self.rational);
        }
        exact_sqrt(&self.radicand).map(|r| self.rational + self.coeff * r)
    }

    pub fn to_f64(&self) -> f64 {
        q_to_f64(&self.rational) + q_to_f64(&self.coeff) * q_to_f64(&self.radicand).sqrt()
    }

    pub fn scale(self, k: Q) -> Surd {
        Surd { rational: self.rational * k, coeff: self.coeff * k, radicand: self.radicand }
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_rational() {
            Some(r) => write!(f, "{r}"),
            None => write!(f, "{} + {}*sqrt({})", self.rational, self.coeff, self.radicand),
        }
    }
}

/// Polynomial in `t = δ²` with rational coefficients, lowest power first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DeltaPoly(Vec<Q>);

impl DeltaPoly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        DeltaPoly(coeffs)
    }

    pub fn constant(c: Q) -> Self {
        DeltaPoly::new(vec![c])
    }

    /// `k·δ²`.
    pub fn delta_sq(k: Q) -> Self {
        DeltaPoly::new(vec![Q::zero(), k])
    }

    pub fn zero() -> Self {
        DeltaPoly(Vec::new())
    }

    pub fn one() -> Self {
        DeltaPoly::constant(Q::one())
    }

    /// Coefficient of `δ^(2·power)`.
    pub fn coeff(&self, power: usize) -> Q {
        self.0.get(power).copied().unwrap_or_else(Q::zero)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn eval(&self, delta: f64) -> f64 {
        let t = delta * delta;
        self.0.iter().rev().fold(0.0, |acc, c| acc * t + q_to_f64(c))
    }

    pub fn scale(&self, k: Q) -> DeltaPoly {
        DeltaPoly::new(self.0.iter().map(|c| c * k).collect())
    }
}

impl Add for &DeltaPoly {
    type Output = DeltaPoly;
    fn add(self, rhs: &DeltaPoly) -> DeltaPoly {
        let n = self.0.len().max(rhs.0.len());
        DeltaPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &DeltaPoly {
    type Output = DeltaPoly;
    fn sub(self, rhs: &DeltaPoly) -> DeltaPoly {
        let n = self.0.len().max(rhs.0.len());
        DeltaPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &DeltaPoly {
    type Output = DeltaPoly;
    fn mul(self, rhs: &DeltaPoly) -> DeltaPoly {
        if self.is_zero() || rhs.is_zero() {
            return DeltaPoly::zero();
        }
        let mut out = vec![Q::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        DeltaPoly::new(out)
    }
}

impl fmt::Display for DeltaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (p, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match p {
                0 => write!(f, "{mag}")?,
                _ if mag.is_one() => write!(f, "d^{}", 2 * p)?,
                _ => write!(f, "{mag} d^{}", 2 * p)?,
            }
        }
        Ok(())
    }
}
