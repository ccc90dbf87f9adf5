//! Exact rational coordinates.
//!
//! Every x-coordinate and height in the crate is a [`Coord`]. Values are kept
//! in reduced form with a positive denominator, so structural equality is
//! numeric equality and the derived ordering is the numeric ordering.

use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An exact rational number.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Coord(BigRational);

impl Coord {
    pub fn from_int(value: i64) -> Self {
        Coord(BigRational::from_integer(BigInt::from(value)))
    }

    /// Builds `numerator / denominator`. Returns `None` for a zero denominator.
    pub fn new(numerator: i64, denominator: i64) -> Option<Self> {
        Self::from_big(BigInt::from(numerator), BigInt::from(denominator))
    }

    pub fn from_big(numerator: BigInt, denominator: BigInt) -> Option<Self> {
        if denominator.is_zero() {
            return None;
        }
        Some(Coord(BigRational::new(numerator, denominator)))
    }

    pub fn zero() -> Self {
        Coord(BigRational::zero())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    /// The exact midpoint `(self + other) / 2`.
    pub fn midpoint(&self, other: &Coord) -> Coord {
        let two = BigRational::from_integer(BigInt::from(2));
        Coord((&self.0 + &other.0) / two)
    }

    pub fn add_int(&self, delta: i64) -> Coord {
        Coord(&self.0 + BigRational::from_integer(BigInt::from(delta)))
    }

    /// Nearest `f64`, for drawing only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// The value as an `i64` when it is an integer that fits.
    pub fn to_i64(&self) -> Option<i64> {
        if self.0.denom().is_one() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }
}

impl PartialOrd for Coord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Coord {
    fn cmp(&self, other: &Self) -> Ordering {
        // Small integers and halves dominate in practice; compare those
        // without touching the big-integer division path.
        if let (Some(a), Some(b)) = (small(self), small(other)) {
            return (a.0 as i128 * b.1 as i128).cmp(&(b.0 as i128 * a.1 as i128));
        }
        self.0.cmp(&other.0)
    }
}

fn small(c: &Coord) -> Option<(i64, i64)> {
    Some((c.0.numer().to_i64()?, c.0.denom().to_i64()?))
}

impl From<i64> for Coord {
    fn from(value: i64) -> Self {
        Coord::from_int(value)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid coordinate `{0}`: expected an integer or `p/q`")]
pub struct ParseCoordError(pub alloc::string::String);

/// Parses `p` or `p/q` in decimal.
impl core::str::FromStr for Coord {
    type Err = ParseCoordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseCoordError(s.into());
        let t = s.trim();
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        Coord::from_big(n, d).ok_or_else(bad)
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A coordinate on the extended real line.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Extended {
    NegInf,
    Finite(Coord),
    PosInf,
}

impl Extended {
    pub fn finite(&self) -> Option<&Coord> {
        match self {
            Extended::Finite(c) => Some(c),
            _ => None,
        }
    }

    pub fn lt_coord(&self, x: &Coord) -> bool {
        match self {
            Extended::NegInf => true,
            Extended::Finite(c) => c < x,
            Extended::PosInf => false,
        }
    }

    pub fn gt_coord(&self, x: &Coord) -> bool {
        match self {
            Extended::NegInf => false,
            Extended::Finite(c) => c > x,
            Extended::PosInf => true,
        }
    }
}

impl From<Coord> for Extended {
    fn from(c: Coord) -> Self {
        Extended::Finite(c)
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::NegInf => f.write_str("-inf"),
            Extended::Finite(c) => write!(f, "{c}"),
            Extended::PosInf => f.write_str("+inf"),
        }
    }
}
