//! Exact and approximate numeric values used for lengths and costs.
//!
//! Lengths are always exact. Costs are exact rationals unless the cost
//! function itself is transcendental (logarithms, non-integer powers), in
//! which case they are carried as `f64`.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

/// Exact rational number.
pub type Rational = BigRational;

/// Relative tolerance used when comparing approximate costs.
pub const APPROX_REL_TOL: f64 = 1e-9;

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn integer(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Value in half-units as a rational (`half / 2`).
pub fn from_half_units(half: u64) -> Rational {
    Rational::new(BigInt::from(half), BigInt::from(2))
}

/// Canonical `p/q` rendering; integers keep the `/1` denominator.
pub fn fmt_exact(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// Decimal rendering when the expansion terminates, `p/q` otherwise.
pub fn fmt_decimal(value: &Rational) -> String {
    let mut denom = value.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let mut twos = 0u32;
    let mut fives = 0u32;
    while denom.is_even() {
        denom /= &two;
        twos += 1;
    }
    while (&denom % &five).is_zero() {
        denom /= &five;
        fives += 1;
    }
    if !denom.is_one() {
        return format!("{}/{}", value.numer(), value.denom());
    }
    let digits = twos.max(fives);
    if digits == 0 {
        return value.numer().to_string();
    }
    let scaled = value * Rational::from_integer(BigInt::from(10).pow(digits));
    let scaled = scaled.to_integer();
    let negative = scaled.is_negative();
    let mut text = scaled.abs().to_string();
    let width = digits as usize + 1;
    if text.len() < width {
        text = format!("{}{}", "0".repeat(width - text.len()), text);
    }
    let (int_part, frac_part) = text.split_at(text.len() - digits as usize);
    format!("{}{}.{}", if negative { "-" } else { "" }, int_part, frac_part)
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// A cost: exact when possible, approximate for transcendental cost functions.
#[derive(Clone, Debug, PartialEq)]
pub enum CostValue {
    Exact(Rational),
    Approx(f64),
}

impl CostValue {
    pub fn zero() -> Self {
        CostValue::Exact(Rational::zero())
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, CostValue::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            CostValue::Exact(r) => Some(r),
            CostValue::Approx(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            CostValue::Exact(r) => to_f64(r),
            CostValue::Approx(x) => *x,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            CostValue::Exact(r) => r.is_negative(),
            CostValue::Approx(x) => *x < 0.0,
        }
    }

    /// Total order; exact values compare exactly, anything involving an
    /// approximate value compares with a relative tolerance.
    pub fn compare(&self, other: &CostValue) -> Ordering {
        match (self, other) {
            (CostValue::Exact(a), CostValue::Exact(b)) => a.cmp(b),
            _ => approx_cmp(self.to_f64(), other.to_f64()),
        }
    }

    /// Exact equality for exact values, tolerance otherwise.
    pub fn same_as(&self, other: &CostValue) -> bool {
        self.compare(other) == Ordering::Equal
    }

    pub fn scale(&self, factor: &Rational) -> CostValue {
        match self {
            CostValue::Exact(r) => CostValue::Exact(r * factor),
            CostValue::Approx(x) => CostValue::Approx(x * to_f64(factor)),
        }
    }

    /// Human-readable rendering: terminating decimals or `p/q` for exact
    /// values, twelve significant digits for approximate ones.
    pub fn display(&self) -> String {
        match self {
            CostValue::Exact(r) => fmt_decimal(r),
            CostValue::Approx(x) => format!("{:.12}", x),
        }
    }
}

pub(crate) fn approx_cmp(a: f64, b: f64) -> Ordering {
    let scale = a.abs().max(b.abs()).max(1.0);
    if (a - b).abs() <= APPROX_REL_TOL * scale {
        Ordering::Equal
    } else if a < b {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

impl fmt::Display for CostValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

impl From<Rational> for CostValue {
    fn from(r: Rational) -> Self {
        CostValue::Exact(r)
    }
}

impl Add for CostValue {
    type Output = CostValue;

    fn add(self, rhs: CostValue) -> CostValue {
        match (self, rhs) {
            (CostValue::Exact(a), CostValue::Exact(b)) => CostValue::Exact(a + b),
            (a, b) => CostValue::Approx(a.to_f64() + b.to_f64()),
        }
    }
}

impl<'a> Add<&'a CostValue> for CostValue {
    type Output = CostValue;

    fn add(self, rhs: &'a CostValue) -> CostValue {
        match (self, rhs) {
            (CostValue::Exact(a), CostValue::Exact(b)) => CostValue::Exact(a + b),
            (a, b) => CostValue::Approx(a.to_f64() + b.to_f64()),
        }
    }
}

impl Mul<&Rational> for &CostValue {
    type Output = CostValue;

    fn mul(self, rhs: &Rational) -> CostValue {
        self.scale(rhs)
    }
}

impl Sum for CostValue {
    fn sum<I: Iterator<Item = CostValue>>(iter: I) -> CostValue {
        iter.fold(CostValue::zero(), |acc, x| acc + x)
    }
}

impl Serialize for CostValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Number", 2)?;
        match self {
            CostValue::Exact(r) => s.serialize_field("exact", &Some(fmt_exact(r)))?,
            CostValue::Approx(_) => s.serialize_field("exact", &None::<String>)?,
        }
        s.serialize_field("decimal", &self.to_f64())?;
        s.end()
    }
}

/// Serialize an exact rational as `{"exact": "p/q", "decimal": x}`.
pub fn serialize_rational<S: Serializer>(value: &Rational, serializer: S) -> Result<S::Ok, S::Error> {
    CostValue::Exact(value.clone()).serialize(serializer)
}

/// Parse `"3"`, `"-1.25"` or `"7/2"` into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((p, q)) = text.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    if let Some((int_part, frac_part)) = text.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = int_part.starts_with('-');
        let int_digits = int_part.trim_start_matches(['-', '+']);
        if !int_digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let digits: BigInt = format!("{}{}", int_digits, frac_part).parse().ok()?;
        let denom = BigInt::from(10).pow(frac_part.len() as u32);
        let value = Rational::new(digits, denom);
        return Some(if negative { -value } else { value });
    }
    let value: BigInt = text.parse().ok()?;
    Some(Rational::from_integer(value))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_rendering() {
        assert_eq!(fmt_decimal(&rational(39, 2)), "19.5");
        assert_eq!(fmt_decimal(&integer(6)), "6");
        assert_eq!(fmt_decimal(&rational(17, 10)), "1.7");
        assert_eq!(fmt_decimal(&rational(1, 3)), "1/3");
        assert_eq!(fmt_decimal(&rational(-1, 40)), "-0.025");
        assert_eq!(fmt_exact(&integer(4)), "4/1");
    }

    #[test]
    fn parse_rationals() {
        assert_eq!(parse_rational("7/2"), Some(rational(7, 2)));
        assert_eq!(parse_rational("1.25"), Some(rational(5, 4)));
        assert_eq!(parse_rational("-0.5"), Some(rational(-1, 2)));
        assert_eq!(parse_rational("12"), Some(integer(12)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational("1."), None);
    }

    #[test]
    fn mixed_arithmetic_degrades_to_approx() {
        let a = CostValue::Exact(rational(1, 2));
        let b = CostValue::Approx(0.25);
        assert_eq!(a.clone() + b, CostValue::Approx(0.75));
        assert!((a.clone() + a).is_exact());
    }

    #[test]
    fn approximate_comparison_tolerates_rounding() {
        let a = CostValue::Approx(0.1 + 0.2);
        let b = CostValue::Approx(0.3);
        assert!(a.same_as(&b));
        assert_eq!(CostValue::Approx(1.0).compare(&CostValue::Approx(2.0)), Ordering::Less);
    }
}
