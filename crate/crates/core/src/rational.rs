//! Exact rational helpers: the `"p/q"` wire form and conversions to `f64`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`. Whitespace around the parts is ignored.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::Argument(format!("not a rational \"p/q\": {text:?}"));
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Argument(format!("zero denominator in {text:?}")));
    }
    Ok(BigRational::new(num, den))
}

/// Canonical `"p/q"` form; integers are written without a denominator.
pub fn format_rational(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Nearest `f64`, robust to numerators and denominators beyond `f64` range.
pub fn to_f64(value: &Rational) -> f64 {
    if let Some(v) = value.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Scale both parts down by their common bit excess.
    let n = value.numer();
    let d = value.denom();
    let nb = n.bits() as i64;
    let db = d.bits() as i64;
    let shift_n = (nb - 1000).max(0) as u64;
    let shift_d = (db - 1000).max(0) as u64;
    let nf = (n.abs() >> shift_n).to_f64().unwrap_or(f64::INFINITY);
    let df = (d >> shift_d).to_f64().unwrap_or(f64::INFINITY);
    let mag = nf / df * 2f64.powi((shift_n as i64 - shift_d as i64) as i32);
    if n.is_negative() {
        -mag
    } else {
        mag
    }
}

/// Exact binary rational equal to a finite `f64`.
pub fn from_f64(value: f64) -> Result<Rational> {
    BigRational::from_float(value)
        .ok_or_else(|| Error::Argument(format!("non-finite value {value}")))
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn pow(base: &Rational, exp: i64) -> Rational {
    if exp >= 0 {
        num_traits::pow(base.clone(), exp as usize)
    } else {
        num_traits::pow(base.recip(), (-exp) as usize)
    }
}

/// Serde adapter writing rationals as `"p/q"` strings.
pub mod as_string {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}
