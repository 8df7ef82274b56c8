//! Exact rational scalars and their textual forms.
//!
//! Every length in the crate is a [`Rational`]. Text input may be an integer,
//! a decimal (optionally with an exponent) or a fraction `p/q`; all of them
//! are converted without rounding. Output is the canonical lowest-terms form
//! with a positive denominator, `p/q`, or just `p` when the denominator is 1.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational literal {literal:?}: {reason}")]
pub struct ParseRationalError {
    pub literal: String,
    pub reason: &'static str,
}

fn fail(literal: &str, reason: &'static str) -> ParseRationalError {
    ParseRationalError {
        literal: literal.to_string(),
        reason,
    }
}

/// Parses `"3"`, `"-0.25"`, `"1.5e-3"` or `"7/12"` exactly.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(fail(text, "empty"));
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = parse_decimal(num.trim()).ok_or_else(|| fail(text, "bad numerator"))?;
        let den = parse_decimal(den.trim()).ok_or_else(|| fail(text, "bad denominator"))?;
        if den.is_zero() {
            return Err(fail(text, "zero denominator"));
        }
        return Ok(num / den);
    }
    parse_decimal(s).ok_or_else(|| fail(text, "not a number"))
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (negative, body) = match s.as_bytes().first()? {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(pos) => (&body[..pos], body[pos + 1..].parse::<i32>().ok()?),
        None => (body, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from_integer(digits.parse::<BigInt>().ok()?);
    let scale = exponent - i32::try_from(frac_part.len()).ok()?;
    let ten = Rational::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= pow(&ten, scale.unsigned_abs());
    } else {
        value /= pow(&ten, scale.unsigned_abs());
    }
    Some(if negative { -value } else { value })
}

fn pow(base: &Rational, exp: u32) -> Rational {
    num_traits::pow(base.clone(), exp as usize)
}

/// Canonical text form: lowest terms, positive denominator, `p` for integers.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// `1/n` for a positive integer `n`.
pub fn reciprocal(n: u64) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(n))
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Exact binary expansion of a finite float.
pub fn from_f64(value: f64) -> Option<Rational> {
    Rational::from_float(value)
}

/// Rounds `value` to the nearest multiple of `1/denominator` (ties away from zero).
pub fn round_to_grid(value: f64, denominator: u64) -> Option<Rational> {
    if !value.is_finite() {
        return None;
    }
    let exact = Rational::from_float(value)?;
    let den = BigInt::from(denominator);
    let scaled = &exact * Rational::from_integer(den.clone());
    Some(Rational::new(scaled.round().to_integer(), den))
}

pub fn abs_diff(a: &Rational, b: &Rational) -> Rational {
    (a - b).abs()
}

/// Least common multiple of the denominators, used to move to integer grids.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

pub fn is_positive(value: &Rational) -> bool {
    value.is_positive()
}

/// The rational with the smallest denominator in the closed interval
/// `[lo, hi]`, found by walking continued fractions.
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    assert!(lo <= hi, "empty interval [{lo}, {hi}]");
    if hi.is_negative() {
        return -simplest_between(&-hi, &-lo);
    }
    if !lo.is_positive() {
        return Rational::zero();
    }
    let floor = lo.floor();
    if &floor == lo {
        return floor;
    }
    let next = &floor + Rational::one();
    if &next <= hi {
        return next;
    }
    let inner = simplest_between(&(hi - &floor).recip(), &(lo - &floor).recip());
    floor + inner.recip()
}
