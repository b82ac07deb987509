//! Exact rational literals and their textual renderings.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSyntaxError(pub String);

impl fmt::Display for RationalSyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{}` is not a decimal or fraction literal", self.0)
    }
}

impl std::error::Error for RationalSyntaxError {}

/// Parses `12`, `0.888`, `.5`, `-0.1` or `3/5` into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational, RationalSyntaxError> {
    let err = || RationalSyntaxError(text.to_string());
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    if body.is_empty() {
        return Err(err());
    }
    let value = if let Some((num, den)) = body.split_once('/') {
        let num = parse_digits(num).ok_or_else(err)?;
        let den = parse_digits(den).ok_or_else(err)?;
        if den.is_zero() {
            return Err(err());
        }
        BigRational::new(num, den)
    } else {
        let (int, frac) = body.split_once('.').unwrap_or((body, ""));
        if int.is_empty() && frac.is_empty() {
            return Err(err());
        }
        if body.ends_with('.') {
            return Err(err());
        }
        let digits = format!("{int}{frac}");
        let num = parse_digits(&digits).ok_or_else(err)?;
        let den = BigInt::from(10u32).pow(frac.len() as u32);
        BigRational::new(num, den)
    };
    Ok(if negative { -value } else { value })
}

fn parse_digits(s: &str) -> Option<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Canonical fraction text: `3/5`, `1`, `0`, `-1/10`.
pub fn render_fraction(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Fixed-point rendering with `places` decimals, rounding half to even.
pub fn render_decimal(r: &BigRational, places: u32) -> String {
    let scale = BigInt::from(10u32).pow(places);
    let scaled = r.abs() * BigRational::from_integer(scale.clone());
    let (mut q, rem) = scaled.numer().div_rem(scaled.denom());
    let twice = rem * 2u32;
    match twice.cmp(scaled.denom()) {
        std::cmp::Ordering::Greater => q += 1u32,
        std::cmp::Ordering::Equal if q.is_odd() => q += 1u32,
        _ => {}
    }
    let (int, frac) = q.div_rem(&scale);
    let sign = if r.is_negative() && !q.is_zero() { "-" } else { "" };
    if places == 0 {
        return format!("{sign}{int}");
    }
    let frac = frac.to_str_radix(10);
    format!("{sign}{int}.{frac:0>width$}", width = places as usize)
}
