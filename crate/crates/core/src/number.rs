//! Exact rational "util" values and their string forms.
//!
//! Scenario files and reports carry every amount as a string. Decimal
//! strings (`"15"`, `"-0.25"`) parse exactly; fraction strings (`"1/3"`)
//! cover rationals that have no finite decimal expansion.

use num::bigint::BigInt;
use num::{BigRational, One, Signed, Zero};
use thiserror::Error;

/// A transferable-utility amount, held as an exact rational.
pub type Util = BigRational;

/// Largest power of ten used for decimal output.
pub const MAX_DECIMAL_PLACES: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("`{text}` is not an exact decimal or fraction")]
pub struct BadNumber {
    pub text: String,
}

pub fn util(n: i64) -> Util {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(numer: i64, denom: i64) -> Util {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Parses `[+-]digits[.digits]` or `[+-]digits/digits` into an exact rational.
pub fn parse_util(text: &str) -> Result<Util, BadNumber> {
    let bad = || BadNumber {
        text: text.to_string(),
    };
    let (negative, body) = match text.as_bytes().first() {
        Some(b'-') => (true, &text[1..]),
        Some(b'+') => (false, &text[1..]),
        _ => (false, text),
    };
    let all_digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());

    let value = if let Some((numer, denom)) = body.split_once('/') {
        if !all_digits(numer) || !all_digits(denom) {
            return Err(bad());
        }
        let denom: BigInt = denom.parse().map_err(|_| bad())?;
        if denom.is_zero() {
            return Err(bad());
        }
        BigRational::new(numer.parse().map_err(|_| bad())?, denom)
    } else {
        let (int_part, frac_part) = match body.split_once('.') {
            Some((i, f)) => (i, Some(f)),
            None => (body, None),
        };
        if !all_digits(int_part) || frac_part.is_some_and(|f| !all_digits(f)) {
            return Err(bad());
        }
        let frac_part = frac_part.unwrap_or("");
        let digits: BigInt = format!("{int_part}{frac_part}")
            .parse()
            .map_err(|_| bad())?;
        let scale = num::pow(BigInt::from(10), frac_part.len());
        BigRational::new(digits, scale)
    };
    Ok(if negative { -value } else { value })
}

/// Exact string form: a decimal when the reduced denominator divides
/// `10^k` for some `k <= 12`, otherwise `p/q`.
pub fn format_util(value: &Util) -> String {
    match decimal_places(value.denom()) {
        Some(0) => value.numer().to_string(),
        Some(places) => {
            let scaled = value * BigRational::from_integer(num::pow(BigInt::from(10), places));
            let digits = scaled.to_integer().abs().to_string();
            let digits = format!("{digits:0>width$}", width = places + 1);
            let (int_part, frac_part) = digits.split_at(digits.len() - places);
            let sign = if value.is_negative() { "-" } else { "" };
            format!("{sign}{int_part}.{frac_part}")
        }
        None => format!("{}/{}", value.numer(), value.denom()),
    }
}

fn decimal_places(denom: &BigInt) -> Option<usize> {
    let mut rest = denom.clone();
    let (mut twos, mut fives) = (0u32, 0u32);
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    while (&rest % &two).is_zero() {
        rest /= &two;
        twos += 1;
    }
    while (&rest % &five).is_zero() {
        rest /= &five;
        fives += 1;
    }
    let places = twos.max(fives);
    (rest.is_one() && places <= MAX_DECIMAL_PLACES).then_some(places as usize)
}
