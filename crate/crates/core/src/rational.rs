//! Exact rational numbers and their decimal rendering.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn integer(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Closest `f64` to `value`.
pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Renders `value` in plain decimal notation, correctly rounded (half away
/// from zero) to `significant` significant digits, with trailing zeros in the
/// fractional part dropped.
///
/// The rendering is computed from the exact fraction, so every printed digit
/// agrees with the value itself.
pub fn to_decimal(value: &Rational, significant: u32) -> String {
    assert!(significant >= 1, "need at least one significant digit");
    if value.is_zero() {
        return "0".to_string();
    }
    let negative = value.is_negative();
    let magnitude = value.abs();

    // exponent e with 10^e <= magnitude < 10^(e+1)
    let mut exponent = estimate_exponent(&magnitude);
    while pow10(exponent) > magnitude {
        exponent -= 1;
    }
    while pow10(exponent + 1) <= magnitude {
        exponent += 1;
    }

    let mut shift = significant as i64 - 1 - exponent;
    let mut digits = round_half_up(&(&magnitude * pow10(shift)));
    if digits == BigInt::from(10u32).pow(significant) {
        // rounding carried into a new leading digit
        digits /= 10;
        shift -= 1;
    }

    let mut text = digits.to_string();
    if shift <= 0 {
        text.extend(std::iter::repeat_n('0', (-shift) as usize));
    } else {
        let frac_len = shift as usize;
        if text.len() <= frac_len {
            let pad = frac_len + 1 - text.len();
            text.insert_str(0, &"0".repeat(pad));
        }
        text.insert(text.len() - frac_len, '.');
        let trimmed = text.trim_end_matches('0').trim_end_matches('.').len();
        text.truncate(trimmed);
    }
    if negative {
        text.insert(0, '-');
    }
    text
}

fn pow10(exponent: i64) -> Rational {
    let p = BigInt::from(10u32).pow(exponent.unsigned_abs() as u32);
    if exponent >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

fn estimate_exponent(magnitude: &Rational) -> i64 {
    let numer_digits = magnitude.numer().to_string().len() as i64;
    let denom_digits = magnitude.denom().to_string().len() as i64;
    numer_digits - denom_digits
}

fn round_half_up(value: &Rational) -> BigInt {
    let (quotient, remainder) = value.numer().div_rem(value.denom());
    if remainder * 2 >= *value.denom() {
        quotient + 1
    } else {
        quotient
    }
}
