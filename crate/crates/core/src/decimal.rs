//! Decimal rendering of exact and floating values at six significant digits,
//! rounding half to even.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Rational;

pub const SIGNIFICANT_DIGITS: u32 = 6;

fn pow10(e: i64) -> Rational {
    let p = Rational::from_integer(BigInt::from(10).pow(e.unsigned_abs() as u32));
    if e >= 0 {
        p
    } else {
        p.recip()
    }
}

fn round_half_even(x: &Rational) -> BigInt {
    let (q, r) = x.numer().div_rem(x.denom());
    let twice: BigInt = r * 2;
    match twice.cmp(x.denom()) {
        std::cmp::Ordering::Greater => q + 1,
        std::cmp::Ordering::Less => q,
        std::cmp::Ordering::Equal if q.is_odd() => q + 1,
        std::cmp::Ordering::Equal => q,
    }
}

pub fn format_rational(value: &Rational) -> String {
    if value.is_zero() {
        return "0".to_string();
    }
    let sign = if value.is_negative() { "-" } else { "" };
    let a = value.abs();
    let mut e = a.numer().to_string().len() as i64 - a.denom().to_string().len() as i64;
    while a >= pow10(e + 1) {
        e += 1;
    }
    while a < pow10(e) {
        e -= 1;
    }
    let digits = SIGNIFICANT_DIGITS as i64;
    let mut m = round_half_even(&(&a * pow10(digits - 1 - e)));
    if m == BigInt::from(10).pow(SIGNIFICANT_DIGITS) {
        m /= 10;
        e += 1;
    }
    let s = m.to_string();
    let body = if (-5..digits).contains(&e) {
        if e >= 0 {
            let (int, frac) = s.split_at(e as usize + 1);
            if frac.is_empty() {
                int.to_string()
            } else {
                format!("{int}.{frac}")
            }
        } else {
            format!("0.{}{}", "0".repeat((-e - 1) as usize), s)
        }
    } else {
        format!(
            "{}.{}e{}{:02}",
            &s[..1],
            &s[1..],
            if e < 0 { '-' } else { '+' },
            e.abs()
        )
    };
    format!("{sign}{body}")
}

/// Formats a finite float through its exact binary value.
pub fn format_f64(value: f64) -> String {
    match Rational::from_float(value) {
        Some(q) => format_rational(&q),
        None => value.to_string(),
    }
}

/// `"num/den"` in lowest terms.
pub fn fraction(value: &Rational) -> String {
    if value.denom().is_one() {
        format!("{}/1", value.numer())
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}
