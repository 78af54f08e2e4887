//! Exact rational scalars and their canonical text form.
//!
//! Canonical text is an integer when the denominator is 1, a terminating
//! decimal with no trailing zeros when the denominator only has factors 2
//! and 5, and `p/q` otherwise. [`parse_rational`] accepts all three.

use alloc::format;
use alloc::string::{String, ToString};
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

pub type Rational = Ratio<i64>;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(v)
}

/// Largest number of fractional digits a terminating decimal may take.
const MAX_DECIMAL_DIGITS: u32 = 18;

/// Number of decimal digits needed to write `1/den` exactly, if it terminates.
fn decimal_digits(den: i64) -> Option<u32> {
    let mut d = den;
    let (mut twos, mut fives) = (0u32, 0u32);
    while d % 2 == 0 {
        d /= 2;
        twos += 1;
    }
    while d % 5 == 0 {
        d /= 5;
        fives += 1;
    }
    (d == 1).then(|| twos.max(fives))
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        return r.numer().to_string();
    }
    let den = *r.denom();
    match decimal_digits(den) {
        Some(k) if k <= MAX_DECIMAL_DIGITS => {
            let scale = 10i128.pow(k);
            let scaled = i128::from(*r.numer()) * (scale / i128::from(den));
            let sign = if scaled < 0 { "-" } else { "" };
            let abs = scaled.unsigned_abs();
            let whole = abs / scale as u128;
            let frac = abs % scale as u128;
            let frac = format!("{:0width$}", frac, width = k as usize);
            format!("{sign}{whole}.{}", frac.trim_end_matches('0'))
        }
        _ => format!("{}/{}", r.numer(), r.denom()),
    }
}

/// Parses an integer, a plain decimal (`-0.25`) or a fraction (`3/4`).
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().ok()?;
        let q: i64 = q.trim().parse().ok()?;
        if q == 0 {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    let (neg, body) = match s.as_bytes().first()? {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = u32::try_from(frac.len()).ok()?;
    let scale = 10i64.checked_pow(digits)?;
    let mut numer: i64 = if whole.is_empty() { 0 } else { whole.parse().ok()? };
    numer = numer.checked_mul(scale)?;
    if !frac.is_empty() {
        numer = numer.checked_add(frac.parse().ok()?)?;
    }
    if neg {
        numer = -numer;
    }
    Some(Rational::new(numer, scale))
}

/// Rounds half away from zero for non-negative values, i.e. `floor(x + 1/2)`.
pub fn round_half_up(x: &Rational) -> i64 {
    (x + Rational::new(1, 2)).floor().to_integer()
}

/// Least common multiple of all denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> i64 {
    values
        .into_iter()
        .fold(1i64, |acc, v| acc.lcm(v.denom()))
}

pub fn is_binary(r: &Rational) -> bool {
    r.is_zero() || r.is_one()
}

pub fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub(crate) fn nonnegative(r: &Rational) -> bool {
    !r.is_negative()
}
