//! Exact rational helpers shared by every scalar instance.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

/// `n/d` as an exact rational. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn zero() -> Rat {
    Rat::zero()
}

pub fn one() -> Rat {
    Rat::one()
}

/// Truncated subtraction `max(a - b, 0)`.
pub fn monus(a: &Rat, b: &Rat) -> Rat {
    if a > b {
        a - b
    } else {
        Rat::zero()
    }
}

/// `min(y / x, 1)` with `y / 0 = 1`; the residuation of multiplication on `[0,1]`.
pub fn div_clamped(y: &Rat, x: &Rat) -> Rat {
    if x.is_zero() || y >= x {
        Rat::one()
    } else {
        y / x
    }
}

/// Canonical text: `p` for integers, `p/q` otherwise.
pub fn format_rational(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p`, `p/q`, and (when `allow_decimal`) decimal literals such as
/// `0.25` or `1e-3`, all exactly.
pub fn parse_rational(text: &str, allow_decimal: bool) -> Result<Rat> {
    let s = text.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator in `{text}`")))?;
        let q: BigInt = q
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in `{text}`")))?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{text}`")));
        }
        return Ok(Rat::new(p, q));
    }
    if let Ok(n) = s.parse::<BigInt>() {
        return Ok(Rat::from_integer(n));
    }
    if !allow_decimal {
        return Err(Error::Parse(format!(
            "`{text}` is not an integer or p/q rational (pass --allow-float for decimals)"
        )));
    }
    parse_decimal(s).ok_or_else(|| Error::Parse(format!("`{text}` is not a decimal literal")))
}

fn parse_decimal(s: &str) -> Option<Rat> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{whole}{frac}").parse().ok()?;
    let scale = exponent - frac.len() as i64;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        Rat::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        Rat::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    Some(if negative { -value } else { value })
}

pub fn is_nonnegative(r: &Rat) -> bool {
    !r.is_negative()
}
