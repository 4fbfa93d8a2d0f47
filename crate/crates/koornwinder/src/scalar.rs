//! Exact scalar helpers: arbitrary-precision rationals, perfect-square roots,
//! integer powers, and `"p/q"` parsing/formatting.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational scalar used throughout the crate.
pub type Rat = BigRational;

/// Shorthand constructor for small rationals.
pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

/// Shorthand constructor for small integers.
pub fn rat_int(value: i64) -> Rat {
    Rat::from_integer(BigInt::from(value))
}

/// Exact square root of a perfect-square rational.
///
/// Returns `None` when the value is negative or not the square of a rational.
pub fn rat_sqrt(value: &Rat) -> Option<Rat> {
    if value.is_negative() {
        return None;
    }
    let numer_root = value.numer().sqrt();
    let denom_root = value.denom().sqrt();
    if &(&numer_root * &numer_root) == value.numer()
        && &(&denom_root * &denom_root) == value.denom()
    {
        Some(Rat::new(numer_root, denom_root))
    } else {
        None
    }
}

/// `base^exp` for signed integer exponents. Panics on `0^negative`.
pub fn rat_pow(base: &Rat, exp: i64) -> Rat {
    if exp == 0 {
        return Rat::one();
    }
    let positive = if exp > 0 {
        base.clone()
    } else {
        assert!(!base.is_zero(), "zero base with negative exponent");
        base.recip()
    };
    let mut acc = Rat::one();
    for _ in 0..exp.unsigned_abs() {
        acc *= &positive;
    }
    acc
}

/// Parses `"p/q"` (or a bare integer `"p"`) into an exact rational.
pub fn parse_rat(text: &str) -> Result<Rat, String> {
    let trimmed = text.trim();
    let (numer_text, denom_text) = match trimmed.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (trimmed, "1"),
    };
    let numer: BigInt = numer_text
        .parse()
        .map_err(|_| format!("invalid numerator in {trimmed:?}"))?;
    let denom: BigInt = denom_text
        .parse()
        .map_err(|_| format!("invalid denominator in {trimmed:?}"))?;
    if denom.is_zero() {
        return Err(format!("zero denominator in {trimmed:?}"));
    }
    Ok(Rat::new(numer, denom))
}

/// Renders a rational as `"p/q"` (reduced, positive denominator; `"p"` when q = 1).
pub fn format_rat(value: &Rat) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Nearest-double approximation, for numeric cross-checks.
pub fn rat_to_f64(value: &Rat) -> f64 {
    value.to_f64().unwrap_or_else(|| {
        value.numer().to_f64().unwrap_or(f64::NAN) / value.denom().to_f64().unwrap_or(f64::NAN)
    })
}

/// FNV-1a over a byte string; stable across runs and platforms.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}
