//! Exact rational arithmetic helpers.
//!
//! All probabilities and credence thresholds in this crate are arbitrary
//! precision rationals; decimal literals in the concrete syntax are read
//! exactly, so `0.6` and `3/5` denote the same value.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub type Rational = num_rational::BigRational;

/// Build a rational from machine integers.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// True iff `0 <= r <= 1`.
pub fn is_probability(r: &Rational) -> bool {
    !r.is_negative() && *r <= Rational::one()
}

/// Parse `"3/5"`, `"0.6"` or `"2"` as an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational, String> {
    let text = text.trim();
    if text.is_empty() {
        return Err("empty rational literal".to_string());
    }
    if let Some((num, den)) = text.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| format!("bad numerator in `{text}`"))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| format!("bad denominator in `{text}`"))?;
        if d.is_zero() {
            return Err(format!("zero denominator in `{text}`"));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int_part, frac_part)) = text.split_once('.') {
        let int_part = if int_part.is_empty() { "0" } else { int_part };
        if frac_part.is_empty() || !frac_part.chars().all(|c| c.is_ascii_digit()) {
            return Err(format!("bad decimal literal `{text}`"));
        }
        let i: BigInt = int_part
            .parse()
            .map_err(|_| format!("bad decimal literal `{text}`"))?;
        let f: BigInt = frac_part
            .parse()
            .map_err(|_| format!("bad decimal literal `{text}`"))?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let whole = &i * &scale;
        let signed_frac = if text.trim_start().starts_with('-') { -f } else { f };
        return Ok(Rational::new(whole + signed_frac, scale));
    }
    let n: BigInt = text
        .parse()
        .map_err(|_| format!("bad integer literal `{text}`"))?;
    Ok(Rational::from_integer(n))
}

/// Render as `n/d`, or plain `n` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Smallest integer `k` with `k >= r`.
pub fn ceil_to_int(r: &Rational) -> BigInt {
    r.ceil().to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_decimals_and_integers() {
        assert_eq!(parse_rational("3/5").unwrap(), rat(3, 5));
        assert_eq!(parse_rational("0.6").unwrap(), rat(3, 5));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("1").unwrap(), rat(1, 1));
        assert_eq!(parse_rational("2/4").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-0.25").unwrap(), rat(-1, 4));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("a/b").is_err());
        assert!(parse_rational("1.x").is_err());
    }

    #[test]
    fn formats_reduced() {
        assert_eq!(format_rational(&rat(2, 4)), "1/2");
        assert_eq!(format_rational(&rat(5, 5)), "1");
        assert_eq!(format_rational(&rat(0, 3)), "0");
    }

    #[test]
    fn probability_range() {
        assert!(is_probability(&rat(0, 1)));
        assert!(is_probability(&rat(1, 1)));
        assert!(is_probability(&rat(3, 5)));
        assert!(!is_probability(&rat(6, 5)));
        assert!(!is_probability(&rat(-1, 5)));
    }
}
