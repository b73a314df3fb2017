//! Exact rational helpers. Densities never pass through floating point.

use crate::error::{Error, Result};
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

pub type Rational = Ratio<i64>;

/// Denominators accepted from text input; keeps rational products inside `i64`.
pub const MAX_INPUT_DENOMINATOR: i64 = 1_000_000_000;

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(num, den)
}

pub fn from_usize(n: usize) -> Rational {
    Rational::from_integer(n as i64)
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::InvalidArgument(format!("malformed rational {text:?}"));
    let (num, den) = match text.split_once('/') {
        Some((p, q)) => (
            p.parse::<i64>().map_err(|_| bad())?,
            q.parse::<i64>().map_err(|_| bad())?,
        ),
        None => (text.parse::<i64>().map_err(|_| bad())?, 1),
    };
    if den <= 0 || den > MAX_INPUT_DENOMINATOR || num.abs() > MAX_INPUT_DENOMINATOR {
        return Err(Error::InvalidArgument(format!(
            "rational {text:?} needs 0 < q <= {MAX_INPUT_DENOMINATOR} and |p| <= {MAX_INPUT_DENOMINATOR}"
        )));
    }
    Ok(Rational::new(num, den))
}

/// Canonical `"p/q"` text, always with a denominator.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// `floor(1 / r)` for `r > 0`.
pub fn floor_reciprocal(r: &Rational) -> Option<u64> {
    if *r <= Rational::zero() {
        return None;
    }
    r.recip().floor().to_integer().to_u64()
}

/// `ceil(r * n)` for `r >= 0`.
pub fn ceil_times(r: &Rational, n: u64) -> i64 {
    let (q, rem) = (r.numer() * n as i64).div_rem(r.denom());
    if rem > 0 {
        q + 1
    } else {
        q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("1/4").unwrap(), ratio(1, 4));
        assert_eq!(parse_rational("2/8").unwrap(), ratio(1, 4));
        assert_eq!(parse_rational("3").unwrap(), ratio(3, 1));
        assert_eq!(format_rational(&ratio(1, 1)), "1/1");
        assert_eq!(format_rational(&ratio(-6, 4)), "-3/2");
        for bad in ["", "1/0", "a/2", "1/-2", "1/2/3"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn reciprocal_floor() {
        assert_eq!(floor_reciprocal(&ratio(1, 16)), Some(16));
        assert_eq!(floor_reciprocal(&ratio(1, 6)), Some(6));
        assert_eq!(floor_reciprocal(&ratio(2, 5)), Some(2));
        assert_eq!(floor_reciprocal(&ratio(0, 1)), None);
        assert_eq!(ceil_times(&ratio(1, 3), 7), 3);
        assert_eq!(ceil_times(&ratio(1, 3), 6), 2);
    }
}
