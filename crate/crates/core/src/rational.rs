//! Exact rational helpers and the `"p/q"` string encoding used by the JSON
//! formats.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// `num / den` as an exact rational. Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn floor_i64(x: &Rational) -> i64 {
    to_i64(&x.floor().to_integer())
}

pub fn ceil_i64(x: &Rational) -> i64 {
    to_i64(&x.ceil().to_integer())
}

pub(crate) fn to_i64(n: &BigInt) -> i64 {
    i64::try_from(n).expect("integer does not fit in i64")
}

/// True when `x` lies in `Z + 1/2`.
pub fn is_half_integer(x: &Rational) -> bool {
    x.denom() == &BigInt::from(2)
}

/// Number of points of `Z + 1/2` strictly between `lo` and `hi`.
pub fn half_integers_between(lo: &Rational, hi: &Rational) -> u64 {
    if hi <= lo {
        return 0;
    }
    let half = ratio(1, 2);
    // t + 1/2 in (lo, hi)  <=>  t in (lo - 1/2, hi - 1/2)
    let first = floor_i64(&(lo - &half)) + 1;
    let last = ceil_i64(&(hi - &half)) - 1;
    if last < first {
        0
    } else {
        (last - first + 1) as u64
    }
}

pub fn format_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational numerator in {s:?}")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational denominator in {s:?}")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

pub fn to_f64(x: &Rational) -> f64 {
    let (n, d) = (x.numer(), x.denom());
    let g = n.gcd(d);
    let (n, d) = (n / &g, d / &g);
    match (i64::try_from(&n), i64::try_from(&d)) {
        (Ok(n), Ok(d)) => n as f64 / d as f64,
        _ => {
            let sign = if n.is_negative() { -1.0 } else { 1.0 };
            let n = n.abs().to_string().parse::<f64>().unwrap_or(f64::INFINITY);
            let d = d.to_string().parse::<f64>().unwrap_or(f64::INFINITY);
            sign * n / d
        }
    }
}

pub(crate) mod as_string {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("-1/2").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rational(" 3 ").unwrap(), int(3));
        assert_eq!(parse_rational("4/8").unwrap(), ratio(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&ratio(-6, 4)), "-3/2");
        assert_eq!(format_rational(&int(-2)), "-2");
    }

    #[test]
    fn half_integer_counting() {
        assert_eq!(half_integers_between(&int(-2), &int(0)), 2);
        assert_eq!(half_integers_between(&int(0), &int(0)), 0);
        assert_eq!(half_integers_between(&int(3), &int(-1)), 0);
        assert_eq!(half_integers_between(&ratio(1, 2), &ratio(3, 2)), 0);
        assert_eq!(half_integers_between(&ratio(1, 3), &ratio(7, 3)), 2);
        assert!(is_half_integer(&ratio(-3, 2)));
        assert!(!is_half_integer(&ratio(1, 3)));
    }

    #[test]
    fn float_conversion() {
        assert_eq!(to_f64(&ratio(-1, 4)), -0.25);
    }
}
