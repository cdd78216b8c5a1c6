//! Exact rational helpers and the `"p/q"` text encoding.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn pow2(e: u32) -> Rational {
    Rational::from_integer(BigInt::one() << e as usize)
}

/// Always `p/q`, including integers (`3/1`).
pub fn to_fraction_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Accepts `p/q` or a bare integer `p`.
pub fn parse_fraction(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not an exact fraction: {s:?}"));
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(p, q))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Decimal rendering with `digits` significant digits.
pub fn to_decimal(r: &Rational, digits: usize) -> String {
    let v = to_f64(r);
    if v == 0.0 {
        return "0".to_string();
    }
    let s = format!("{:.*e}", digits.saturating_sub(1), v);
    // back to plain notation and trim trailing zeros
    let parsed: f64 = s.parse().unwrap_or(v);
    let mut out = format!("{parsed}");
    if out.contains('.') {
        while out.ends_with('0') {
            out.pop();
        }
        if out.ends_with('.') {
            out.pop();
        }
    }
    out
}

pub fn min_of<'a>(it: impl IntoIterator<Item = &'a Rational>) -> Option<Rational> {
    it.into_iter().min().cloned()
}

pub fn max_of<'a>(it: impl IntoIterator<Item = &'a Rational>) -> Option<Rational> {
    it.into_iter().max().cloned()
}

pub fn is_integral(r: &Rational) -> bool {
    r.is_integer()
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

/// Serde adapter for a single rational stored as `"p/q"`.
pub mod serde_frac {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&to_fraction_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_fraction(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rational>`.
pub mod serde_frac_vec {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        v.iter().map(to_fraction_string).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_fraction(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fraction_strings() {
        assert_eq!(to_fraction_string(&frac(6, 4)), "3/2");
        assert_eq!(to_fraction_string(&int(3)), "3/1");
        assert_eq!(parse_fraction("3/2").unwrap(), frac(3, 2));
        assert_eq!(parse_fraction(" -7 ").unwrap(), int(-7));
        assert!(parse_fraction("1/0").is_err());
        assert!(parse_fraction("0.5").is_err());
    }

    #[test]
    fn decimals() {
        assert_eq!(to_decimal(&frac(1, 3), 12), "0.333333333333");
        assert_eq!(to_decimal(&int(2), 12), "2");
        assert_eq!(to_decimal(&frac(394, 100), 12), "3.94");
    }
}
