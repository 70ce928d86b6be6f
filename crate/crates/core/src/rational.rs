//! Exact rational scalars and their `"num/den"` text form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Canonical text form, always with an explicit denominator (`"-4/1"`).
pub fn format(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Short text form for human-readable output (`"-4"`, `"1/2"`).
pub fn format_short(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format(q)
    }
}

/// Parses `"num/den"` or a bare integer `"num"`.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // Overflowing magnitudes; keep the sign.
        if q.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Truncates `x` toward zero onto the grid `1/den`.
pub fn truncate_f64(x: f64, den: i64) -> Rational {
    let scaled = (x * den as f64).trunc();
    let num = BigInt::from(scaled as i128);
    Rational::new(num, BigInt::from(den))
}

pub(crate) mod serde_str {
    use super::{format, parse, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(serde::de::Error::custom)
    }
}

pub(crate) mod serde_vec {
    use super::{format, parse, Rational};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(format).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| parse(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse("4/1").unwrap(), int(4));
        assert_eq!(parse(" -4 ").unwrap(), int(-4));
        assert_eq!(parse("6/-4").unwrap(), ratio(-3, 2));
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn format_is_explicit() {
        assert_eq!(format(&int(-4)), "-4/1");
        assert_eq!(format(&ratio(2, 4)), "1/2");
        assert_eq!(format_short(&int(3)), "3");
    }

    #[test]
    fn truncation_goes_toward_zero() {
        assert_eq!(truncate_f64(1.2345678, 1_000_000), ratio(1_234_567, 1_000_000));
        assert_eq!(truncate_f64(-0.0000019, 1_000_000), ratio(-1, 1_000_000));
        assert_eq!(truncate_f64(0.0, 1_000_000), int(0));
    }
}
