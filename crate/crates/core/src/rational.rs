//! Exact rational helpers shared by every algebraic module.
//!
//! Values are `num_rational::BigRational`; the text form is `p/q`, or `p`
//! when the denominator is one. The Unicode minus sign is accepted on input.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// `num / den` as an exact rational. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let cleaned: String = s
        .trim()
        .chars()
        .map(|c| if c == '\u{2212}' { '-' } else { c })
        .filter(|c| !c.is_whitespace())
        .collect();
    if cleaned.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    let (num, den) = match cleaned.split_once('/') {
        Some((n, d)) => (n, d),
        None => (cleaned.as_str(), "1"),
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

pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Integer power, negative exponents allowed for nonzero bases.
pub fn powi(base: &Rational, exp: i64) -> Rational {
    if exp >= 0 {
        num_traits::pow(base.clone(), exp as usize)
    } else {
        num_traits::pow(base.recip(), (-exp) as usize)
    }
}

pub fn is_nonnegative(q: &Rational) -> bool {
    !q.is_negative()
}

pub fn to_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

/// Serde adapters that carry rationals as `"p/q"` strings.
pub mod serde_str {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let v = StrOrNum::deserialize(d)?;
        v.into_rational().map_err(de::Error::custom)
    }

    /// Rationals may also be written as bare JSON integers.
    #[derive(Deserialize)]
    #[serde(untagged)]
    pub(crate) enum StrOrNum {
        Str(String),
        Int(i64),
    }

    impl StrOrNum {
        pub(crate) fn into_rational(self) -> Result<Rational> {
            match self {
                StrOrNum::Str(s) => parse_rational(&s),
                StrOrNum::Int(i) => Ok(int(i)),
            }
        }
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for q in v {
                seq.serialize_element(&format_rational(q))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
            let raw = Vec::<StrOrNum>::deserialize(d)?;
            raw.into_iter()
                .map(|v| v.into_rational().map_err(de::Error::custom))
                .collect()
        }
    }

    /// Integer-keyed maps, e.g. `{"3": "1/7"}`.
    pub mod map {
        use super::*;
        use serde::ser::SerializeMap;
        use std::collections::BTreeMap;

        pub fn serialize<S: Serializer>(v: &BTreeMap<usize, Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
            let mut map = s.serialize_map(Some(v.len()))?;
            for (k, q) in v {
                map.serialize_entry(&k.to_string(), &format_rational(q))?;
            }
            map.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<BTreeMap<usize, Rational>, D::Error> {
            // keys arrive as strings when buffered by an internally tagged enum
            let raw = BTreeMap::<String, StrOrNum>::deserialize(d)?;
            raw.into_iter()
                .map(|(k, v)| {
                    let key = k
                        .trim()
                        .parse::<usize>()
                        .map_err(|_| de::Error::custom(format!("bad order key {k:?}")))?;
                    Ok((key, v.into_rational().map_err(de::Error::custom)?))
                })
                .collect()
        }
    }
}
