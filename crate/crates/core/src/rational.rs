//! Exact rationals and their `"p/q"` text form.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"7"`, `"-3/4"` or `"  5 / 2 "`.
pub fn parse(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::Precondition(format!("cannot parse {text:?} as a rational"));
    match text.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(
            BigInt::from_str(text).map_err(|_| bad())?,
        )),
    }
}

/// Integers print bare, everything else as `p/q` in lowest terms.
pub fn format(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn to_i64(value: &Rational) -> Option<i64> {
    if value.is_integer() {
        value.numer().to_i64()
    } else {
        None
    }
}

/// Least common multiple of the denominators, `1` for an empty slice.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

pub fn is_nonnegative(value: &Rational) -> bool {
    !value.is_negative()
}

/// Best rational approximation within `tolerance`, by continued-fraction convergents.
pub fn rationalize(x: f64, tolerance: f64) -> Rational {
    assert!(x.is_finite(), "cannot rationalize {x}");
    let sign = if x < 0.0 { -1 } else { 1 };
    let target = x.abs();
    let (mut h_prev, mut h) = (BigInt::zero(), BigInt::one());
    let (mut k_prev, mut k) = (BigInt::one(), BigInt::zero());
    let mut rest = target;
    for _ in 0..64 {
        let a = rest.floor();
        let a_int = BigInt::from(a as u64);
        let h_next = &a_int * &h + &h_prev;
        let k_next = &a_int * &k + &k_prev;
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
        let approx = h.to_f64().unwrap_or(f64::MAX) / k.to_f64().unwrap_or(1.0);
        let frac = rest - a;
        if (approx - target).abs() <= tolerance || frac < 1e-300 {
            break;
        }
        rest = 1.0 / frac;
    }
    Rational::new(h * sign, k)
}

pub mod serde_text {
    //! `serde(with = ...)` helpers: write `"p/q"`, read integers or strings.
    use super::*;

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        d.deserialize_any(RationalVisitor)
    }

    pub(crate) struct RationalVisitor;

    impl<'de> Visitor<'de> for RationalVisitor {
        type Value = Rational;

        fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
            f.write_str("an integer or a \"p/q\" string")
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Rational, E> {
            Ok(int(v))
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Rational, E> {
            Ok(Rational::from_integer(BigInt::from(v)))
        }

        fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Rational, E> {
            parse(v).map_err(E::custom)
        }
    }

    pub mod vec {
        use super::*;
        use serde::de::SeqAccess;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(values: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(values.len()))?;
            for v in values {
                seq.serialize_element(&format(v))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
            struct SeqVisitor;
            impl<'de> Visitor<'de> for SeqVisitor {
                type Value = Vec<Rational>;
                fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                    f.write_str("a list of rationals")
                }
                fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<Self::Value, A::Error> {
                    let mut out = Vec::new();
                    while let Some(v) = seq.next_element::<Text>()? {
                        out.push(v.0);
                    }
                    Ok(out)
                }
            }
            d.deserialize_seq(SeqVisitor)
        }
    }

    /// `Vec<Vec<Rational>>` as nested lists of `"p/q"` strings.
    pub mod nested {
        use super::*;

        pub fn serialize<S: Serializer>(values: &[Vec<Rational>], s: S) -> std::result::Result<S::Ok, S::Error> {
            let text: Vec<Vec<Text>> = values.iter().map(|v| v.iter().cloned().map(Text).collect()).collect();
            serde::Serialize::serialize(&text, s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<Rational>>, D::Error> {
            let text: Vec<Vec<Text>> = serde::Deserialize::deserialize(d)?;
            Ok(text.into_iter().map(|v| v.into_iter().map(|t| t.0).collect()).collect())
        }
    }

    /// `Option<Vec<Rational>>`, `null` when absent.
    pub mod option_vec {
        use super::*;

        pub fn serialize<S: Serializer>(values: &Option<Vec<Rational>>, s: S) -> std::result::Result<S::Ok, S::Error> {
            let text: Option<Vec<Text>> = values.as_ref().map(|v| v.iter().cloned().map(Text).collect());
            serde::Serialize::serialize(&text, s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Vec<Rational>>, D::Error> {
            let text: Option<Vec<Text>> = serde::Deserialize::deserialize(d)?;
            Ok(text.map(|v| v.into_iter().map(|t| t.0).collect()))
        }
    }

    /// `Option<Rational>`, `null` when absent.
    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(value: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
            serde::Serialize::serialize(&value.clone().map(Text), s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Rational>, D::Error> {
            let text: Option<Text> = serde::Deserialize::deserialize(d)?;
            Ok(text.map(|t| t.0))
        }
    }

    /// Newtype so that rationals can appear inside generic containers.
    #[derive(Debug, Clone, PartialEq, Eq)]
    pub struct Text(pub Rational);

    impl<'de> serde::Deserialize<'de> for Text {
        fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
            d.deserialize_any(RationalVisitor).map(Text)
        }
    }

    impl serde::Serialize for Text {
        fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
            s.serialize_str(&format(&self.0))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse("-6/4").unwrap(), ratio(-3, 2));
        assert_eq!(format(&ratio(-3, 2)), "-3/2");
        assert_eq!(format(&int(5)), "5");
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn continued_fraction_rounding() {
        assert_eq!(rationalize(0.5, 1e-9), ratio(1, 2));
        assert_eq!(rationalize(-1.0 / 3.0, 1e-9), ratio(-1, 3));
        let pi = rationalize(std::f64::consts::PI, 1e-6);
        assert!((pi.to_f64().unwrap() - std::f64::consts::PI).abs() <= 1e-6);
        assert_eq!(rationalize(1e-12, 1e-6), int(0));
    }

    #[test]
    fn denominators() {
        let v = [ratio(1, 4), ratio(5, 6), int(3)];
        assert_eq!(common_denominator(&v), BigInt::from(12));
    }
}
