//! Exact rationals and their `"num/den"` string encoding.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serializer};

use crate::{Error, Result};

/// Exact rational number used for every weight, potential and volume.
pub type Q = BigRational;

pub fn int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn parse(s: &str) -> Result<Q> {
    let trimmed = s.trim();
    Q::from_str(trimmed).map_err(|_| Error::Parse(format!("not a rational: {s:?}")))
}

/// Renders `n` for integers and `num/den` otherwise.
pub fn render(q: &Q) -> String {
    q.to_string()
}

pub fn to_f64(q: &Q) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn is_integer(q: &Q) -> bool {
    q.denom().is_one()
}

/// `|q|^p` for a nonnegative integer exponent.
pub fn abs_pow(q: &Q, p: u32) -> Q {
    let a = q.abs();
    let mut out = Q::one();
    for _ in 0..p {
        out *= &a;
    }
    out
}

pub fn min_of<'a, I: IntoIterator<Item = &'a Q>>(it: I) -> Option<Q> {
    it.into_iter().min().cloned()
}

pub fn max_of<'a, I: IntoIterator<Item = &'a Q>>(it: I) -> Option<Q> {
    it.into_iter().max().cloned()
}

pub fn zero() -> Q {
    Q::zero()
}

/// Least common multiple of the denominators, as an integer scale factor.
pub fn common_denominator(values: &[Q]) -> BigInt {
    let mut l = BigInt::one();
    for v in values {
        l = num_integer::Integer::lcm(&l, v.denom());
    }
    l
}

/// Serde adapter: a rational as a `"num/den"` string (integers and JSON numbers accepted on input).
pub mod serde_q {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&render(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        from_value(&v).map_err(serde::de::Error::custom)
    }

    pub(crate) fn from_value(v: &serde_json::Value) -> Result<Q> {
        match v {
            serde_json::Value::String(s) => parse(s),
            serde_json::Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(int(i))
                } else {
                    Err(Error::Parse(format!("non-integer JSON number {n}; use a \"num/den\" string")))
                }
            }
            other => Err(Error::Parse(format!("expected rational, got {other}"))),
        }
    }
}

/// Serde adapter for `Vec<Q>`.
pub mod serde_qvec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for q in v {
            seq.serialize_element(&render(q))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Q>, D::Error> {
        let v = Vec::<serde_json::Value>::deserialize(d)?;
        v.iter().map(serde_q::from_value).collect::<Result<Vec<_>>>().map_err(serde::de::Error::custom)
    }
}

pub fn qvec_to_json(v: &[Q]) -> serde_json::Value {
    serde_json::Value::Array(v.iter().map(|q| serde_json::Value::String(render(q))).collect())
}

pub fn qvec_from_json(v: &serde_json::Value) -> Result<Vec<Q>> {
    match v {
        serde_json::Value::Array(items) => items.iter().map(serde_q::from_value).collect(),
        other => Err(Error::Parse(format!("expected array of rationals, got {other}"))),
    }
}

pub fn q_from_json(v: &serde_json::Value) -> Result<Q> {
    serde_q::from_value(v)
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render() {
        assert_eq!(parse("3/6").unwrap(), frac(1, 2));
        assert_eq!(parse("-4").unwrap(), int(-4));
        assert_eq!(render(&frac(-3, 9)), "-1/3");
        assert_eq!(render(&int(5)), "5");
        assert!(parse("1/0x").is_err());
    }

    #[test]
    fn abs_pow_small() {
        assert_eq!(abs_pow(&frac(-1, 2), 3), frac(1, 8));
        assert_eq!(abs_pow(&int(-7), 0), int(1));
    }
}
