//! JSON conventions: every integer is written as a decimal string; readers
//! also accept plain JSON numbers.

use std::fmt;

use num_bigint::BigInt;
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::intmat::IntMatrix;
use crate::semigroup::{NumericalSemigroup, QuotientPresentation};

/// A big integer with the string-or-number JSON encoding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dec(pub BigInt);

impl Serialize for Dec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

struct DecVisitor;

impl Visitor<'_> for DecVisitor {
    type Value = Dec;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("an integer or a decimal string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Dec, E> {
        Ok(Dec(v.into()))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Dec, E> {
        Ok(Dec(v.into()))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Dec, E> {
        v.trim().parse::<BigInt>().map(Dec).map_err(|_| E::custom(format!("invalid integer {v:?}")))
    }
}

impl<'de> Deserialize<'de> for Dec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Dec, D::Error> {
        d.deserialize_any(DecVisitor)
    }
}

/// `#[serde(with = "dec")]` for `BigInt` fields.
pub mod dec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigInt, D::Error> {
        Dec::deserialize(d).map(|x| x.0)
    }
}

/// `#[serde(with = "dec_u64")]` for `u64` fields.
pub mod dec_u64 {
    use super::*;
    use num_traits::ToPrimitive;

    pub fn serialize<S: Serializer>(v: &u64, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<u64, D::Error> {
        let x = Dec::deserialize(d)?.0;
        x.to_u64().ok_or_else(|| de::Error::custom(format!("{x} does not fit in 64 bits")))
    }
}

/// `#[serde(with = "dec_vec")]` for `Vec<BigInt>` fields.
pub mod dec_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigInt>, D::Error> {
        Vec::<Dec>::deserialize(d).map(|v| v.into_iter().map(|x| x.0).collect())
    }
}

/// `#[serde(with = "matrix")]` for `IntMatrix` fields, as an array of rows.
pub mod matrix {
    use super::*;

    pub fn serialize<S: Serializer>(m: &IntMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(m.to_rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<IntMatrix, D::Error> {
        let rows = Vec::<Vec<Dec>>::deserialize(d)?;
        let rows: Vec<Vec<BigInt>> = rows.into_iter().map(|r| r.into_iter().map(|x| x.0).collect()).collect();
        IntMatrix::from_rows(&rows).map_err(de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct PresentationJson {
    #[serde(with = "dec_vec")]
    numerators: Vec<BigInt>,
    #[serde(with = "dec")]
    denominator: BigInt,
}

impl Serialize for QuotientPresentation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PresentationJson { numerators: self.numerators().to_vec(), denominator: self.denominator().clone() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuotientPresentation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let p = PresentationJson::deserialize(d)?;
        QuotientPresentation::new(p.numerators, p.denominator).map_err(de::Error::custom)
    }
}

pub fn strings(v: &[BigInt]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

pub fn matrix_json(m: &IntMatrix) -> Value {
    json!(m.to_rows().iter().map(|r| strings(r)).collect::<Vec<_>>())
}

/// Summary of a semigroup; cofinite-only fields are `null` when the gcd exceeds one.
pub fn semigroup_json(s: &NumericalSemigroup) -> Value {
    let frobenius = match s.frobenius() {
        Ok(Some(f)) => json!(f.to_string()),
        _ => Value::Null,
    };
    let gaps = match s.gaps() {
        Ok(g) if g.len() <= 1000 => json!(g.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
        _ => Value::Null,
    };
    json!({
        "minimal_generators": strings(&s.minimal_generators()),
        "gcd": s.gcd().to_string(),
        "multiplicity": s.multiplicity().to_string(),
        "embedding_dimension": s.embedding_dimension().to_string(),
        "conductor": s.conductor().to_string(),
        "frobenius": frobenius,
        "gaps": gaps,
    })
}

/// Comma or whitespace separated integers, e.g. `3,5`.
pub fn parse_int_list(text: &str) -> Result<Vec<BigInt>> {
    let items: Vec<&str> = text.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).collect();
    if items.is_empty() {
        return Err(Error::Parse("empty integer list".into()));
    }
    items
        .iter()
        .map(|s| s.parse::<BigInt>().map_err(|_| Error::Parse(format!("invalid integer {s:?}"))))
        .collect()
}

/// `a,b,.../d`; the denominator defaults to 1.
pub fn parse_presentation(text: &str) -> Result<QuotientPresentation> {
    let (nums, den) = match text.rsplit_once('/') {
        Some((n, d)) => (n, d.trim()),
        None => (text, "1"),
    };
    let nums = parse_int_list(nums.trim().trim_start_matches('<').trim_end_matches('>'))?;
    let den = den.parse::<BigInt>().map_err(|_| Error::Parse(format!("invalid denominator {den:?}")))?;
    QuotientPresentation::new(nums, den)
}

/// A matrix given as a JSON array of rows, or as `{"generators": rows}`.
pub fn parse_matrix(text: &str) -> Result<IntMatrix> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let rows = match value {
        Value::Object(mut o) => o.remove("generators").ok_or_else(|| Error::Parse("missing \"generators\"".into()))?,
        v => v,
    };
    let rows: Vec<Vec<Dec>> = serde_json::from_value(rows).map_err(|e| Error::Parse(e.to_string()))?;
    if rows.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    IntMatrix::from_rows(&rows.into_iter().map(|r| r.into_iter().map(|x| x.0).collect()).collect::<Vec<Vec<BigInt>>>())
}
