//! Serde helpers: rationals are written as exact strings (`"-7/4"`).

use serde::ser::SerializeSeq;
use serde::Serializer;

use crate::exactla::Rational;

pub fn rational<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

pub fn rationals<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for q in v {
        seq.serialize_element(&q.to_string())?;
    }
    seq.end()
}

pub fn opt_rationals<S: Serializer>(v: &Option<Vec<Rational>>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => rationals(v, s),
        None => s.serialize_none(),
    }
}

/// Zero-based indices written one-based.
pub fn one_based<S: Serializer>(v: &[usize], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for i in v {
        seq.serialize_element(&(i + 1))?;
    }
    seq.end()
}
