//! Rationals on the wire are strings `"a/b"` (or a bare integer). Decimals are rejected.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serializer};

use crate::error::{Error, Result};

pub fn parse_rational(text: &str) -> Result<BigRational> {
    let text = text.trim();
    if text.contains('.') || text.contains('e') || text.contains('E') {
        return Err(Error::param(format!(
            "rational '{text}' must be written as a/b, decimals are not accepted"
        )));
    }
    let (num, den) = match text.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (text, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| Error::param(format!("bad numerator in '{text}'")))?;
    let den = BigInt::from_str(den).map_err(|_| Error::param(format!("bad denominator in '{text}'")))?;
    if den.is_zero() {
        return Err(Error::param(format!("zero denominator in '{text}'")));
    }
    Ok(BigRational::new(num, den))
}

pub fn format_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub(crate) fn serialize<S: Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(q))
}

pub(crate) fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigRational, D::Error> {
    let text = String::deserialize(d)?;
    parse_rational(&text).map_err(serde::de::Error::custom)
}
