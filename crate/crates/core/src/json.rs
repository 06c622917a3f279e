//! JSON encodings with exact rationals.
//!
//! A series is a list of `{"powers":[i,j,k,l],"coeff":"p/q"}` records in the
//! canonical monomial order; rationals are written in lowest terms as
//! decimal integer strings.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::{CoordinateChange, Monomial, Series, Trunc};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermRecord {
    pub powers: [u32; 4],
    pub coeff: String,
}

pub fn rational_string(q: &Rational) -> String {
    q.to_string()
}

/// Parses `"p"`, `"-p"` or `"p/q"` with decimal integers.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::Input(format!("bad rational {s:?}"));
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n, d),
        None => (t, "1"),
    };
    let digits = |x: &str| {
        let body = x.strip_prefix('-').unwrap_or(x);
        !body.is_empty() && body.bytes().all(|b| b.is_ascii_digit())
    };
    if !digits(n) || !digits(d) || d.starts_with('-') {
        return Err(bad());
    }
    let n = BigInt::from_str(n).map_err(|_| bad())?;
    let d = BigInt::from_str(d).map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::Input(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(n, d))
}

pub fn series_to_records(s: &Series) -> Vec<TermRecord> {
    s.terms()
        .map(|(m, c)| TermRecord { powers: m.0, coeff: rational_string(c) })
        .collect()
}

/// Builds a series; `field` names the location for diagnostics.
pub fn series_from_records(trunc: Trunc, recs: &[TermRecord], field: &str) -> Result<Series> {
    let mut terms = Vec::with_capacity(recs.len());
    for (i, r) in recs.iter().enumerate() {
        let c = parse_rational(&r.coeff).map_err(|e| Error::Input(format!("{field}[{i}].coeff: {e}")))?;
        terms.push((Monomial(r.powers), c));
    }
    Series::try_from_terms(trunc, terms).map_err(|e| Error::Input(format!("{field}: {e}")))
}

/// Serde helper for exact rationals stored as strings.
pub mod rational_str {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&rational_string(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde helper for optional exact rationals.
pub mod opt_rational_str {
    use super::*;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(q: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.serialize_some(&rational_string(q)),
            None => s.serialize_none(),
        }
    }
}

/// Serde helper for lists of exact rationals.
pub mod rational_vec {
    use super::*;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(q: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(q.iter().map(rational_string))
    }
}

/// A series packed with its bounds, for reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesDoc {
    pub trunc: Trunc,
    pub terms: Vec<TermRecord>,
}

impl From<&Series> for SeriesDoc {
    fn from(s: &Series) -> Self {
        SeriesDoc { trunc: s.trunc(), terms: series_to_records(s) }
    }
}

impl SeriesDoc {
    pub fn to_series(&self) -> Result<Series> {
        series_from_records(self.trunc, &self.terms, "terms")
    }
}

/// Serializes a series as its term records.
pub fn series_records<S: serde::Serializer>(s: &Series, ser: S) -> std::result::Result<S::Ok, S::Error> {
    series_to_records(s).serialize(ser)
}

/// Serializes a list of series as a list of term-record lists.
pub fn series_list<S: serde::Serializer>(v: &[Series], ser: S) -> std::result::Result<S::Ok, S::Error> {
    v.iter().map(series_to_records).collect::<Vec<_>>().serialize(ser)
}

/// Replayable record of a coordinate change.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChangeDoc {
    pub trunc: Trunc,
    pub x: Vec<TermRecord>,
    pub y: Vec<TermRecord>,
    pub z: Vec<TermRecord>,
}

impl From<&CoordinateChange> for ChangeDoc {
    fn from(c: &CoordinateChange) -> Self {
        let [x, y, z] = c.images().each_ref().map(series_to_records);
        ChangeDoc { trunc: c.trunc(), x, y, z }
    }
}

impl ChangeDoc {
    pub fn to_change(&self) -> Result<CoordinateChange> {
        let t = self.trunc;
        let images = [
            series_from_records(t, &self.x, "x")?,
            series_from_records(t, &self.y, "y")?,
            series_from_records(t, &self.z, "z")?,
        ];
        Ok(CoordinateChange::new(images)?)
    }
}

/// Serializes a change log as an ordered list of [`ChangeDoc`]s.
pub fn change_list<S: serde::Serializer>(v: &[CoordinateChange], ser: S) -> std::result::Result<S::Ok, S::Error> {
    v.iter().map(ChangeDoc::from).collect::<Vec<_>>().serialize(ser)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::ratio;

    #[test]
    fn rationals_parse_exactly() {
        assert_eq!(parse_rational("1/3").unwrap(), ratio(1, 3));
        assert_eq!(parse_rational("-4/6").unwrap(), ratio(-2, 3));
        assert_eq!(parse_rational("7").unwrap(), ratio(7, 1));
        for bad in ["", "1/0", "0.5", "1/-2", "x", "1//2"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
        assert_eq!(rational_string(&ratio(-2, 4)), "-1/2");
        assert_eq!(rational_string(&ratio(6, 3)), "2");
    }

    #[test]
    fn series_roundtrip_and_overflow() {
        let t = Trunc::new(6, 2);
        let s = Series::from_ints(t, &[(1, 0, 0, 0, 1, 3), (0, 2, 1, 1, -5, 2)]);
        let recs = series_to_records(&s);
        assert_eq!(series_from_records(t, &recs, "s").unwrap(), s);
        let over = vec![TermRecord { powers: [9, 0, 0, 0], coeff: "1".into() }];
        let err = series_from_records(t, &over, "brackets.xy").unwrap_err();
        assert!(err.to_string().contains("exceeds truncation"), "{err}");
    }
}
