//! Input documents.
//!
//! ```json
//! {
//!   "schema": 1,
//!   "name": "so3",
//!   "trunc": {"d": 6, "e": 2},
//!   "brackets": {"xy": [{"powers": [0,0,1,0], "coeff": "1"}], "yz": [...], "zx": [...]}
//! }
//! ```
//!
//! A Pfaffian document carries `"omega": {"dx": [...], "dy": [...], "dz": [...]}`
//! in place of `brackets`.

use std::path::Path;

use poisson3::json::{series_from_records, series_to_records, TermRecord};
use poisson3::poisson::BracketsDoc;
use poisson3::{DiffKind, DiffObject, PoissonFamily, Trunc};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OmegaDoc {
    pub dx: Vec<TermRecord>,
    pub dy: Vec<TermRecord>,
    pub dz: Vec<TermRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub schema: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
    pub trunc: Trunc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub brackets: Option<BracketsDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<OmegaDoc>,
}

fn usage(path: &str, e: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("{path}: {e}"))
}

impl InputDocument {
    pub fn parse(text: &str, origin: &str) -> Result<Self, CliError> {
        let doc: InputDocument = serde_json::from_str(text).map_err(|e| usage(origin, e))?;
        if doc.schema != SCHEMA_VERSION {
            return Err(usage(origin, format!("unsupported schema version {} (expected {SCHEMA_VERSION})", doc.schema)));
        }
        match (&doc.brackets, &doc.omega) {
            (Some(_), Some(_)) => Err(usage(origin, "give either `brackets` or `omega`, not both")),
            (None, None) => Err(usage(origin, "missing field `brackets`")),
            _ => Ok(doc),
        }
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let origin = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|e| usage(&origin, e))?;
        Self::parse(&text, &origin)
    }

    /// The bivector family; the Jacobi identity is not checked here.
    pub fn family(&self) -> Result<PoissonFamily, CliError> {
        let b = self
            .brackets
            .as_ref()
            .ok_or_else(|| CliError::Usage("this command needs a `brackets` document".into()))?;
        let t = self.trunc;
        let s = |recs: &[TermRecord], field: &str| series_from_records(t, recs, field).map_err(input_error);
        PoissonFamily::unchecked(s(&b.xy, "brackets.xy")?, s(&b.yz, "brackets.yz")?, s(&b.zx, "brackets.zx")?)
            .map_err(input_error)
    }

    pub fn omega(&self) -> Result<DiffObject, CliError> {
        let w = self
            .omega
            .as_ref()
            .ok_or_else(|| CliError::Usage("this command needs an `omega` document".into()))?;
        let t = self.trunc;
        let s = |recs: &[TermRecord], field: &str| series_from_records(t, recs, field).map_err(input_error);
        Ok(DiffObject::triple(DiffKind::OneForm, [s(&w.dx, "omega.dx")?, s(&w.dy, "omega.dy")?, s(&w.dz, "omega.dz")?]))
    }

    pub fn from_family(p: &PoissonFamily, name: Option<String>) -> Self {
        InputDocument {
            schema: SCHEMA_VERSION,
            name,
            notes: None,
            trunc: p.trunc(),
            brackets: Some(p.to_doc().brackets),
            omega: None,
        }
    }

    pub fn from_omega(w: &DiffObject, name: Option<String>) -> Self {
        let r = |i: usize| series_to_records(w.comp(i));
        InputDocument {
            schema: SCHEMA_VERSION,
            name,
            notes: None,
            trunc: w.trunc(),
            brackets: None,
            omega: Some(OmegaDoc { dx: r(0), dy: r(1), dz: r(2) }),
        }
    }
}

fn input_error(e: poisson3::Error) -> CliError {
    CliError::Usage(e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    const SO3: &str = r#"{"schema":1,"trunc":{"d":6,"e":2},"brackets":{
        "xy":[{"powers":[0,0,1,0],"coeff":"1"}],
        "yz":[{"powers":[1,0,0,0],"coeff":"1"}],
        "zx":[{"powers":[0,1,0,0],"coeff":"1/3"}]}}"#;

    #[test]
    fn parses_exact_rationals() {
        let doc = InputDocument::parse(SO3, "so3").unwrap();
        let p = doc.family().unwrap();
        assert_eq!(p.bzx().terms().count(), 1);
        let back = serde_json::to_string(&InputDocument::from_family(&p, None)).unwrap();
        assert!(back.contains(r#""coeff":"1/3""#));
    }

    #[test]
    fn rejects_unknown_fields_and_versions() {
        let extra = SO3.replacen("\"schema\":1", "\"schema\":1,\"colour\":2", 1);
        assert!(matches!(InputDocument::parse(&extra, "x"), Err(CliError::Usage(_))));
        let v2 = SO3.replacen("\"schema\":1", "\"schema\":2", 1);
        assert!(InputDocument::parse(&v2, "x").is_err());
    }

    #[test]
    fn degree_overflow_names_the_field() {
        let big = SO3.replacen("[0,0,1,0]", "[9,0,0,0]", 1);
        let err = InputDocument::parse(&big, "x").unwrap().family().unwrap_err();
        assert!(err.to_string().contains("brackets.xy"), "{err}");
    }

    #[test]
    fn malformed_json_reports_position() {
        let err = InputDocument::parse("{\"schema\": 1,\n \"trunc\": }", "f.json").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }
}
