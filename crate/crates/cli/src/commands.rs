use std::fmt::Write as _;
use std::path::PathBuf;

use poisson3::bifurcation::{eps_grid, predict, verify, SearchSettings, VerificationReport, VerifySettings};
use poisson3::classifier::{classify, classify_1jet, CoarseClass};
use poisson3::json::series_to_records;
use poisson3::normal_form::{a_normal_form, n_normal_form, reduce_to_fg, v_reduce, verify_fg};
use poisson3::poisson::mod_degree;
use poisson3::{DiffObject, PoissonFamily, Trunc};
use serde_json::{json, Map, Value};

use crate::error::CliError;
use crate::input::InputDocument;

/// Report plus the human summary; `ok = false` maps to exit code 1.
pub struct Outcome {
    pub report: Value,
    pub summary: String,
    pub ok: bool,
}

fn header(command: &str, doc: &InputDocument, degree: Option<u32>) -> Map<String, Value> {
    let mut settings = Map::new();
    settings.insert("trunc".into(), json!(doc.trunc));
    if let Some(d) = degree {
        settings.insert("degree".into(), json!(d));
    }
    let mut m = Map::new();
    m.insert("command".into(), json!(command));
    m.insert("input".into(), json!(doc.name));
    m.insert("settings".into(), Value::Object(settings));
    m
}

fn components(w: &DiffObject) -> Value {
    let basis = w.kind().basis();
    Value::Object(basis.iter().zip(w.comps()).map(|(b, s)| (b.to_string(), json!(series_to_records(s)))).collect())
}

fn degree_or_default(degree: Option<u32>, t: Trunc) -> Result<u32, CliError> {
    match degree {
        Some(d) if d > t.d => {
            Err(CliError::Usage(format!("--degree {d} exceeds the input truncation d = {}", t.d)))
        }
        Some(d) => Ok(d),
        None => Ok(t.d),
    }
}

pub fn check(doc: &InputDocument) -> Result<Outcome, CliError> {
    let p = doc.family()?;
    let full = p.jacobi_residual();
    let trusted = p.trusted_residual();
    let d = p.trunc().d.saturating_sub(1);
    let ok = trusted.is_zero();
    let mut m = header("check", doc, None);
    m.insert("jacobi_residual".into(), json!(series_to_records(&full)));
    m.insert("trusted_degree".into(), json!(d));
    m.insert("trusted_residual".into(), json!(series_to_records(&trusted)));
    m.insert("poisson".into(), json!(ok));
    let summary = if ok {
        format!("Jacobi identity holds below degree {d}")
    } else {
        format!("Jacobi identity fails: {} residual terms below degree {d}", trusted.terms().count())
    };
    Ok(Outcome { report: Value::Object(m), summary, ok })
}

pub fn curl(doc: &InputDocument) -> Result<Outcome, CliError> {
    let p = doc.family()?;
    let c = p.curl().map(|s| mod_degree(s, p.trunc().d.saturating_sub(1)));
    let at0: Vec<String> = c.comps().iter().map(|s| s.constant_term().to_string()).collect();
    let mut m = header("curl", doc, None);
    m.insert("curl".into(), components(&c));
    m.insert("at_origin".into(), json!(at0));
    let summary = format!("curl at the origin, eps = 0: ({})", at0.join(", "));
    Ok(Outcome { report: Value::Object(m), summary, ok: true })
}

pub fn normal_form(doc: &InputDocument, degree: Option<u32>) -> Result<Outcome, CliError> {
    let p = doc.family()?;
    p.clone().validate()?;
    let d = degree_or_default(degree, p.trunc())?;
    let coarse = classify_1jet(&p.at_eps0().lie_1jet_origin()?);
    let mut m = header("normal-form", doc, Some(d));
    m.insert("coarse_class".into(), json!(coarse));
    let mut summary = format!("coarse class {coarse:?}");
    if coarse == CoarseClass::V {
        let (planar, change) = v_reduce(&p)?;
        m.insert("planar".into(), json!(planar));
        m.insert("change".into(), json!(poisson3::json::ChangeDoc::from(&change)));
        summary.push_str("; reduced to a planar family");
        return Ok(Outcome { report: Value::Object(m), summary, ok: true });
    }
    let nf = reduce_to_fg(&p, d)?;
    let residual = verify_fg(&nf);
    m.insert("fg".into(), json!(nf));
    m.insert("fg_residual".into(), components(&residual));
    let _ = write!(summary, "; (f, g) form residual {}", if residual.is_zero() { "zero" } else { "NONZERO" });
    match coarse {
        CoarseClass::Aplus | CoarseClass::Aminus => match a_normal_form(&p, d) {
            Ok(a) => {
                let _ = write!(summary, "; A normal form m = {}", a.m);
                m.insert("a_normal_form".into(), json!(a));
            }
            Err(e) => {
                m.insert("a_normal_form_error".into(), json!(e.to_string()));
            }
        },
        CoarseClass::N => match n_normal_form(nf) {
            Ok(n) => {
                summary.push_str("; N normal form computed");
                m.insert("n_normal_form".into(), json!(n));
            }
            Err(e) => {
                m.insert("n_normal_form_error".into(), json!(e.to_string()));
            }
        },
        _ => {}
    }
    Ok(Outcome { report: Value::Object(m), summary, ok: residual.is_zero() })
}

pub fn classify_cmd(doc: &InputDocument, degree: Option<u32>) -> Result<Outcome, CliError> {
    let p = doc.family()?;
    p.clone().validate()?;
    let d = degree_or_default(degree, p.trunc())?;
    let class = classify(&p, d)?;
    let mut m = header("classify", doc, Some(d));
    let Value::Object(fields) = json!(class) else { unreachable!("classes serialize as objects") };
    m.extend(fields);
    let summary = format!("class {}", class.discrete_key());
    Ok(Outcome { report: Value::Object(m), summary, ok: true })
}

pub struct BifurcateArgs {
    pub degree: Option<u32>,
    pub eps: (f64, f64, usize),
    pub half_width: f64,
    pub tol: f64,
    pub seeds: usize,
    pub predict_only: bool,
    pub csv: Option<PathBuf>,
}

/// Parses `A:B:N`.
pub fn parse_eps(s: &str) -> Result<(f64, f64, usize), String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, n] = parts.as_slice() else { return Err(format!("expected A:B:N, got {s:?}")) };
    let f = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}"));
    let n: usize = n.trim().parse().map_err(|e| format!("{n:?}: {e}"))?;
    let (a, b) = (f(a)?, f(b)?);
    if !(a.is_finite() && b.is_finite()) || a > b || n == 0 {
        return Err(format!("invalid grid {s:?}"));
    }
    Ok((a, b, n))
}

fn csv(report: &VerificationReport) -> String {
    let mut out = String::from("eps,x,y,z,class,dimension,residual\n");
    for o in &report.observations {
        for r in &o.points {
            let [x, y, z] = r.point;
            let class = json!(r.class);
            let _ = writeln!(out, "{},{x},{y},{z},{},{},{}", o.eps, class.as_str().unwrap_or(""), r.dimension, r.residual);
        }
    }
    out
}

pub fn bifurcate(doc: &InputDocument, args: &BifurcateArgs) -> Result<Outcome, CliError> {
    let p = doc.family()?;
    p.clone().validate()?;
    let d = degree_or_default(args.degree, p.trunc())?;
    let prediction = predict(&p, d)?;
    let settings = VerifySettings {
        search: SearchSettings {
            half_width: args.half_width,
            tol: args.tol,
            seeds_per_axis: args.seeds,
            ..SearchSettings::default()
        },
        eps_grid: eps_grid(args.eps.0, args.eps.1, args.eps.2),
        ..VerifySettings::default()
    };
    let mut m = header("bifurcate", doc, Some(d));
    let scenario = json!(prediction.scenario);
    let mut summary = format!("scenario {}", scenario.as_str().unwrap_or("?"));
    if args.predict_only {
        m.insert("prediction".into(), json!(prediction));
        m.insert("verification".into(), json!(settings));
        return Ok(Outcome { report: Value::Object(m), summary, ok: true });
    }
    let report = verify(&p, prediction, &settings);
    if let Some(path) = &args.csv {
        std::fs::write(path, csv(&report)).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    }
    let judged = report.observations.iter().filter(|o| o.matched.is_some()).count();
    let failed = report.observations.iter().filter(|o| o.matched == Some(false)).count();
    let _ = write!(
        summary,
        "; verdict {} ({failed} of {judged} judged eps values mismatch)",
        if report.verdict { "match" } else { "mismatch" }
    );
    let ok = report.verdict;
    let Value::Object(fields) = json!(report) else { unreachable!("reports serialize as objects") };
    m.extend(fields);
    Ok(Outcome { report: Value::Object(m), summary, ok })
}

pub fn pfaffian_to(doc: &InputDocument) -> Result<Outcome, CliError> {
    let p = doc.family()?;
    let w = p.to_pfaffian();
    let out = InputDocument::from_omega(&w, doc.name.clone());
    let summary = "bivector converted to its Pfaffian 1-form".to_string();
    Ok(Outcome { report: json!(out), summary, ok: true })
}

pub fn pfaffian_from(doc: &InputDocument) -> Result<Outcome, CliError> {
    let w = doc.omega()?;
    let p = PoissonFamily::from_pfaffian(&w)?;
    let out = InputDocument::from_family(&p, doc.name.clone());
    let summary = "integrable 1-form converted to its bivector".to_string();
    Ok(Outcome { report: json!(out), summary, ok: true })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eps_grid_syntax() {
        assert_eq!(parse_eps("-0.1:0.1:21").unwrap(), (-0.1, 0.1, 21));
        assert!(parse_eps("0.1:-0.1:3").is_err());
        assert!(parse_eps("1:2").is_err());
        assert!(parse_eps("0:1:0").is_err());
    }
}
