//! Stable CSV and JSON renderings. Enclosures are written as outward-rounded
//! decimal `[lo, hi]` pairs at a fixed digit count.

use serde::{Deserialize, Serialize};

use crate::approx::{ApproxRecord, CzReport, CzStatus, PisotCertificate};
use crate::effective::EffectiveGapReport;
use crate::error::{Error, Result};
use crate::exactnum::{format_rational, interval_strings, CertifiedComplex, CertifiedReal, Verdict, REPORT_DIGITS};
use crate::twistform::{FamilyReport, Solution, TwistedForm};

pub const SCHEMA_VERSION: u32 = 1;

pub const APPROX_COLUMNS: [&str; 10] = [
    "n", "p", "q", "lhs_lo", "lhs_hi", "rhs_lo", "rhs_hi", "quality_lo", "quality_hi", "verdict",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: String,
    pub hi: String,
}

impl Interval {
    pub fn of(x: &CertifiedReal) -> Self {
        let (lo, hi) = interval_strings(x, REPORT_DIGITS);
        Interval { lo, hi }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexInterval {
    pub re: Interval,
    pub im: Interval,
}

impl ComplexInterval {
    pub fn of(z: &CertifiedComplex) -> Self {
        ComplexInterval {
            re: Interval::of(&z.re),
            im: Interval::of(&z.im),
        }
    }
}

/// One CSV row of an approximation report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApproxRow {
    pub n: String,
    pub p: String,
    pub q: String,
    pub lhs_lo: String,
    pub lhs_hi: String,
    pub rhs_lo: String,
    pub rhs_hi: String,
    pub quality_lo: String,
    pub quality_hi: String,
    pub verdict: Verdict,
}

impl ApproxRow {
    pub fn from_record(r: &ApproxRecord) -> Self {
        let lhs = Interval::of(&r.lhs);
        let rhs = Interval::of(&r.rhs);
        let (quality_lo, quality_hi) = match &r.quality {
            Some(q) => {
                let i = Interval::of(q);
                (i.lo, i.hi)
            }
            None => (String::new(), String::new()),
        };
        ApproxRow {
            n: r.unit.clone(),
            p: r.p.to_string(),
            q: r.q.to_string(),
            lhs_lo: lhs.lo,
            lhs_hi: lhs.hi,
            rhs_lo: rhs.lo,
            rhs_hi: rhs.hi,
            quality_lo,
            quality_hi,
            verdict: r.verdict,
        }
    }
}

fn schema_line(kind: &str) -> String {
    format!("# unit-twist-lab {kind} schema_version={SCHEMA_VERSION}\n")
}

/// Schema comment line, header, then one row per record.
pub fn approx_csv(records: &[ApproxRecord]) -> Result<String> {
    let rows: Vec<ApproxRow> = records.iter().map(ApproxRow::from_record).collect();
    approx_csv_rows(&rows)
}

pub fn approx_csv_rows(rows: &[ApproxRow]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(APPROX_COLUMNS).map_err(csv_err)?;
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    let body = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(schema_line("approx") + &String::from_utf8(body).map_err(|e| Error::Parse(e.to_string()))?)
}

pub fn parse_approx_csv(text: &str) -> Result<Vec<ApproxRow>> {
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    r.deserialize().map(|row| row.map_err(csv_err)).collect()
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApproxReportJson {
    pub schema_version: u32,
    pub kind: String,
    pub records: Vec<ApproxRow>,
}

pub fn approx_json(kind: &str, records: &[ApproxRecord]) -> ApproxReportJson {
    ApproxReportJson {
        schema_version: SCHEMA_VERSION,
        kind: kind.to_string(),
        records: records.iter().map(ApproxRow::from_record).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PisotJson {
    pub verdict: Verdict,
    pub degree: usize,
    pub trace: String,
    pub identity_modulus: Interval,
    pub conjugate_moduli: Vec<Interval>,
}

impl PisotJson {
    pub fn of(c: &PisotCertificate) -> Self {
        PisotJson {
            verdict: c.verdict,
            degree: c.degree,
            trace: format_rational(&c.trace),
            identity_modulus: Interval::of(&c.identity_modulus),
            conjugate_moduli: c.conjugate_moduli.iter().map(Interval::of).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CzJson {
    pub schema_version: u32,
    pub exceeds_one: Verdict,
    pub pseudo_pisot: PisotJson,
    pub nonzero_distance: bool,
    pub delta: usize,
    pub status: String,
    pub reason: Option<String>,
    pub record: Option<ApproxRow>,
}

impl CzJson {
    pub fn of(r: &CzReport) -> Self {
        let (status, reason) = match &r.status {
            CzStatus::Applies => ("applies".to_string(), None),
            CzStatus::Excluded(why) => ("excluded".to_string(), Some(why.clone())),
            CzStatus::Undecided(why) => ("undecided".to_string(), Some(why.clone())),
        };
        CzJson {
            schema_version: SCHEMA_VERSION,
            exceeds_one: r.exceeds_one,
            pseudo_pisot: PisotJson::of(&r.pisot),
            nonzero_distance: r.nonzero_distance,
            delta: r.delta,
            status,
            reason,
            record: r.record.as_ref().map(ApproxRow::from_record),
        }
    }
}

/// Every intermediate of the effective pipeline.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EffectiveJson {
    pub schema_version: u32,
    pub branch: crate::effective::GapBranch,
    pub p: String,
    pub q: String,
    pub direct_gap: Interval,
    pub gamma: Option<ComplexInterval>,
    pub gamma_distance: Option<Interval>,
    pub lambda0: Option<ComplexInterval>,
    pub bracket: Option<Verdict>,
    pub exponents: Vec<i64>,
    pub torsion_order: Option<u32>,
    pub unit_logs: Vec<ComplexInterval>,
    pub lambda_last: Option<ComplexInterval>,
    pub reconstruction_ok: Option<bool>,
    pub log_a: Vec<Interval>,
    pub log_b: Option<Interval>,
    pub kappa4: Interval,
    pub kappa5: Option<Interval>,
    pub kappa6: Option<Interval>,
    pub baker: Option<Interval>,
    pub kappa7: Option<Interval>,
    pub kappa3: Option<Interval>,
    pub lower_bound: Option<Interval>,
    pub sanity: Verdict,
    pub note: String,
}

impl EffectiveJson {
    pub fn of(r: &EffectiveGapReport) -> Self {
        let iv = |x: &Option<CertifiedReal>| x.as_ref().map(Interval::of);
        let cv = |x: &Option<CertifiedComplex>| x.as_ref().map(ComplexInterval::of);
        EffectiveJson {
            schema_version: SCHEMA_VERSION,
            branch: r.branch,
            p: r.p.to_string(),
            q: r.q.to_string(),
            direct_gap: Interval::of(&r.direct_gap),
            gamma: cv(&r.gamma),
            gamma_distance: iv(&r.gamma_distance),
            lambda0: cv(&r.lambda0),
            bracket: r.bracket,
            exponents: r.exponents.clone(),
            torsion_order: r.torsion_order,
            unit_logs: r.unit_logs.iter().map(ComplexInterval::of).collect(),
            lambda_last: cv(&r.lambda_last),
            reconstruction_ok: r.reconstruction_ok,
            log_a: r.log_a.iter().map(Interval::of).collect(),
            log_b: iv(&r.log_b),
            kappa4: Interval::of(&r.kappa4),
            kappa5: iv(&r.kappa5),
            kappa6: iv(&r.kappa6),
            baker: iv(&r.baker),
            kappa7: iv(&r.kappa7),
            kappa3: iv(&r.kappa3),
            lower_bound: iv(&r.lower_bound),
            sanity: r.sanity,
            note: "bound conditional on the configured kappa4, kappa5, kappa6".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThueJson {
    pub schema_version: u32,
    pub unit: String,
    pub form: String,
    pub coefficients: Vec<String>,
    pub k: i64,
    #[serde(rename = "box")]
    pub bound: u64,
    pub solutions: Vec<Solution>,
}

impl ThueJson {
    pub fn of(form: &TwistedForm, k: i64, bound: u64, solutions: &[Solution]) -> Self {
        ThueJson {
            schema_version: SCHEMA_VERSION,
            unit: form.unit.clone(),
            form: form.to_form_string(),
            coefficients: form.coeffs.iter().map(|c| c.to_string()).collect(),
            k,
            bound,
            solutions: solutions.to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyJson {
    pub schema_version: u32,
    #[serde(flatten)]
    pub report: FamilyReportRows,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyReportRows {
    #[serde(rename = "box")]
    pub bound: u64,
    pub forms: Vec<(String, String)>,
    /// `(unit, k, solution count, count with xy != 0, error)`.
    pub counts: Vec<(String, i64, usize, usize, Option<String>)>,
}

impl FamilyJson {
    pub fn of(r: &FamilyReport) -> Self {
        FamilyJson {
            schema_version: SCHEMA_VERSION,
            report: FamilyReportRows {
                bound: r.bound,
                forms: r.forms.clone(),
                counts: r
                    .cells
                    .iter()
                    .map(|c| (c.unit.clone(), c.k, c.solutions.len(), c.count_nonzero, c.error.clone()))
                    .collect(),
            },
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| Error::Parse(e.to_string()))
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::liouville_check;
    use crate::effective::{effective_gap, EffectiveConfig};
    use crate::unitgrp::cubic_family;

    #[test]
    fn empty_csv_is_header_only() {
        let s = approx_csv(&[]).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].starts_with('#'));
        assert_eq!(lines[1], APPROX_COLUMNS.join(","));
        assert!(parse_approx_csv(&s).unwrap().is_empty());
    }

    #[test]
    fn one_record_round_trips() {
        let c = cubic_family(2).unwrap();
        let mut rec = liouville_check(&c.omega(), &c.eps0, &22.into(), &1.into()).unwrap();
        rec.unit = "1".into();
        let s = approx_csv(std::slice::from_ref(&rec)).unwrap();
        let data = s.lines().nth(2).unwrap();
        assert_eq!(data.split(',').count(), 10);
        let rows = parse_approx_csv(&s).unwrap();
        assert_eq!(rows, vec![ApproxRow::from_record(&rec)]);
        let j = to_json(&approx_json("liouville", &[rec])).unwrap();
        let back: ApproxReportJson = from_json(&j).unwrap();
        assert_eq!(back.records, rows);
    }

    #[test]
    fn effective_json_has_intermediates() {
        let c = cubic_family(2).unwrap();
        let basis = c.basis().unwrap();
        let one = crate::numfield::FieldElement::one(&c.field);
        let rep = effective_gap(&c.omega(), &one, &2.into(), &1.into(), &basis, &EffectiveConfig::default()).unwrap();
        let j = EffectiveJson::of(&rep);
        let text = to_json(&j).unwrap();
        for key in ["lambda0", "lambda_last", "log_a", "log_b", "baker", "kappa7", "lower_bound", "sanity"] {
            assert!(text.contains(&format!("\"{key}\"")), "{key}");
        }
        let back: EffectiveJson = from_json(&text).unwrap();
        assert_eq!(back, j);
    }
}
