use std::collections::BTreeMap;

use rug::{Complex, Float};
use serde::Serialize;

use super::{CheckReport, Role};
use crate::error::{Error, Result};
use crate::precision::decimal_digits;

fn render_real(x: &Float, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_zero() {
        return "0".into();
    }
    format!("{:.*e}", digits.saturating_sub(1), x)
}

/// Decimal rendering "re", "re+imi" or "re-imi" with `digits` significant digits.
pub fn render_complex(z: &Complex, digits: usize) -> String {
    let re = render_real(z.real(), digits);
    if z.imag().is_zero() {
        return re;
    }
    let im = render_real(z.imag(), digits);
    if im.starts_with('-') {
        format!("{re}{im}i")
    } else {
        format!("{re}+{im}i")
    }
}

/// One flattened point, in the exported schema.
#[derive(Debug, Clone, Serialize)]
pub struct ReportRow {
    pub theorem_id: String,
    pub params: BTreeMap<String, String>,
    pub variant: String,
    pub role: Role,
    pub lhs: String,
    pub rhs: String,
    pub abs_err: String,
    pub rel_err: String,
    pub tol: String,
    pub pass: bool,
    pub error: Option<String>,
    pub variant_notes: String,
    pub precision_bits: u32,
    pub wall_time_ms: f64,
}

fn sci(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else {
        format!("{v:.3e}")
    }
}

impl ReportRow {
    /// Rows for every point of every report. `timings = false` zeroes the
    /// wall-clock field so identical runs serialize identically.
    pub fn collect(reports: &[CheckReport], timings: bool) -> Vec<ReportRow> {
        let mut rows = Vec::new();
        for r in reports {
            let digits = decimal_digits(r.precision_bits);
            let notes = r.variant_notes.join("; ");
            for p in &r.points {
                rows.push(ReportRow {
                    theorem_id: r.theorem_id.to_string(),
                    params: p.params.clone(),
                    variant: p.variant.clone(),
                    role: p.role,
                    lhs: render_complex(&p.lhs, digits),
                    rhs: render_complex(&p.rhs, digits),
                    abs_err: sci(p.abs_err),
                    rel_err: sci(p.rel_err),
                    tol: sci(p.tol),
                    pass: p.pass,
                    error: p.error.clone(),
                    variant_notes: notes.clone(),
                    precision_bits: r.precision_bits,
                    wall_time_ms: if timings { (p.wall_time_ms * 1e3).round() / 1e3 } else { 0.0 },
                });
            }
        }
        rows
    }
}

#[derive(Serialize)]
struct JsonReport<'a> {
    theorem_id: String,
    pass: bool,
    max_abs_err: String,
    variant_notes: &'a [String],
    precision_bits: u32,
    points: Vec<ReportRow>,
}

/// Pretty JSON: one object per report, each holding its rows.
pub fn reports_to_json(reports: &[CheckReport], timings: bool) -> Result<String> {
    let out: Vec<JsonReport> = reports
        .iter()
        .map(|r| JsonReport {
            theorem_id: r.theorem_id.to_string(),
            pass: r.pass,
            max_abs_err: sci(r.max_abs_err),
            variant_notes: &r.variant_notes,
            precision_bits: r.precision_bits,
            points: ReportRow::collect(std::slice::from_ref(r), timings),
        })
        .collect();
    serde_json::to_string_pretty(&out).map_err(|e| Error::Config(format!("JSON encoding failed: {e}")))
}

#[derive(Serialize)]
struct CsvRow<'a> {
    theorem_id: &'a str,
    params: String,
    variant: &'a str,
    role: Role,
    lhs: &'a str,
    rhs: &'a str,
    abs_err: &'a str,
    rel_err: &'a str,
    tol: &'a str,
    pass: bool,
    error: &'a str,
    variant_notes: &'a str,
    precision_bits: u32,
    wall_time_ms: f64,
}

/// Flat CSV, one line per point; params are rendered as `k=v;k=v`.
pub fn reports_to_csv(reports: &[CheckReport], timings: bool) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in ReportRow::collect(reports, timings) {
        let params = row.params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";");
        w.serialize(CsvRow {
            theorem_id: &row.theorem_id,
            params,
            variant: &row.variant,
            role: row.role,
            lhs: &row.lhs,
            rhs: &row.rhs,
            abs_err: &row.abs_err,
            rel_err: &row.rel_err,
            tol: &row.tol,
            pass: row.pass,
            error: row.error.as_deref().unwrap_or(""),
            variant_notes: &row.variant_notes,
            precision_bits: row.precision_bits,
            wall_time_ms: row.wall_time_ms,
        })
        .map_err(|e| Error::Config(format!("CSV encoding failed: {e}")))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Config(format!("CSV encoding failed: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Config(e.to_string()))
}
