use clap::Args;
use herglotz::precision::decimal_digits;
use herglotz::residues::{
    closed_form_residues, printed_residues, residue_table, ClosedFormVariant, Family, MellinIntegrand,
    PoleSource,
};
use herglotz::verification::render_complex;
use herglotz::Error;
use rug::{Complex, Float};
use serde::Serialize;

use crate::{parse_chi, parse_value, CliError, CliResult, Format, Global};

#[derive(Args, Debug)]
pub struct ResidueArgs {
    /// general_kN, theorem21_N1, theorem23_k0, character_k or character_k_shifted
    family: String,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long = "N", alias = "n")]
    n: Option<u32>,
    #[arg(long)]
    x: String,
    #[arg(long)]
    chi: Option<String>,
}

/// Builds an integrand, checking that the family's parameters were given.
pub fn integrand(family: &str, k: Option<i64>, n: Option<i64>, x: &Complex, chi: Option<&str>) -> CliResult<MellinIntegrand> {
    let fam: Family = family.parse().map_err(|e: Error| CliError::Usage(e.to_string()))?;
    let missing = |flag: &str| CliError::Usage(format!("{family} needs --{flag}"));
    let (k, n) = match fam {
        Family::GeneralKN => (k.ok_or_else(|| missing("k"))?, n.ok_or_else(|| missing("N"))?),
        Family::Theorem23K0 => (0, n.ok_or_else(|| missing("N"))?),
        _ => (k.ok_or_else(|| missing("k"))?, 1),
    };
    let chi = chi.map(parse_chi).transpose()?;
    Ok(MellinIntegrand::from_parts(fam, k, n, x.clone(), chi)?)
}

#[derive(Serialize)]
struct PoleRow {
    location: i64,
    order: u32,
    source: &'static str,
    residue: String,
}

#[derive(Serialize)]
struct ClosedFormRow {
    variant: String,
    value: Option<String>,
    abs_diff_from_oracle: Option<String>,
    error: Option<String>,
}

#[derive(Serialize)]
struct PrintedRow {
    label: String,
    location: Option<i64>,
    printed: String,
    oracle: String,
    abs_diff_printed: String,
    flagged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    corrected: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    abs_diff_corrected: Option<String>,
    #[serde(skip_serializing_if = "str::is_empty")]
    note: &'static str,
}

#[derive(Serialize)]
struct ResidueReport {
    family: String,
    k: i64,
    #[serde(rename = "N")]
    n: i64,
    x: String,
    chi: Option<String>,
    precision_bits: u32,
    poles: Vec<PoleRow>,
    residue_sum: String,
    closed_forms: Vec<ClosedFormRow>,
    printed: Vec<PrintedRow>,
}

fn source_name(s: PoleSource) -> &'static str {
    match s {
        PoleSource::Zeta => "zeta",
        PoleSource::Sine => "sine",
        PoleSource::Both => "zeta+sine",
    }
}

fn dist(a: &Complex, b: &Complex) -> String {
    let d = Complex::with_val(a.prec().0, a - b);
    format!("{:.3e}", Float::with_val(64, d.abs_ref()).to_f64())
}

pub fn cmd_residues(a: &ResidueArgs, g: &Global) -> CliResult<bool> {
    let ctx = g.context()?;
    let x = parse_value(&a.x, "x", ctx.prec(), true)?;
    let f = integrand(&a.family, a.k.map(i64::from), a.n.map(i64::from), &x, a.chi.as_deref())?;
    let digits = decimal_digits(ctx.bits());
    let table = residue_table(&f, &ctx)?;
    let mut sum = Complex::with_val(ctx.prec(), 0);
    for r in &table {
        sum += &r.residue;
    }
    let closed_forms = [ClosedFormVariant::Corrected, ClosedFormVariant::Paper, ClosedFormVariant::PaperProof]
        .into_iter()
        .map(|v| match closed_form_residues(&f, v, &ctx) {
            Ok(c) => ClosedFormRow {
                variant: v.to_string(),
                abs_diff_from_oracle: Some(dist(&c, &sum)),
                value: Some(render_complex(&c, digits)),
                error: None,
            },
            Err(e) => ClosedFormRow { variant: v.to_string(), value: None, abs_diff_from_oracle: None, error: Some(e.to_string()) },
        })
        .collect();
    let printed = match printed_residues(&f, &ctx) {
        Ok(entries) => entries
            .into_iter()
            .map(|e| {
                let oracle = match e.location {
                    Some(s) => table
                        .iter()
                        .find(|r| r.pole.location == s)
                        .map(|r| r.residue.clone())
                        .unwrap_or_else(|| Complex::with_val(ctx.prec(), 0)),
                    None => sum.clone(),
                };
                PrintedRow {
                    label: e.label,
                    location: e.location,
                    printed: render_complex(&e.printed, digits),
                    abs_diff_printed: dist(&e.printed, &oracle),
                    oracle: render_complex(&oracle, digits),
                    flagged: e.flagged,
                    corrected: e.flagged.then(|| render_complex(&e.corrected, digits)),
                    abs_diff_corrected: e.flagged.then(|| dist(&e.corrected, &oracle)),
                    note: e.note,
                }
            })
            .collect(),
        Err(_) => Vec::new(),
    };
    let report = ResidueReport {
        family: f.family.name().to_string(),
        k: f.k,
        n: f.n,
        x: a.x.clone(),
        chi: f.chi.as_ref().map(|c| c.label()),
        precision_bits: ctx.bits(),
        poles: table
            .iter()
            .map(|r| PoleRow {
                location: r.pole.location,
                order: r.pole.order,
                source: source_name(r.pole.source),
                residue: render_complex(&r.residue, digits),
            })
            .collect(),
        residue_sum: render_complex(&sum, digits),
        closed_forms,
        printed,
    };
    let text = match g.format.unwrap_or(Format::Json) {
        Format::Json => serde_json::to_string_pretty(&report).map_err(|e| CliError::Usage(e.to_string()))? + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["location", "order", "source", "residue"]).map_err(|e| CliError::Usage(e.to_string()))?;
            for p in &report.poles {
                w.write_record([p.location.to_string(), p.order.to_string(), p.source.to_string(), p.residue.clone()])
                    .map_err(|e| CliError::Usage(e.to_string()))?;
            }
            String::from_utf8(w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?)
                .map_err(|e| CliError::Usage(e.to_string()))?
        }
        Format::Text => {
            let mut s = format!("{} k={} N={} x={}\n", report.family, report.k, report.n, report.x);
            for p in &report.poles {
                s += &format!("  s={:<4} order {} ({})  residue {}\n", p.location, p.order, p.source, p.residue);
            }
            s += &format!("  sum {}\n", report.residue_sum);
            for c in &report.closed_forms {
                match (&c.value, &c.error) {
                    (Some(_), _) => {
                        s += &format!("  {} closed form: |diff| {}\n", c.variant, c.abs_diff_from_oracle.as_deref().unwrap_or(""))
                    }
                    (None, Some(e)) => s += &format!("  {} closed form: {e}\n", c.variant),
                    _ => {}
                }
            }
            for p in &report.printed {
                s += &format!(
                    "  {}: printed |diff| {}{}\n",
                    p.label,
                    p.abs_diff_printed,
                    p.abs_diff_corrected.as_ref().map(|d| format!(", corrected |diff| {d}")).unwrap_or_default()
                );
            }
            s
        }
    };
    g.emit(&text)?;
    Ok(true)
}
