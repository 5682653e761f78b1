use herglotz::characters::{characters_mod, CharValue};
use herglotz::verification::{CheckReport, Role};
use serde::Serialize;

use crate::{CliError, CliResult, Format};

fn role(r: Role) -> &'static str {
    match r {
        Role::Primary => "primary",
        Role::Candidate => "candidate",
        Role::Informational => "info",
    }
}

/// Human-readable report: a verdict line per check and one line per point.
pub fn text(reports: &[CheckReport], timings: bool) -> String {
    let mut s = String::new();
    for r in reports {
        s += &format!(
            "{} {} (max |err| {:.3e}, {} bits)\n",
            r.theorem_id,
            if r.pass { "PASS" } else { "FAIL" },
            r.max_abs_err,
            r.precision_bits
        );
        for p in &r.points {
            let params = p.params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ");
            let verdict = if p.pass { "ok" } else { "x " };
            s += &format!("  {verdict} {params} [{} {}] |err| {:.3e} tol {:.0e}", p.variant, role(p.role), p.abs_err, p.tol);
            if timings {
                s += &format!(" {:.1} ms", p.wall_time_ms);
            }
            if let Some(e) = &p.error {
                s += &format!(" error: {e}");
            }
            s.push('\n');
        }
        for n in &r.variant_notes {
            s += &format!("  note: {n}\n");
        }
    }
    let failed = reports.iter().filter(|r| !r.pass).count();
    s += &format!("{} checks, {} failed\n", reports.len(), failed);
    s
}

#[derive(Serialize)]
struct CharRow {
    label: String,
    modulus: u64,
    index: usize,
    parity: u8,
    primitive: bool,
    principal: bool,
    real: bool,
    conductor: u64,
    /// χ(1), …, χ(d) as "0" or "e(v/L)", meaning e^{2πi v/L}
    values: Vec<String>,
}

/// The canonical "d.j" labels for 3 ≤ d ≤ `max_modulus`.
pub fn characters(max_modulus: u64, fmt: Format) -> CliResult<String> {
    let mut rows = Vec::new();
    for d in 3..=max_modulus {
        for chi in characters_mod(d)? {
            let values = (1..=d as i64)
                .map(|n| match chi.value(n) {
                    CharValue::Zero => "0".to_string(),
                    CharValue::Root { exponent: 0, .. } => "1".to_string(),
                    CharValue::Root { exponent, order } if 2 * exponent == order => "-1".to_string(),
                    CharValue::Root { exponent, order } => {
                        let g = gcd(exponent, order);
                        format!("e({}/{})", exponent / g, order / g)
                    }
                })
                .collect();
            rows.push(CharRow {
                label: chi.label(),
                modulus: chi.modulus(),
                index: chi.index(),
                parity: chi.parity(),
                primitive: chi.is_primitive(),
                principal: chi.is_principal(),
                real: chi.is_real(),
                conductor: chi.conductor(),
                values,
            });
        }
    }
    Ok(match fmt {
        Format::Json => serde_json::to_string_pretty(&rows).map_err(|e| CliError::Usage(e.to_string()))? + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let err = |e: csv::Error| CliError::Usage(e.to_string());
            w.write_record(["label", "parity", "primitive", "principal", "real", "conductor", "values"]).map_err(err)?;
            for r in &rows {
                w.write_record([
                    r.label.clone(),
                    r.parity.to_string(),
                    r.primitive.to_string(),
                    r.principal.to_string(),
                    r.real.to_string(),
                    r.conductor.to_string(),
                    r.values.join(" "),
                ])
                .map_err(err)?;
            }
            String::from_utf8(w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?)
                .map_err(|e| CliError::Usage(e.to_string()))?
        }
        Format::Text => {
            let mut s = String::from("# e(a/b) = exp(2 pi i a/b); values listed for n = 1..d\n");
            for r in &rows {
                let mut flags = vec![if r.parity == 0 { "even" } else { "odd" }];
                if r.principal {
                    flags.push("principal");
                }
                if r.primitive {
                    flags.push("primitive");
                }
                if r.real {
                    flags.push("real");
                }
                s += &format!(
                    "{:<6} cond {:<3} {:<28} {}\n",
                    r.label,
                    r.conductor,
                    flags.join(","),
                    r.values.join(" ")
                );
            }
            s
        }
    })
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
