use std::collections::BTreeMap;

use clap::Args;
use herglotz::herglotz::{self as hg, EvalOptions, HerglotzParams, HerglotzValue};
use herglotz::precision::decimal_digits;
use herglotz::verification::render_complex;
use herglotz::{lfunctions, specfun};
use rug::{Complex, Float, Rational};
use serde::Serialize;

use crate::{parse_chi, parse_value, CliError, CliResult, Format, Global};

pub const FUNCTIONS: [&str; 17] = [
    "F", "Fk", "frakF", "scriptF", "Fstar", "phi", "psi_chi", "Fk_chi", "zeta", "zeta_prime", "digamma", "dilog",
    "L", "xi_chi", "Xi_chi", "Xi_riemann", "gamma1",
];

#[derive(Args, Debug)]
pub struct EvalArgs {
    /// One of F, Fk, frakF, scriptF, Fstar, phi, psi_chi, Fk_chi, zeta,
    /// zeta_prime, digamma, dilog, L, xi_chi, Xi_chi, Xi_riemann, gamma1
    function: String,
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    /// Order k (a rational p/q for frakF and scriptF)
    #[arg(long, allow_hyphen_values = true)]
    k: Option<String>,
    #[arg(long = "N", alias = "n")]
    n: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    s: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    t: Option<String>,
    #[arg(long)]
    chi: Option<String>,
}

#[derive(Serialize)]
struct EvalOutput {
    function: String,
    params: BTreeMap<String, String>,
    value: String,
    precision_bits: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    method: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    terms: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    truncation_bound: Option<String>,
}

fn rational(s: &Option<String>, flag: &str) -> CliResult<Rational> {
    let s = s.as_deref().ok_or_else(|| CliError::Usage(format!("missing --{flag}")))?;
    let bad = || CliError::Usage(format!("--{flag} must be a rational number p/q, got '{s}'"));
    let r = match s.split_once('/') {
        Some((p, q)) => {
            let p: Rational = p.trim().parse().map_err(|_| bad())?;
            let q: Rational = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            p / q
        }
        None => s.trim().parse().map_err(|_| bad())?,
    };
    Ok(r)
}

fn order(s: &Option<String>) -> CliResult<u32> {
    let s = s.as_deref().ok_or_else(|| CliError::Usage("missing --k".into()))?;
    s.trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("--k must be a non-negative integer, got '{s}'")))
}

pub fn cmd_eval(a: &EvalArgs, g: &Global) -> CliResult<bool> {
    let ctx = g.context()?;
    let p = ctx.prec();
    let mut params = BTreeMap::new();
    let mut value_arg = |name: &str, v: &Option<String>, off_cut: bool| -> CliResult<Complex> {
        let s = v.as_deref().ok_or_else(|| CliError::Usage(format!("{} needs --{name}", a.function)))?;
        params.insert(name.to_string(), s.to_string());
        parse_value(s, name, p, off_cut)
    };
    let mut plan: Option<HerglotzValue> = None;
    let value: Complex = match a.function.as_str() {
        "F" => {
            let x = value_arg("x", &a.x, true)?;
            let v = hg::herglotz_f_with_plan(&x, &ctx)?;
            plan = Some(v.clone());
            v.value
        }
        "Fk" => {
            let x = value_arg("x", &a.x, true)?;
            let k = order(&a.k)?;
            params.insert("k".into(), k.to_string());
            let v = hg::higher_fk_with_plan(&x, k, &ctx)?;
            plan = Some(v.clone());
            v.value
        }
        "frakF" | "scriptF" => {
            let x = value_arg("x", &a.x, true)?;
            let k = rational(&a.k, "k")?;
            let n = rational(&a.n, "N")?;
            params.insert("k".into(), k.to_string());
            params.insert("N".into(), n.to_string());
            let hp = HerglotzParams::new(k, n, x)?;
            let v = if a.function == "frakF" {
                hg::frak_f_with_plan(&hp, &ctx, &EvalOptions::default())?
            } else {
                hg::script_f_with_plan(&hp, &ctx, &EvalOptions::default())?
            };
            plan = Some(v.clone());
            v.value
        }
        "Fstar" => hg::f_star(&value_arg("x", &a.x, true)?, &ctx)?,
        "phi" => hg::phi(&value_arg("x", &a.x, true)?, &ctx)?,
        "psi_chi" => {
            let x = value_arg("x", &a.x, true)?;
            let chi = parse_chi(a.chi.as_deref().ok_or_else(|| CliError::Usage("psi_chi needs --chi".into()))?)?;
            params.insert("chi".into(), chi.label());
            hg::psi_character(&x, &chi, &ctx)?
        }
        "Fk_chi" => {
            let x = value_arg("x", &a.x, true)?;
            let k = order(&a.k)?;
            let chi = parse_chi(a.chi.as_deref().ok_or_else(|| CliError::Usage("Fk_chi needs --chi".into()))?)?;
            params.insert("k".into(), k.to_string());
            params.insert("chi".into(), chi.label());
            let v = hg::f_character_with_plan(&x, k, &chi, &ctx)?;
            plan = Some(v.clone());
            v.value
        }
        "zeta" => specfun::riemann_zeta(&value_arg("s", &a.s, false)?, &ctx)?,
        "zeta_prime" => specfun::zeta_derivative(&value_arg("s", &a.s, false)?, &ctx)?,
        "digamma" | "dilog" => {
            let (name, v) = if a.z.is_some() { ("z", &a.z) } else { ("x", &a.x) };
            let z = value_arg(name, v, false)?;
            if a.function == "digamma" {
                specfun::digamma(&z, &ctx)?
            } else {
                specfun::dilog(&z, &ctx)?
            }
        }
        "L" | "xi_chi" => {
            let s = value_arg("s", &a.s, false)?;
            let chi = parse_chi(a.chi.as_deref().ok_or_else(|| CliError::Usage(format!("{} needs --chi", a.function)))?)?;
            params.insert("chi".into(), chi.label());
            if a.function == "L" {
                lfunctions::l_function(&s, &chi, &ctx)?
            } else {
                lfunctions::xi_completed(&s, &chi, &ctx)?.value
            }
        }
        "Xi_chi" | "Xi_riemann" => {
            let t = value_arg("t", &a.t, false)?;
            if !t.imag().is_zero() {
                return Err(CliError::Usage("--t must be real".into()));
            }
            let t = Float::with_val(p, t.real());
            if a.function == "Xi_riemann" {
                lfunctions::riemann_xi(&t, &ctx)?
            } else {
                let chi = parse_chi(a.chi.as_deref().ok_or_else(|| CliError::Usage("Xi_chi needs --chi".into()))?)?;
                params.insert("chi".into(), chi.label());
                lfunctions::xi_critical(&t, &chi, &ctx)?
            }
        }
        "gamma1" => Complex::with_val(p, specfun::stieltjes_gamma1(&ctx)),
        other => {
            return Err(CliError::Usage(format!(
                "unknown function '{other}'; expected one of {}",
                FUNCTIONS.join(", ")
            )))
        }
    };
    let digits = decimal_digits(ctx.bits());
    let out = EvalOutput {
        function: a.function.clone(),
        params,
        value: render_complex(&value, digits),
        precision_bits: ctx.bits(),
        method: plan.as_ref().map(|v| v.plan.method.to_string()),
        terms: plan.as_ref().map(|v| v.plan.n_direct),
        truncation_bound: plan.as_ref().map(|v| format!("{:.3e}", v.plan.bound.to_f64())),
    };
    let text = match g.format.unwrap_or(Format::Text) {
        Format::Json => serde_json::to_string_pretty(&out).map_err(|e| CliError::Usage(e.to_string()))? + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let params = out.params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";");
            w.write_record(["function", "params", "value", "precision_bits", "method", "truncation_bound"])
                .and_then(|_| {
                    w.write_record([
                        out.function.as_str(),
                        &params,
                        &out.value,
                        &out.precision_bits.to_string(),
                        out.method.as_deref().unwrap_or(""),
                        out.truncation_bound.as_deref().unwrap_or(""),
                    ])
                })
                .map_err(|e| CliError::Usage(e.to_string()))?;
            String::from_utf8(w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?)
                .map_err(|e| CliError::Usage(e.to_string()))?
        }
        Format::Text => {
            let args = out.params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(", ");
            let mut s = format!("{}({args}) = {}\n", out.function, out.value);
            if let (Some(m), Some(b), Some(n)) = (&out.method, &out.truncation_bound, out.terms) {
                s += &format!("  method {m}, {n} direct terms, truncation bound {b}\n");
            }
            s
        }
    };
    g.emit(&text)?;
    Ok(true)
}
