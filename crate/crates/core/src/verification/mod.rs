//! Both sides of every functional equation and integral identity, compared
//! point by point, with structured reports.

mod identities;
mod integrals;
mod output;
mod suite;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rug::{Complex, Float};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use identities::{
    check_c2_5, check_contour_shift, check_ramanujan_220, check_t2_1, check_t2_2, check_t2_3, check_t2_4, check_t2_6, check_t2_7,
    check_vz, check_zagier, T26Candidate, ZagierEquation,
};
pub use integrals::{character_xi_integral, ramanujan_xi_integral, IntegralValue};
pub use output::{render_complex, reports_to_csv, reports_to_json, ReportRow};
pub use suite::{default_x_grid, run_suite, GridValue, SuiteConfig};

/// Identities covered by the harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TheoremId {
    #[serde(rename = "T2_1")]
    T2_1,
    #[serde(rename = "T2_2")]
    T2_2,
    #[serde(rename = "T2_3")]
    T2_3,
    #[serde(rename = "T2_4")]
    T2_4,
    #[serde(rename = "C2_5")]
    C2_5,
    #[serde(rename = "T2_6")]
    T2_6,
    #[serde(rename = "T2_7")]
    T2_7,
    #[serde(rename = "RAMANUJAN_220")]
    Ramanujan220,
    #[serde(rename = "RAMANUJAN_XI")]
    RamanujanXi,
    #[serde(rename = "ZAGIER_FE2")]
    ZagierFe2,
    #[serde(rename = "ZAGIER_FE3")]
    ZagierFe3,
    #[serde(rename = "VZ_FE")]
    VzFe,
    #[serde(rename = "CONTOUR_SHIFT")]
    ContourShift,
}

impl TheoremId {
    pub const ALL: [TheoremId; 13] = [
        TheoremId::T2_1,
        TheoremId::T2_2,
        TheoremId::T2_3,
        TheoremId::T2_4,
        TheoremId::C2_5,
        TheoremId::T2_6,
        TheoremId::T2_7,
        TheoremId::Ramanujan220,
        TheoremId::RamanujanXi,
        TheoremId::ZagierFe2,
        TheoremId::ZagierFe3,
        TheoremId::VzFe,
        TheoremId::ContourShift,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            TheoremId::T2_1 => "T2_1",
            TheoremId::T2_2 => "T2_2",
            TheoremId::T2_3 => "T2_3",
            TheoremId::T2_4 => "T2_4",
            TheoremId::C2_5 => "C2_5",
            TheoremId::T2_6 => "T2_6",
            TheoremId::T2_7 => "T2_7",
            TheoremId::Ramanujan220 => "RAMANUJAN_220",
            TheoremId::RamanujanXi => "RAMANUJAN_XI",
            TheoremId::ZagierFe2 => "ZAGIER_FE2",
            TheoremId::ZagierFe3 => "ZAGIER_FE3",
            TheoremId::VzFe => "VZ_FE",
            TheoremId::ContourShift => "CONTOUR_SHIFT",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoremId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_uppercase().replace('.', "_");
        TheoremId::ALL
            .into_iter()
            .find(|id| id.name() == t)
            .ok_or_else(|| Error::Parse(format!("unknown theorem id '{s}'")))
    }
}

/// How a point contributes to the report's verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    /// Must pass.
    Primary,
    /// One of several readings of an ambiguous statement; some variant must
    /// pass at every point.
    Candidate,
    /// Reported only (e.g. a printed form known to be wrong).
    Informational,
}

/// One comparison of two sides.
#[derive(Debug, Clone)]
pub struct CheckPoint {
    pub params: BTreeMap<String, String>,
    pub variant: String,
    pub role: Role,
    pub lhs: Complex,
    pub rhs: Complex,
    pub abs_err: f64,
    pub rel_err: f64,
    pub tol: f64,
    pub pass: bool,
    pub error: Option<String>,
    pub wall_time_ms: f64,
}

impl CheckPoint {
    pub(crate) fn compare(
        params: &BTreeMap<String, String>,
        variant: &str,
        role: Role,
        lhs: Complex,
        rhs: Complex,
        tol: f64,
        started: Instant,
    ) -> Self {
        let prec = lhs.prec().0.max(rhs.prec().0);
        let diff = Complex::with_val(prec, &lhs - &rhs);
        let abs_err = Float::with_val(64, diff.abs_ref()).to_f64();
        let scale = Float::with_val(64, lhs.abs_ref())
            .to_f64()
            .max(Float::with_val(64, rhs.abs_ref()).to_f64());
        let rel_err = if scale > 0.0 { abs_err / scale } else { abs_err };
        CheckPoint {
            params: params.clone(),
            variant: variant.to_string(),
            role,
            lhs,
            rhs,
            abs_err,
            rel_err,
            tol,
            pass: abs_err.is_finite() && abs_err <= tol,
            error: None,
            wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
        }
    }

    pub(crate) fn failed(params: &BTreeMap<String, String>, variant: &str, role: Role, tol: f64, err: &Error) -> Self {
        let nan = Complex::with_val(64, (f64::NAN, f64::NAN));
        CheckPoint {
            params: params.clone(),
            variant: variant.to_string(),
            role,
            lhs: nan.clone(),
            rhs: nan,
            abs_err: f64::NAN,
            rel_err: f64::NAN,
            tol,
            pass: false,
            error: Some(err.to_string()),
            wall_time_ms: 0.0,
        }
    }
}

/// Outcome of one check, possibly over many parameter points.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub theorem_id: TheoremId,
    pub precision_bits: u32,
    pub points: Vec<CheckPoint>,
    pub max_abs_err: f64,
    pub pass: bool,
    pub variant_notes: Vec<String>,
}

impl CheckReport {
    pub(crate) fn new(theorem_id: TheoremId, precision_bits: u32) -> Self {
        CheckReport {
            theorem_id,
            precision_bits,
            points: Vec::new(),
            max_abs_err: 0.0,
            pass: true,
            variant_notes: Vec::new(),
        }
    }

    /// Candidate variants that pass at every candidate point, in first-seen order.
    pub fn passing_candidates(&self) -> Vec<String> {
        let mut names: Vec<&str> = Vec::new();
        for p in self.points.iter().filter(|p| p.role == Role::Candidate) {
            if !names.contains(&p.variant.as_str()) {
                names.push(&p.variant);
            }
        }
        names
            .into_iter()
            .filter(|v| {
                self.points
                    .iter()
                    .filter(|p| p.role == Role::Candidate && p.variant == *v)
                    .all(|p| p.pass)
            })
            .map(str::to_string)
            .collect()
    }

    /// Recomputes `pass` and `max_abs_err` from the points.
    pub(crate) fn finish(&mut self) {
        let has_candidates = self.points.iter().any(|p| p.role == Role::Candidate);
        let winners = self.passing_candidates();
        let counted = |p: &CheckPoint| match p.role {
            Role::Primary => true,
            // with no winner every candidate residual is relevant
            Role::Candidate => winners.is_empty() || winners.contains(&p.variant),
            Role::Informational => false,
        };
        self.max_abs_err = self
            .points
            .iter()
            .filter(|p| counted(p))
            .map(|p| if p.abs_err.is_nan() { f64::INFINITY } else { p.abs_err })
            .fold(0.0, f64::max);
        let primaries = self.points.iter().filter(|p| p.role == Role::Primary).all(|p| p.pass);
        self.pass = primaries && (!has_candidates || !winners.is_empty());
        if has_candidates {
            let note = if winners.is_empty() {
                "no candidate passes at every point".to_string()
            } else {
                format!("passing candidates: {}", winners.join(", "))
            };
            self.variant_notes.retain(|n| !n.starts_with("passing candidates") && !n.starts_with("no candidate"));
            self.variant_notes.push(note);
        }
    }

    /// Concatenates reports of the same identity (e.g. across a grid).
    pub fn merge(reports: Vec<CheckReport>) -> Result<CheckReport> {
        let mut it = reports.into_iter();
        let mut out = it.next().ok_or_else(|| Error::Config("nothing to merge".into()))?;
        for r in it {
            if r.theorem_id != out.theorem_id {
                return Err(Error::Config(format!("cannot merge {} into {}", r.theorem_id, out.theorem_id)));
            }
            out.points.extend(r.points);
            for n in r.variant_notes {
                if !out.variant_notes.contains(&n) {
                    out.variant_notes.push(n);
                }
            }
        }
        out.finish();
        Ok(out)
    }

    /// Drops the points rejected by `keep` and recomputes the verdict.
    pub fn retain_points(&mut self, keep: impl FnMut(&CheckPoint) -> bool) {
        self.points.retain(keep);
        self.finish();
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckPoint> {
        self.points.iter().filter(|p| p.role == Role::Primary && !p.pass)
    }
}
