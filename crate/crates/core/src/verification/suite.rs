use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use rug::{Complex, Float, Rational};

use super::identities::*;
use super::{CheckPoint, CheckReport, Role, TheoremId};
use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::precision::PrecisionContext;
use crate::residues::MellinIntegrand;

/// An exact grid value: a Gaussian rational or the golden ratio.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GridValue {
    Exact { re: Rational, im: Rational },
    GoldenRatio,
}

impl GridValue {
    pub fn real(v: impl Into<Rational>) -> Self {
        GridValue::Exact { re: v.into(), im: Rational::new() }
    }

    pub fn complex(re: impl Into<Rational>, im: impl Into<Rational>) -> Self {
        GridValue::Exact { re: re.into(), im: im.into() }
    }

    pub fn to_complex(&self, prec: u32) -> Complex {
        match self {
            GridValue::Exact { re, im } => Complex::with_val(prec, (Float::with_val(prec, re), Float::with_val(prec, im))),
            GridValue::GoldenRatio => {
                let s5 = Float::with_val(prec, 5u32).sqrt();
                Complex::with_val(prec, (s5 + 1u32) / 2u32)
            }
        }
    }
}

impl fmt::Display for GridValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GridValue::GoldenRatio => f.write_str("phi"),
            GridValue::Exact { re, im } => {
                if *im == 0 {
                    write!(f, "{re}")
                } else if *re == 0 {
                    write!(f, "{im}i")
                } else if *im < 0 {
                    write!(f, "{re}-{}i", Rational::from(-im))
                } else {
                    write!(f, "{re}+{im}i")
                }
            }
        }
    }
}

fn parse_real(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("cannot parse '{s}' as a number"));
    if let Some((p, q)) = s.split_once('/') {
        let p = parse_real(p)?;
        let q = parse_real(q)?;
        if q == 0 {
            return Err(Error::Parse(format!("zero denominator in '{s}'")));
        }
        return Ok(p / q);
    }
    if s.contains(['.', 'e', 'E']) {
        let v: f64 = s.parse().map_err(|_| bad())?;
        return Rational::from_f64(v).ok_or_else(bad);
    }
    Rational::from_str(s).map_err(|_| bad())
}

/// The coefficient of an imaginary term: `bi`, `b*i`, `i`, `i/q`, `bi/q`.
fn parse_imag(t: &str) -> Result<Rational> {
    let (a, b) = t.split_once('i').expect("caller checked for 'i'");
    let a = a.trim_end_matches('*');
    let coef = if a.is_empty() { Rational::from(1) } else { parse_real(a)? };
    if b.is_empty() {
        return Ok(coef);
    }
    let q = b
        .strip_prefix('/')
        .ok_or_else(|| Error::Parse(format!("cannot parse imaginary part '{t}'")))?;
    let q = parse_real(q)?;
    if q == 0 {
        return Err(Error::Parse(format!("zero denominator in '{t}'")));
    }
    Ok(coef / q)
}

impl FromStr for GridValue {
    type Err = Error;

    /// Accepts "p/q", "1.5", "a+bi", "a-bi", "bi", "1+i/2", "phi".
    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(Error::Parse("empty number".into()));
        }
        if matches!(t.to_ascii_lowercase().as_str(), "phi" | "golden") {
            return Ok(GridValue::GoldenRatio);
        }
        // split at top-level + or − that is not an exponent sign
        let bytes = t.as_bytes();
        let mut cut = None;
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E' | b'/') {
                cut = Some(i);
            }
        }
        let (a, b) = match cut {
            Some(i) => (&t[..i], &t[i..]),
            None => (t.as_str(), ""),
        };
        let term = |u: &str| -> Result<(Rational, bool)> {
            let (neg, body) = match u.strip_prefix('-') {
                Some(r) => (true, r),
                None => (false, u.strip_prefix('+').unwrap_or(u)),
            };
            let (v, imag) = if body.contains('i') { (parse_imag(body)?, true) } else { (parse_real(body)?, false) };
            Ok((if neg { -v } else { v }, imag))
        };
        let mut re = Rational::new();
        let mut im = Rational::new();
        for u in [a, b] {
            if u.is_empty() {
                continue;
            }
            let (v, imag) = term(u)?;
            if imag {
                im += v;
            } else {
                re += v;
            }
        }
        Ok(GridValue::Exact { re, im })
    }
}

/// The default x-grid: 1, 2, 1/2, 3/2, 1+i, 1/(1+i).
pub fn default_x_grid() -> Vec<GridValue> {
    vec![
        GridValue::real(1),
        GridValue::real(2),
        GridValue::real((1, 2)),
        GridValue::real((3, 2)),
        GridValue::complex(1, 1),
        GridValue::complex((1, 2), (-1, 2)),
    ]
}

/// Parameter grids for each identity. Empty lists skip the identity.
#[derive(Debug, Clone, Default)]
pub struct SuiteConfig {
    pub t2_1: Vec<(u32, GridValue)>,
    pub t2_2: Vec<(u32, GridValue)>,
    pub t2_3: Vec<(u32, GridValue)>,
    pub t2_4: Vec<(u32, u32, GridValue)>,
    pub c2_5: Vec<(u32, u32, GridValue)>,
    /// (k, x) points, run for every character in `t2_6_characters`
    pub t2_6: Vec<(u32, GridValue)>,
    pub t2_6_characters: Vec<String>,
    pub t2_6_candidates: Vec<T26Candidate>,
    pub t2_7: Vec<(GridValue, String)>,
    pub ramanujan: Vec<GridValue>,
    /// include the Ξ-integral forms (T2_7 and the Ramanujan integral)
    pub integrals: bool,
    pub zagier_fe2: Vec<GridValue>,
    pub zagier_fe3: Vec<GridValue>,
    pub vz: Vec<(u32, GridValue)>,
    /// contour-shift identity, one parameter set per integrand family (slow)
    pub contour_shift: bool,
}

fn cross<A: Clone, B: Clone>(a: &[A], b: &[B]) -> Vec<(A, B)> {
    a.iter().flat_map(|x| b.iter().map(move |y| (x.clone(), y.clone()))).collect()
}

impl SuiteConfig {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The series identities only (no Ξ integrals).
    pub fn series_only() -> Self {
        let mut c = Self::standard();
        c.integrals = false;
        c.t2_7.clear();
        c
    }

    /// The standard grids.
    pub fn standard() -> Self {
        let r = |p: i64, q: i64| GridValue::real((p, q));
        let c = |a: (i64, i64), b: (i64, i64)| GridValue::complex(a, b);
        let t2_4_pairs = [(2, 3), (3, 2), (4, 2), (4, 3), (5, 4), (7, 3)];
        let t2_4_x = [r(1, 1), r(2, 1), c((1, 1), (1, 2))];
        SuiteConfig {
            t2_1: cross(&[0, 1, 2, 3, 5], &[r(2, 1), r(1, 2), r(3, 2), c((1, 1), (1, 1))]),
            t2_2: cross(&[2, 3, 4, 6], &[r(1, 1), r(2, 1), r(5, 3)]),
            t2_3: cross(&[1, 2, 3, 4], &[r(1, 1), r(2, 1), r(5, 4)]),
            t2_4: cross(&t2_4_pairs, &t2_4_x).into_iter().map(|((k, n), x)| (k, n, x)).collect(),
            c2_5: cross(&[(2, 2), (2, 3), (3, 4)], &t2_4_x).into_iter().map(|((k, n), x)| (k, n, x)).collect(),
            t2_6: cross(&[0, 1, 2], &[r(1, 1), r(2, 1), r(3, 2)]),
            t2_6_characters: vec!["3.1".into(), "4.1".into(), "5.1".into()],
            t2_6_candidates: T26Candidate::ALL.to_vec(),
            t2_7: cross(&[r(1, 1), r(2, 1)], &["4.1".to_string(), "5.2".to_string()]),
            ramanujan: vec![r(1, 1), r(2, 1), GridValue::GoldenRatio],
            integrals: true,
            zagier_fe2: default_x_grid(),
            zagier_fe3: default_x_grid(),
            vz: cross(&[2, 3], &default_x_grid()),
            contour_shift: false,
        }
    }
}

enum Task {
    T21(u32, GridValue),
    T22(u32, GridValue),
    T23(u32, GridValue),
    T24(u32, u32, GridValue),
    C25(u32, u32, GridValue),
    T26(u32, GridValue, String),
    T27(GridValue, String),
    Ramanujan(GridValue),
    Zagier(GridValue, ZagierEquation),
    Vz(u32, GridValue),
    Contour(MellinIntegrand),
}

impl Task {
    fn theorem(&self) -> TheoremId {
        match self {
            Task::T21(..) => TheoremId::T2_1,
            Task::T22(..) => TheoremId::T2_2,
            Task::T23(..) => TheoremId::T2_3,
            Task::T24(..) => TheoremId::T2_4,
            Task::C25(..) => TheoremId::C2_5,
            Task::T26(..) => TheoremId::T2_6,
            Task::T27(..) => TheoremId::T2_7,
            Task::Ramanujan(..) => TheoremId::Ramanujan220,
            Task::Zagier(_, ZagierEquation::TwoTerm) => TheoremId::ZagierFe2,
            Task::Zagier(_, ZagierEquation::ThreeTerm) => TheoremId::ZagierFe3,
            Task::Vz(..) => TheoremId::VzFe,
            Task::Contour(..) => TheoremId::ContourShift,
        }
    }

    fn describe(&self) -> Vec<(&'static str, String)> {
        match self {
            Task::T21(k, x) | Task::T22(k, x) | Task::Vz(k, x) => vec![("k", k.to_string()), ("x", x.to_string())],
            Task::T23(n, x) => vec![("N", n.to_string()), ("x", x.to_string())],
            Task::T24(k, n, x) | Task::C25(k, n, x) => {
                vec![("k", k.to_string()), ("N", n.to_string()), ("x", x.to_string())]
            }
            Task::T26(k, x, chi) => vec![("k", k.to_string()), ("x", x.to_string()), ("chi", chi.clone())],
            Task::T27(a, chi) => vec![("alpha", a.to_string()), ("chi", chi.clone())],
            Task::Ramanujan(a) => vec![("alpha", a.to_string())],
            Task::Zagier(x, _) => vec![("x", x.to_string())],
            Task::Contour(f) => vec![("family", f.family.name().to_string()), ("k", f.k.to_string())],
        }
    }

    fn run(&self, cfg: &SuiteConfig, ctx: &PrecisionContext) -> Result<Vec<CheckReport>> {
        let p = ctx.prec();
        let chi = |s: &str| s.parse::<DirichletCharacter>();
        Ok(match self {
            Task::T21(k, x) => vec![check_t2_1(*k, &x.to_complex(p), ctx)?],
            Task::T22(k, x) => vec![check_t2_2(*k, &x.to_complex(p), ctx)?],
            Task::T23(n, x) => vec![check_t2_3(*n, &x.to_complex(p), ctx)?],
            Task::T24(k, n, x) => vec![check_t2_4(*k, *n, &x.to_complex(p), ctx)?],
            Task::C25(k, n, x) => vec![check_c2_5(*k, *n, &x.to_complex(p), ctx)?],
            Task::T26(k, x, c) => vec![check_t2_6(*k, &x.to_complex(p), &chi(c)?, &cfg.t2_6_candidates, ctx)?],
            Task::T27(a, c) => vec![check_t2_7(&a.to_complex(p), &chi(c)?, ctx)?],
            Task::Ramanujan(a) => check_ramanujan_220(&a.to_complex(p), cfg.integrals, ctx)?,
            Task::Zagier(x, w) => vec![check_zagier(&x.to_complex(p), *w, ctx)?],
            Task::Vz(k, x) => vec![check_vz(*k, &x.to_complex(p), ctx)?],
            Task::Contour(f) => vec![check_contour_shift(f, ctx)?],
        })
    }

    /// A report holding a single failed point, so errors never abort the suite.
    fn failed(&self, err: &Error, ctx: &PrecisionContext) -> CheckReport {
        let params = self.describe().into_iter().map(|(k, v)| (k.to_string(), v)).collect();
        let mut rep = CheckReport::new(self.theorem(), ctx.bits());
        rep.points.push(CheckPoint::failed(&params, "error", Role::Primary, ctx.check_tol(), err));
        rep.finish();
        rep
    }
}

fn contour_cases(ctx: &PrecisionContext) -> Result<Vec<MellinIntegrand>> {
    let x = |v: f64| Complex::with_val(ctx.prec(), v);
    let chi: DirichletCharacter = "4.1".parse()?;
    Ok(vec![
        MellinIntegrand::general_kn(2, 3, x(2.0))?,
        MellinIntegrand::theorem21(1, x(2.0))?,
        MellinIntegrand::theorem23(2, x(1.5))?,
        MellinIntegrand::character(2, x(1.5), chi, false)?,
    ])
}

/// Runs every configured check. Reports come back in a fixed order
/// (identity, then grid order); T2_6 points are merged per character so the
/// candidate decision is made over the whole grid.
pub fn run_suite(cfg: &SuiteConfig, ctx: &PrecisionContext) -> Vec<CheckReport> {
    let mut tasks: Vec<Task> = Vec::new();
    tasks.extend(cfg.t2_1.iter().map(|(k, x)| Task::T21(*k, x.clone())));
    tasks.extend(cfg.t2_2.iter().map(|(k, x)| Task::T22(*k, x.clone())));
    tasks.extend(cfg.t2_3.iter().map(|(n, x)| Task::T23(*n, x.clone())));
    tasks.extend(cfg.t2_4.iter().map(|(k, n, x)| Task::T24(*k, *n, x.clone())));
    tasks.extend(cfg.c2_5.iter().map(|(k, n, x)| Task::C25(*k, *n, x.clone())));
    for c in &cfg.t2_6_characters {
        tasks.extend(cfg.t2_6.iter().map(|(k, x)| Task::T26(*k, x.clone(), c.clone())));
    }
    if cfg.integrals {
        tasks.extend(cfg.t2_7.iter().map(|(a, c)| Task::T27(a.clone(), c.clone())));
    }
    tasks.extend(cfg.ramanujan.iter().map(|a| Task::Ramanujan(a.clone())));
    tasks.extend(cfg.zagier_fe2.iter().map(|x| Task::Zagier(x.clone(), ZagierEquation::TwoTerm)));
    tasks.extend(cfg.zagier_fe3.iter().map(|x| Task::Zagier(x.clone(), ZagierEquation::ThreeTerm)));
    tasks.extend(cfg.vz.iter().map(|(k, x)| Task::Vz(*k, x.clone())));
    if cfg.contour_shift {
        match contour_cases(ctx) {
            Ok(cases) => tasks.extend(cases.into_iter().map(Task::Contour)),
            Err(e) => {
                let mut rep = CheckReport::new(TheoremId::ContourShift, ctx.bits());
                rep.points.push(CheckPoint::failed(&Default::default(), "error", Role::Primary, ctx.integral_tol(), &e));
                rep.finish();
                return vec![rep];
            }
        }
    }

    let results: Vec<(Option<String>, Vec<CheckReport>)> = tasks
        .par_iter()
        .map(|t| {
            let group = match t {
                Task::T26(_, _, c) => Some(c.clone()),
                _ => None,
            };
            let reps = t.run(cfg, ctx).unwrap_or_else(|e| vec![t.failed(&e, ctx)]);
            (group, reps)
        })
        .collect();

    let mut out: Vec<CheckReport> = Vec::new();
    let mut pending: Option<(String, Vec<CheckReport>)> = None;
    let flush = |pending: &mut Option<(String, Vec<CheckReport>)>, out: &mut Vec<CheckReport>| {
        if let Some((_, reps)) = pending.take() {
            out.push(CheckReport::merge(reps).expect("same theorem and non-empty"));
        }
    };
    for (group, reps) in results {
        match group {
            Some(g) => {
                if pending.as_ref().is_some_and(|(cur, _)| *cur != g) {
                    flush(&mut pending, &mut out);
                }
                pending.get_or_insert_with(|| (g, Vec::new())).1.extend(reps);
            }
            None => {
                flush(&mut pending, &mut out);
                out.extend(reps);
            }
        }
    }
    flush(&mut pending, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_values_parse() {
        let p = |s: &str| s.parse::<GridValue>().unwrap();
        assert_eq!(p("3/2"), GridValue::real((3, 2)));
        assert_eq!(p("1+i"), GridValue::complex(1, 1));
        assert_eq!(p("1 - 2i"), GridValue::complex(1, -2));
        assert_eq!(p("1+i/2"), GridValue::complex(1, (1, 2)));
        assert_eq!(p("0.5+1/4i"), GridValue::complex((1, 2), (1, 4)));
        assert_eq!(p("-i"), GridValue::complex(0, -1));
        assert_eq!(p("2.5e1"), GridValue::real(25));
        assert_eq!(p("phi"), GridValue::GoldenRatio);
        assert!("1/0".parse::<GridValue>().is_err());
        assert!("abc".parse::<GridValue>().is_err());
        assert_eq!(GridValue::complex((1, 2), (-1, 2)).to_string(), "1/2-1/2i");
    }

    #[test]
    fn empty_grid_gives_no_reports() {
        let ctx = PrecisionContext::new(128, 1e-25).unwrap();
        assert!(run_suite(&SuiteConfig::empty(), &ctx).is_empty());
    }

    #[test]
    fn errors_become_failed_points() {
        let ctx = PrecisionContext::new(128, 1e-25).unwrap();
        let cfg = SuiteConfig { t2_2: vec![(1, GridValue::real(2))], ..SuiteConfig::empty() };
        let reps = run_suite(&cfg, &ctx);
        assert_eq!(reps.len(), 1);
        assert!(!reps[0].pass);
        assert!(reps[0].points[0].error.is_some());
    }
}
