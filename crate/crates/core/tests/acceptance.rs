//! Acceptance run: one PASS/FAIL line per criterion. Built with
//! `harness = false`, so the lines are printed on every `cargo test`.

use std::process::ExitCode;
use std::time::Instant;

use herglotz::characters::characters_mod;
use herglotz::herglotz::{frak_f_with_plan, herglotz_f, EvalOptions, HerglotzParams};
use herglotz::lfunctions::l_function;
use herglotz::residues::{pole_catalog, printed_residues, residue_table, MellinIntegrand};
use herglotz::specfun::{digamma, gamma};
use herglotz::verification::{
    check_ramanujan_220, check_t2_7, run_suite, CheckReport, GridValue, Role, SuiteConfig, TheoremId,
};
use herglotz::PrecisionContext;
use rug::float::Constant;
use rug::{Complex, Float};

/// F(1) = −γ²/2 − π²/12 − γ₁, evaluated independently (mpmath, 90 digits).
const F_ONE: &str = "-0.916240149844295830534809275625733388801447182393876137844189223944735198477967286869359156";

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn ctx256() -> PrecisionContext {
    PrecisionContext::new(256, 1e-40).unwrap()
}

fn dist(a: &Complex, b: &Complex) -> f64 {
    let d = Complex::with_val(a.prec().0.max(b.prec().0), a - b);
    Float::with_val(64, d.abs_ref()).to_f64()
}

fn worst(reports: &[CheckReport]) -> f64 {
    reports.iter().map(|r| r.max_abs_err).fold(0.0, f64::max)
}

fn primary_ok(reports: &[CheckReport]) -> bool {
    reports
        .iter()
        .all(|r| r.points.iter().filter(|p| p.role == Role::Primary).all(|p| p.pass))
}

fn has_passing(reports: &[CheckReport], variant: &str) -> bool {
    reports.iter().all(|r| r.points.iter().filter(|p| p.variant == variant).all(|p| p.pass))
        && reports.iter().any(|r| r.points.iter().any(|p| p.variant == variant))
}

fn only<F: FnOnce(&mut SuiteConfig)>(set: F) -> SuiteConfig {
    let mut c = SuiteConfig::empty();
    set(&mut c);
    c
}

fn f_one() -> Outcome {
    let ctx = ctx256();
    let t = Instant::now();
    let v = herglotz_f(&ctx.complex(1), &ctx).unwrap();
    let secs = t.elapsed().as_secs_f64();
    let want = Complex::with_val(ctx.prec(), Float::parse(F_ONE).unwrap());
    let e = dist(&v, &want);
    outcome(e <= 1e-40 && secs < 5.0, format!("|F(1) - closed form| = {e:.2e}, {secs:.2} s"))
}

fn ramanujan() -> Outcome {
    let ctx = ctx256();
    let mut ok = true;
    let mut parts = Vec::new();
    for a in [GridValue::real(1), GridValue::real(2), GridValue::GoldenRatio] {
        let t = Instant::now();
        let reps = check_ramanujan_220(&a.to_complex(ctx.prec()), true, &ctx).unwrap();
        let secs = t.elapsed().as_secs_f64();
        let series = reps.iter().find(|r| r.theorem_id == TheoremId::Ramanujan220).unwrap();
        let integral = reps.iter().find(|r| r.theorem_id == TheoremId::RamanujanXi).unwrap();
        ok &= series.pass && series.max_abs_err <= 1e-40 && integral.pass && integral.max_abs_err <= 1e-20 && secs < 60.0;
        parts.push(format!("alpha={a}: series {:.1e}, integral {:.1e}, {secs:.1} s", series.max_abs_err, integral.max_abs_err));
    }
    outcome(ok, parts.join("; "))
}

fn series_criterion(reports: &[CheckReport], extra: Option<&str>) -> Outcome {
    let mut ok = primary_ok(reports) && worst(reports) <= 1e-40;
    let mut detail = format!("{} points, max residual {:.2e}", reports.len(), worst(reports));
    if let Some(v) = extra {
        let agrees = has_passing(reports, v);
        ok &= agrees;
        detail += &format!(", {v} {}", if agrees { "agrees" } else { "DISAGREES" });
    }
    outcome(ok, detail)
}

fn t2_4(reports: &[CheckReport]) -> Outcome {
    let base = series_criterion(reports, None);
    let mismatches = reports
        .iter()
        .flat_map(|r| &r.points)
        .filter(|p| p.role == Role::Informational && !p.pass)
        .count();
    outcome(base.pass, format!("{}; {mismatches} printed-variant mismatches reported", base.detail))
}

fn t2_6(reports: &[CheckReport]) -> Outcome {
    let primaries = primary_ok(reports);
    // a candidate must pass at every point of every character
    let mut common: Option<Vec<String>> = None;
    for r in reports {
        let w = r.passing_candidates();
        common = Some(match common {
            None => w,
            Some(c) => c.into_iter().filter(|v| w.contains(v)).collect(),
        });
    }
    let common = common.unwrap_or_default();
    let worst_winner = reports
        .iter()
        .flat_map(|r| &r.points)
        .filter(|p| p.role == Role::Primary || common.contains(&p.variant))
        .map(|p| p.abs_err)
        .fold(0.0, f64::max);
    let ok = primaries && !common.is_empty() && worst_winner <= 1e-40;
    outcome(ok, format!("uniform candidates: [{}], max residual {worst_winner:.2e}", common.join(", ")))
}

fn t2_7() -> Outcome {
    let ctx = ctx256();
    let mut ok = true;
    let mut parts = Vec::new();
    for a in [1, 2] {
        for c in ["4.1", "5.2"] {
            let chi = c.parse().unwrap();
            let t = Instant::now();
            let r = check_t2_7(&ctx.complex(a), &chi, &ctx).unwrap();
            let secs = t.elapsed().as_secs_f64();
            ok &= r.pass && r.max_abs_err <= 1e-20 && secs < 120.0;
            parts.push(format!("({a},{c}) {:.1e} {secs:.1} s", r.max_abs_err));
        }
    }
    outcome(ok, parts.join("; "))
}

fn zagier_vz(reports: &[CheckReport]) -> Outcome {
    let cross = reports
        .iter()
        .flat_map(|r| &r.points)
        .filter(|p| p.variant == "via_n1_identity")
        .map(|p| p.abs_err)
        .fold(0.0, f64::max);
    let ok = primary_ok(reports) && worst(reports) <= 1e-38;
    let direct = reports
        .iter()
        .flat_map(|r| &r.points)
        .filter(|p| p.variant != "via_n1_identity")
        .map(|p| p.abs_err)
        .fold(0.0, f64::max);
    outcome(
        ok && direct <= 1e-40,
        format!("{} reports, direct {direct:.2e}, cross-check {cross:.2e}", reports.len()),
    )
}

fn residue_certification() -> Outcome {
    let ctx = ctx256();
    let p = ctx.prec();
    let x = |re: f64, im: f64| Complex::with_val(p, (re, im));
    let mut cases = Vec::new();
    for (k, n) in [(2, 3), (3, 2), (4, 2), (4, 3), (5, 4), (7, 3)] {
        for xv in [x(1.0, 0.0), x(2.0, 0.0), x(1.0, 0.5)] {
            cases.push(MellinIntegrand::general_kn(k, n, xv).unwrap());
        }
    }
    for k in [0, 1, 2, 3, 5] {
        cases.push(MellinIntegrand::theorem21(k, x(2.0, 0.0)).unwrap());
    }
    for n in 1..=4 {
        cases.push(MellinIntegrand::theorem23(n, x(1.25, 0.0)).unwrap());
    }
    for c in ["3.1", "4.1", "5.1"] {
        for k in 0..=2 {
            for shifted in [false, true] {
                cases.push(MellinIntegrand::character(k, x(1.5, 0.0), c.parse().unwrap(), shifted).unwrap());
            }
        }
    }
    let (mut entries, mut flagged, mut worst) = (0, 0, 0.0f64);
    let mut failures = Vec::new();
    for f in &cases {
        let table = residue_table(f, &ctx).unwrap();
        let mut total = Complex::with_val(p, 0);
        for r in &table {
            total += &r.residue;
        }
        for e in printed_residues(f, &ctx).unwrap() {
            let oracle = match e.location {
                Some(s) => table.iter().find(|r| r.pole.location == s).map(|r| r.residue.clone()).unwrap(),
                None => total.clone(),
            };
            let target = if e.flagged { &e.corrected } else { &e.printed };
            let d = dist(target, &oracle);
            entries += 1;
            flagged += e.flagged as usize;
            worst = worst.max(d);
            if d > 1e-35 {
                failures.push(format!("{} {}", f.family, e.label));
            }
        }
        // every cataloged pole must have been used
        assert_eq!(table.len(), pole_catalog(f).len());
    }
    outcome(
        failures.is_empty(),
        format!(
            "{entries} entries over {} integrands ({flagged} flagged, checked in corrected form), max deviation {worst:.2e}{}",
            cases.len(),
            if failures.is_empty() { String::new() } else { format!("; failing: {}", failures.join(", ")) }
        ),
    )
}

fn precision_scaling() -> Outcome {
    let ctx = PrecisionContext::new(512, 1e-100).unwrap();
    let s = SuiteConfig::standard();
    let cfg = SuiteConfig { t2_1: s.t2_1, t2_2: s.t2_2, t2_3: s.t2_3, t2_4: s.t2_4, c2_5: s.c2_5, ..SuiteConfig::empty() };
    let reps = run_suite(&cfg, &ctx);
    let w = reps
        .iter()
        .flat_map(|r| &r.points)
        .filter(|p| p.role == Role::Primary)
        .map(|p| if p.abs_err.is_nan() { f64::INFINITY } else { p.abs_err })
        .fold(0.0, f64::max);
    outcome(w < 1e-100, format!("{} reports at 512 bits, max residual {w:.2e}", reps.len()))
}

fn invariants() -> Outcome {
    let ctx = ctx256();
    let p = ctx.prec();
    let mut state = 0x9e3779b97f4a7c15u64;
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    let mut bad = Vec::new();
    // digamma recurrence and Γ reflection
    for _ in 0..40 {
        let z = Complex::with_val(p, (6.0 * next() - 3.0 + 0.013, 4.0 * next() - 2.0 + 0.007));
        let z1 = Complex::with_val(p, &z + 1u32);
        let lhs = digamma(&z1, &ctx).unwrap();
        let rhs = digamma(&z, &ctx).unwrap() + Complex::with_val(p, z.recip_ref());
        if dist(&lhs, &rhs) > 1e-60 {
            bad.push("digamma recurrence");
        }
        let omz = Complex::with_val(p, 1 - &z);
        let refl = gamma(&z, &ctx).unwrap() * gamma(&omz, &ctx).unwrap();
        let pz = Complex::with_val(p, &z * Float::with_val(p, Constant::Pi));
        let want = Complex::with_val(p, Float::with_val(p, Constant::Pi)) / pz.sin();
        if dist(&refl, &want) > 1e-60 * (1.0 + dist(&want, &Complex::new(p))) {
            bad.push("gamma reflection");
        }
    }
    // orthogonality for every pair of characters mod d ≤ 60
    for d in 3..=60u64 {
        let chars = characters_mod(d).unwrap();
        let phi = (1..=d).filter(|&a| gcd(a, d) == 1).count() as f64;
        let vals: Vec<Vec<Complex>> =
            chars.iter().map(|c| (1..=d as i64).map(|n| c.evaluate_prec(n, 64)).collect()).collect();
        for (i, a) in vals.iter().enumerate() {
            for (j, b) in vals.iter().enumerate() {
                let mut acc = Complex::with_val(64, 0);
                for (u, v) in a.iter().zip(b) {
                    acc += Complex::with_val(64, u * Complex::with_val(64, v.conj_ref()));
                }
                let expect = if i == j { phi } else { 0.0 };
                if dist(&acc, &Complex::with_val(64, expect)) > 1e-9 {
                    bad.push("character orthogonality");
                }
            }
        }
    }
    // L(s, χ) is continuous through s = 1 for nonprincipal χ
    for c in ["3.1", "4.1", "5.1", "8.3"] {
        let chi = c.parse().unwrap();
        let at1 = l_function(&ctx.complex(1), &chi, &ctx).unwrap();
        let near = l_function(&Complex::with_val(p, (1.0 + 1e-30, 1e-30)), &chi, &ctx).unwrap();
        if dist(&at1, &near) > 1e-25 || !at1.real().is_finite() {
            bad.push("L near s = 1");
        }
    }
    // forced short truncations stay within their reported bound
    for (k, n, xv) in [(2, 1, 2.0), (3, 2, 1.5), (1, 1, 0.75)] {
        let hp = HerglotzParams::new(k, n, ctx.complex(xv)).unwrap();
        let exact = frak_f_with_plan(&hp, &ctx, &EvalOptions::default()).unwrap().value;
        for (nd, m) in [(3, 6), (8, 4), (20, 10)] {
            let short = frak_f_with_plan(&hp, &ctx, &EvalOptions { n_direct: Some(nd), m_tail: Some(m) }).unwrap();
            let e = dist(&short.value, &exact);
            if e > short.plan.bound.to_f64() * (1.0 + 1e-6) + 1e-70 {
                bad.push("truncation bound");
            }
        }
    }
    bad.dedup();
    outcome(bad.is_empty(), if bad.is_empty() { "all invariant groups hold".into() } else { format!("violated: {}", bad.join(", ")) })
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn main() -> ExitCode {
    // criteria 3-8 and 10 come from one suite run at 256 bits
    let ctx = ctx256();
    let std = SuiteConfig::standard();
    let mut lines = Vec::new();
    let mut all = true;
    let mut report = |n: u32, name: &str, secs: f64, o: Outcome| {
        let line = format!(
            "criterion {n:>2} {} {name}: {} [{secs:.1} s]",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        println!("{line}");
        all &= o.pass;
        lines.push(line);
    };
    let timed = |f: &dyn Fn() -> Outcome| {
        let t = Instant::now();
        let o = f();
        (o, t.elapsed().as_secs_f64())
    };

    let (o, s) = timed(&f_one);
    report(1, "F(1) closed form", s, o);
    let (o, s) = timed(&ramanujan);
    report(2, "Ramanujan modular relation and Xi integral", s, o);
    let run = |c: SuiteConfig| {
        let t = Instant::now();
        let r = run_suite(&c, &ctx);
        (r, t.elapsed().as_secs_f64())
    };
    let (r, s) = run(only(|c| c.t2_1 = std.t2_1.clone()));
    report(3, "T2_1", s, series_criterion(&r, Some("ramanujan_rephrased")));
    let (r, s) = run(only(|c| c.t2_2 = std.t2_2.clone()));
    report(4, "T2_2", s, series_criterion(&r, None));
    let (r, s) = run(only(|c| c.t2_3 = std.t2_3.clone()));
    report(5, "T2_3", s, series_criterion(&r, Some("ramanujan_rephrased")));
    let (r, s) = run(only(|c| c.t2_4 = std.t2_4.clone()));
    report(6, "T2_4 with oracle residues", s, t2_4(&r));
    let (r, s) = run(only(|c| c.c2_5 = std.c2_5.clone()));
    report(7, "C2_5", s, series_criterion(&r, None));
    let (r, s) = run(only(|c| {
        c.t2_6 = std.t2_6.clone();
        c.t2_6_characters = std.t2_6_characters.clone();
        c.t2_6_candidates = std.t2_6_candidates.clone();
    }));
    report(8, "T2_6 notation candidates", s, t2_6(&r));
    let (o, s) = timed(&t2_7);
    report(9, "T2_7 three-way agreement", s, o);
    let (r, s) = run(only(|c| {
        c.zagier_fe2 = std.zagier_fe2.clone();
        c.zagier_fe3 = std.zagier_fe3.clone();
        c.vz = std.vz.clone();
    }));
    report(10, "Zagier and Vlasenko-Zagier equations", s, zagier_vz(&r));
    let (o, s) = timed(&residue_certification);
    report(11, "printed residues against the oracle", s, o);
    let (o, s) = timed(&precision_scaling);
    report(12, "precision scaling at 512 bits", s, o);
    let (o, s) = timed(&invariants);
    let o = outcome(o.pass && s < 180.0, o.detail);
    report(13, "invariant groups", s, o);

    let passed = lines.iter().filter(|l| l.contains(" PASS ")).count();
    println!("acceptance: {passed}/{} criteria pass", lines.len());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
