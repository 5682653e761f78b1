use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rug::float::Constant;
use rug::{Complex, Float, Rational};

use super::integrals::{character_xi_integral, ramanujan_xi_integral};
use super::{CheckPoint, CheckReport, Role, TheoremId};
use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::herglotz::{f_character, frak_f, herglotz_f, higher_fk, script_f, HerglotzParams};
use crate::lfunctions::l_function_prec;
use crate::precision::{powi, PrecisionContext};
use crate::residues::{closed_form_residues, r_nx, r_nx_from_residues, residue_sum, ClosedFormVariant, MellinIntegrand};
use crate::specfun::dilog::dilog_prec;
use crate::specfun::zeta::{gamma1_prec, zeta_deriv_prec, zeta_prec};

fn require_re_pos(x: &Complex, name: &str) -> Result<()> {
    if *x.real() <= 0 {
        return Err(Error::Domain(format!("{name} must have positive real part")));
    }
    Ok(())
}

/// Short rendering of a parameter value.
pub(crate) fn fmt_param(x: &Complex) -> String {
    let re = x.real().to_f64();
    let im = x.imag().to_f64();
    if im == 0.0 {
        format!("{re}")
    } else if re == 0.0 {
        format!("{im}i")
    } else if im < 0.0 {
        format!("{re}-{}i", -im)
    } else {
        format!("{re}+{im}i")
    }
}

fn params(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn frak(k: Rational, n: Rational, x: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    frak_f(&HerglotzParams::new(k, n, x.clone())?, ctx)
}

fn script(k: Rational, n: Rational, x: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    script_f(&HerglotzParams::new(k, n, x.clone())?, ctx)
}

/// x^{num/den} on the principal branch.
fn xpow(x: &Complex, num: i64, den: i64, prec: u32) -> Complex {
    let e = Float::with_val(prec, Rational::from((num, den)));
    (Complex::with_val(prec, x.ln_ref()) * e).exp()
}

/// e^{iπ num/den}
fn expi_pi(num: i64, den: i64, prec: u32) -> Complex {
    let a = Float::with_val(prec, Constant::Pi) * Float::with_val(prec, Rational::from((num, den)));
    Complex::with_val(prec, (Float::new(prec), a)).exp()
}

fn zeta_r(num: i64, den: i64, prec: u32) -> Result<Complex> {
    zeta_prec(&Complex::with_val(prec, Float::with_val(prec, Rational::from((num, den)))), prec)
}

fn dzeta_r(num: i64, den: i64, prec: u32) -> Result<Complex> {
    zeta_deriv_prec(&Complex::with_val(prec, Float::with_val(prec, Rational::from((num, den)))), prec)
}

fn sign(j: i64) -> i32 {
    if j.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// j = −(N−1), −(N−3), …, N−1
fn double_prime(n: i64) -> impl Iterator<Item = i64> {
    (0..n).map(move |i| -(n - 1) + 2 * i)
}

/// (1/2)(γ − log(2π/x)) − (1/(2x))(γ − log(2πx))
fn ramanujan_rephrased_rhs(x: &Complex, prec: u32) -> Complex {
    let g = Float::with_val(prec, Constant::Euler);
    let two_pi = Float::with_val(prec, Constant::Pi) * 2u32;
    let l1 = Complex::with_val(prec, Complex::with_val(prec, x.recip_ref()) * &two_pi).ln();
    let l2 = Complex::with_val(prec, x * &two_pi).ln();
    let a = Complex::with_val(prec, &g - l1) / 2u32;
    let b = Complex::with_val(prec, &g - l2) / Complex::with_val(prec, x * 2u32);
    a - b
}

/// √a {(γ − log(2πa))/(2a) + 𝔉_{0,1}(a)}
fn ramanujan_side(a: &Complex, frak0: &Complex, prec: u32) -> Complex {
    let g = Float::with_val(prec, Constant::Euler);
    let two_pi = Float::with_val(prec, Constant::Pi) * 2u32;
    let l = Complex::with_val(prec, a * &two_pi).ln();
    let head = Complex::with_val(prec, &g - l) / Complex::with_val(prec, a * 2u32);
    Complex::with_val(prec, a.sqrt_ref()) * (head + frak0)
}

/// 𝔉_{k,1}(x) = (−1)^k x^{k−1}{𝔉_{k,1}(1/x) − 𝓑_k(x)}, with 𝓑_k from the
/// stated closed form and from the residue oracle.
pub fn check_t2_1(k: u32, x: &Complex, ctx: &PrecisionContext) -> Result<CheckReport> {
    require_re_pos(x, "x")?;
    let prec = ctx.prec();
    let x = Complex::with_val(prec, x);
    let ps = params(&[("k", k.to_string()), ("x", fmt_param(&x))]);
    let mut rep = CheckReport::new(TheoremId::T2_1, ctx.bits());
    let t0 = Instant::now();
    let kq = Rational::from(k);
    let xinv = Complex::with_val(prec, x.recip_ref());
    let fx = frak(kq.clone(), Rational::from(1), &x, ctx)?;
    let fxi = frak(kq, Rational::from(1), &xinv, ctx)?;
    let factor = powi(&x, k as i32 - 1) * sign(k as i64);
    let integrand = MellinIntegrand::theorem21(k as i64, x.clone())?;
    let b_stmt = closed_form_residues(&integrand, ClosedFormVariant::Paper, ctx)?;
    let rhs = Complex::with_val(prec, &fxi - &b_stmt) * &factor;
    rep.points.push(CheckPoint::compare(&ps, "stated_b_k", Role::Primary, fx.clone(), rhs, ctx.check_tol(), t0));
    let t1 = Instant::now();
    let b_oracle = residue_sum(&integrand, ctx)?;
    let rhs = Complex::with_val(prec, &fxi - &b_oracle) * &factor;
    rep.points.push(CheckPoint::compare(&ps, "residue_oracle", Role::Primary, fx.clone(), rhs, ctx.check_tol(), t1));
    if k == 0 {
        let t2 = Instant::now();
        let lhs = Complex::with_val(prec, &fx - Complex::with_val(prec, &fxi / &x));
        let rhs = ramanujan_rephrased_rhs(&x, prec);
        rep.points.push(CheckPoint::compare(&ps, "ramanujan_rephrased", Role::Primary, lhs, rhs, ctx.check_tol(), t2));
        let lhs = ramanujan_side(&x, &fx, prec);
        let rhs = ramanujan_side(&xinv, &fxi, prec);
        rep.points.push(CheckPoint::compare(&ps, "ramanujan_series", Role::Primary, lhs, rhs, ctx.check_tol(), t2));
    }
    rep.finish();
    Ok(rep)
}

/// G(a) = a^{(1−k)/2}{(γ + log a)ζ(k) − ζ'(k) + ζ(k+1)/(2a) + 𝔉_{k,1}(a)}
fn t2_2_side(k: u32, a: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    let prec = ctx.prec();
    let g = Float::with_val(prec, Constant::Euler);
    let zk = zeta_r(k as i64, 1, prec)?;
    let dzk = dzeta_r(k as i64, 1, prec)?;
    let zk1 = zeta_r(k as i64 + 1, 1, prec)?;
    let la = Complex::with_val(prec, a.ln_ref());
    let mut v = Complex::with_val(prec, la + &g) * zk - dzk;
    v += zk1 / Complex::with_val(prec, a * 2u32);
    v += frak(Rational::from(k), Rational::from(1), a, ctx)?;
    Ok(v * xpow(a, 1 - k as i64, 2, prec))
}

/// The α ↔ β symmetric form. The printed j-sum sign (−1)^j is reported as
/// informational; the primary comparison uses −(−1)^j, which is what the
/// k ≥ 2 case of the previous identity implies.
pub fn check_t2_2(k: u32, alpha: &Complex, ctx: &PrecisionContext) -> Result<CheckReport> {
    if k < 2 {
        return Err(Error::Domain(format!("T2_2 needs k >= 2, got {k}")));
    }
    require_re_pos(alpha, "alpha")?;
    let prec = ctx.prec();
    let a = Complex::with_val(prec, alpha);
    let b = Complex::with_val(prec, a.recip_ref());
    let ps = params(&[("k", k.to_string()), ("alpha", fmt_param(&a))]);
    let mut rep = CheckReport::new(TheoremId::T2_2, ctx.bits());
    let t0 = Instant::now();
    let lhs = t2_2_side(k, &a, ctx)?;
    let sym = t2_2_side(k, &b, ctx)? * sign(k as i64);
    let mut jsum = Complex::with_val(prec, 0);
    let lb = Complex::with_val(prec, b.ln_ref());
    for j in 1..=(k as i64 - 2) {
        let t = zeta_r(j + 1, 1, prec)? * zeta_r(k as i64 - j, 1, prec)?;
        let bp = (lb.clone() * Float::with_val(prec, Rational::from((-j, 2)))).exp();
        jsum += t * xpow(&a, 1 - k as i64 + j, 2, prec) * bp * sign(j);
    }
    let derived = Complex::with_val(prec, &sym - &jsum);
    rep.points.push(CheckPoint::compare(&ps, "derived_sign", Role::Primary, lhs.clone(), derived, ctx.check_tol(), t0));
    let printed = Complex::with_val(prec, &sym + &jsum);
    let p = CheckPoint::compare(&ps, "printed_sign", Role::Informational, lhs, printed, ctx.check_tol(), t0);
    if k >= 3 {
        rep.variant_notes.push(format!(
            "printed j-sum sign: residual {:.3e} at k={k} (derived sign -(-1)^j is primary)",
            p.abs_err
        ));
    }
    rep.points.push(p);
    rep.finish();
    Ok(rep)
}

/// 𝔉_{0,N}(x) = (x^{−1/N}/N) Σ″ e^{−iπj/N} 𝔉_{(N−1)/N,1/N}(e^{−iπj/N}/x^{1/N})
///              − (1/2)(log((2π)^N/x) − γ) + R(N, x)
pub fn check_t2_3(n: u32, x: &Complex, ctx: &PrecisionContext) -> Result<CheckReport> {
    if n < 1 {
        return Err(Error::Domain("T2_3 needs N >= 1".into()));
    }
    require_re_pos(x, "x")?;
    let prec = ctx.prec();
    let x = Complex::with_val(prec, x);
    let ni = n as i64;
    let ps = params(&[("N", n.to_string()), ("x", fmt_param(&x))]);
    let mut rep = CheckReport::new(TheoremId::T2_3, ctx.bits());
    let t0 = Instant::now();
    let lhs = frak(Rational::from(0), Rational::from(n), &x, ctx)?;
    let x_inv_n = xpow(&x, -1, ni, prec);
    let mut sum = Complex::with_val(prec, 0);
    for j in double_prime(ni) {
        let e = expi_pi(-j, ni, prec);
        let arg = Complex::with_val(prec, &e * &x_inv_n);
        sum += e * frak(Rational::from((ni - 1, ni)), Rational::from((1, ni)), &arg, ctx)?;
    }
    let series = sum * &x_inv_n / n;
    let g = Float::with_val(prec, Constant::Euler);
    let l2pi = Float::with_val(prec, Float::with_val(prec, Constant::Pi) * 2u32).ln() * n;
    let half_log = (Complex::with_val(prec, l2pi - Complex::with_val(prec, x.ln_ref())) - &g) / 2u32;
    let base = Complex::with_val(prec, &series - &half_log);
    let r_stated = r_nx(ni, &x, ctx)?;
    rep.points.push(CheckPoint::compare(
        &ps,
        "stated_r",
        Role::Primary,
        lhs.clone(),
        Complex::with_val(prec, &base + &r_stated),
        ctx.check_tol(),
        t0,
    ));
    let t1 = Instant::now();
    let r_oracle = r_nx_from_residues(ni, &x, ctx)?;
    rep.points.push(CheckPoint::compare(
        &ps,
        "residue_oracle",
        Role::Primary,
        lhs.clone(),
        Complex::with_val(prec, &base + &r_oracle),
        ctx.check_tol(),
        t1,
    ));
    if n == 1 {
        // the same identity in its rephrased x ↔ 1/x form
        let t2 = Instant::now();
        let xinv = Complex::with_val(prec, x.recip_ref());
        let fxi = frak(Rational::from(0), Rational::from(1), &xinv, ctx)?;
        let rhs = Complex::with_val(prec, &fxi / &x) + ramanujan_rephrased_rhs(&x, prec);
        rep.points.push(CheckPoint::compare(&ps, "ramanujan_rephrased", Role::Primary, lhs, rhs, ctx.check_tol(), t2));
    }
    rep.finish();
    Ok(rep)
}

/// ((−1)^k/N) x^{(k−1)/N} Σ″ e^{iπj(k−1)/N} 𝔉_{(N+k−1)/N,1/N}(e^{−iπj/N}/x^{1/N})
fn t2_4_series(k: i64, n: i64, x: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    let prec = ctx.prec();
    let x_inv_n = xpow(x, -1, n, prec);
    let mut sum = Complex::with_val(prec, 0);
    for j in double_prime(n) {
        let arg = Complex::with_val(prec, expi_pi(-j, n, prec) * &x_inv_n);
        let f = frak(Rational::from((n + k - 1, n)), Rational::from((1, n)), &arg, ctx)?;
        sum += expi_pi(j * (k - 1), n, prec) * f;
    }
    Ok(sum * xpow(x, k - 1, n, prec) * sign(k) / n as u32)
}

/// 𝔉_{k,N}(x) = series − (x^{(k−1)/N}/N) ℛ(x) for integers k, N ≥ 2.
///
/// ℛ from the residue oracle and from the re-derived closed form are
/// primary; the two printed forms are informational and their distance to
/// the oracle is recorded in the notes.
pub fn check_t2_4(k: u32, n: u32, x: &Complex, ctx: &PrecisionContext) -> Result<CheckReport> {
    if k < 2 || n < 2 {
        return Err(Error::Domain(format!("T2_4 needs integers k, N >= 2 (k={k}, N={n})")));
    }
    require_re_pos(x, "x")?;
    let prec = ctx.prec();
    let x = Complex::with_val(prec, x);
    let (ki, ni) = (k as i64, n as i64);
    let ps = params(&[("k", k.to_string()), ("N", n.to_string()), ("x", fmt_param(&x))]);
    let case = if (ki - 1) % ni == 0 {
        "N|k-1"
    } else if ki % ni == 0 {
        "N|k"
    } else {
        "N∤k, N∤k-1"
    };
    let mut rep = CheckReport::new(TheoremId::T2_4, ctx.bits());
    let t0 = Instant::now();
    let lhs = frak(Rational::from(k), Rational::from(n), &x, ctx)?;
    let series = t2_4_series(ki, ni, &x, ctx)?;
    let scale = xpow(&x, ki - 1, ni, prec) / n;
    let rhs_for = |r: &Complex| Complex::with_val(prec, &series - Complex::with_val(prec, r * &scale));
    let integrand = MellinIntegrand::general_kn(ki, ni, x.clone())?;
    let oracle = residue_sum(&integrand, ctx)?;
    rep.points.push(CheckPoint::compare(&ps, "residue_oracle", Role::Primary, lhs.clone(), rhs_for(&oracle), ctx.check_tol(), t0));
    for (variant, role) in [
        (ClosedFormVariant::Corrected, Role::Primary),
        (ClosedFormVariant::Paper, Role::Informational),
        (ClosedFormVariant::PaperProof, Role::Informational),
    ] {
        let t = Instant::now();
        let r = closed_form_residues(&integrand, variant, ctx)?;
        let delta = Float::with_val(64, Complex::with_val(prec, &r - &oracle).abs_ref()).to_f64();
        if role == Role::Informational {
            let verdict = if delta <= ctx.check_tol() { "matches" } else { "differs from" };
            rep.variant_notes.push(format!(
                "k={k} N={n} x={} ({case}): {variant} closed form {verdict} the oracle, |delta R| = {delta:.3e}",
                fmt_param(&x)
            ));
        }
        rep.points.push(CheckPoint::compare(&ps, &variant.to_string(), role, lhs.clone(), rhs_for(&r), ctx.check_tol(), t));
    }
    rep.finish();
    Ok(rep)
}

/// The functional equation for ℱ_{k,N} with 1 < k ≤ N, including the extra
/// k = N term.
pub fn check_c2_5(k: u32, n: u32, x: &Complex, ctx: &PrecisionContext) -> Result<CheckReport> {
    if !(1 < k && k <= n) {
        return Err(Error::Domain(format!("C2_5 needs 1 < k <= N (k={k}, N={n})")));
    }
    require_re_pos(x, "x")?;
    let prec = ctx.prec();
    let x = Complex::with_val(prec, x);
    let (ki, ni) = (k as i64, n as i64);
    let ps = params(&[("k", k.to_string()), ("N", n.to_string()), ("x", fmt_param(&x))]);
    let mut rep = CheckReport::new(TheoremId::C2_5, ctx.bits());
    let t0 = Instant::now();
    let x_inv_n = xpow(&x, -1, ni, prec);
    let mut sum = Complex::with_val(prec, 0);
    for j in double_prime(ni) {
        let arg = Complex::with_val(prec, expi_pi(-j, ni, prec) * &x_inv_n);
        let f = script(Rational::from((ni + ki - 1, ni)), Rational::from((1, ni)), &arg, ctx)?;
        sum += expi_pi(j * (ki - 1), ni, prec) * f;
    }
    let x1k = xpow(&x, 1 - ki, ni, prec);
    let lhs = script(Rational::from(k), Rational::from(n), &x, ctx)? * &x1k - sum * sign(ki) / n;

    let pi = Float::with_val(prec, Constant::Pi);
    let g = Float::with_val(prec, Constant::Euler);
    let sin = Float::with_val(prec, &pi * Float::with_val(prec, Rational::from((ki - 1, ni)))).sin();
    let mut rhs = zeta_r(ni + ki - 1, ni, prec)? * &pi / (sin * n);
    let lx = Complex::with_val(prec, x.ln_ref());
    let inner = zeta_r(ki, 1, prec)? * -(lx + &g) + dzeta_r(ki, 1, prec)? * n;
    rhs += inner * &x1k;
    rhs -= zeta_r(ki + ni, 1, prec)? * xpow(&x, -(ni + ki - 1), ni, prec);
    if k == n {
        rhs += zeta_r(ki + ni, ni, prec)? * xpow(&x, 1, ni, prec) * sign(ki + ni + 1);
    }
    rep.points.push(CheckPoint::compare(&ps, "stated", Role::Primary, lhs, rhs, ctx.check_tol(), t0));
    rep.finish();
    Ok(rep)
}

/// Readings of the second term in the character functional equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum T26Candidate {
    /// F_k(x, χ̄) at the same x
    AsPrintedSecondArgConjugate,
    /// F_k(1/x, χ)
    SecondTermAt1OverXSameChi,
    /// F_k(1/x, χ̄)
    SecondTermAt1OverXConjugateChi,
    /// F_k(1/x, χ) with the right-hand side negated
    SecondTermAt1OverXSameChiNegatedRhs,
}

impl T26Candidate {
    pub const ALL: [T26Candidate; 4] = [
        T26Candidate::AsPrintedSecondArgConjugate,
        T26Candidate::SecondTermAt1OverXSameChi,
        T26Candidate::SecondTermAt1OverXConjugateChi,
        T26Candidate::SecondTermAt1OverXSameChiNegatedRhs,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            T26Candidate::AsPrintedSecondArgConjugate => "as_printed_second_arg_conjugate",
            T26Candidate::SecondTermAt1OverXSameChi => "second_term_at_1_over_x_same_chi",
            T26Candidate::SecondTermAt1OverXConjugateChi => "second_term_at_1_over_x_conjugate_chi",
            T26Candidate::SecondTermAt1OverXSameChiNegatedRhs => "second_term_at_1_over_x_same_chi_negated_rhs",
        }
    }
}

impl fmt::Display for T26Candidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for T26Candidate {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        T26Candidate::ALL
            .into_iter()
            .find(|c| c.name() == s.trim())
            .ok_or_else(|| Error::Parse(format!("unknown candidate '{s}'")))
    }
}

/// F_k(x, χ) − (−1)^k x^{k−1} (second term) = Σ_{j<k} (−x)^{k−j−1} L(1+j, χ) L(k−j, χ),
/// once per candidate reading of the second term.
pub fn check_t2_6(
    k: u32,
    x: &Complex,
    chi: &DirichletCharacter,
    candidates: &[T26Candidate],
    ctx: &PrecisionContext,
) -> Result<CheckReport> {
    require_re_pos(x, "x")?;
    if chi.is_principal() || !chi.is_primitive() {
        return Err(Error::Domain(format!("{} is not primitive and nonprincipal", chi.label())));
    }
    let prec = ctx.prec();
    let x = Complex::with_val(prec, x);
    let xinv = Complex::with_val(prec, x.recip_ref());
    let ps = params(&[("k", k.to_string()), ("x", fmt_param(&x)), ("chi", chi.label())]);
    let mut rep = CheckReport::new(TheoremId::T2_6, ctx.bits());
    let first = f_character(&x, k, chi, ctx)?;
    let factor = powi(&x, k as i32 - 1) * sign(k as i64);
    let mut rhs = Complex::with_val(prec, 0);
    let neg_x = Complex::with_val(prec, -&x);
    for j in 0..k as i64 {
        let l1 = l_function_prec(&Complex::with_val(prec, 1 + j), chi, prec)?;
        let l2 = l_function_prec(&Complex::with_val(prec, k as i64 - j), chi, prec)?;
        rhs += l1 * l2 * powi(&neg_x, (k as i64 - j - 1) as i32);
    }
    let conj = chi.conjugate();
    for c in candidates {
        let t = Instant::now();
        let (arg, ch) = match c {
            T26Candidate::AsPrintedSecondArgConjugate => (&x, &conj),
            T26Candidate::SecondTermAt1OverXSameChi | T26Candidate::SecondTermAt1OverXSameChiNegatedRhs => (&xinv, chi),
            T26Candidate::SecondTermAt1OverXConjugateChi => (&xinv, &conj),
        };
        let second = f_character(arg, k, ch, ctx)?;
        let lhs = Complex::with_val(prec, &first - Complex::with_val(prec, &second * &factor));
        let r = if *c == T26Candidate::SecondTermAt1OverXSameChiNegatedRhs {
            Complex::with_val(prec, -&rhs)
        } else {
            rhs.clone()
        };
        rep.points.push(CheckPoint::compare(&ps, c.name(), Role::Candidate, lhs, r, ctx.check_tol(), t));
    }
    if k == 0 {
        // must agree with √α F₀(α, χ) = √β F₀(β, χ)
        let t = Instant::now();
        let second = f_character(&xinv, 0, chi, ctx)?;
        let lhs = Complex::with_val(prec, x.sqrt_ref()) * &first;
        let rhs = Complex::with_val(prec, xinv.sqrt_ref()) * second;
        rep.points.push(CheckPoint::compare(&ps, "k0_modular_relation", Role::Primary, lhs, rhs, ctx.check_tol(), t));
    }
    rep.finish();
    Ok(rep)
}

/// √α F₀(α, χ) = √β F₀(β, χ) = the Ξ(t, χ) integral.
pub fn check_t2_7(alpha: &Complex, chi: &DirichletCharacter, ctx: &PrecisionContext) -> Result<CheckReport> {
    require_re_pos(alpha, "alpha")?;
    let prec = ctx.prec();
    let a = Complex::with_val(prec, alpha);
    let b = Complex::with_val(prec, a.recip_ref());
    let ps = params(&[("alpha", fmt_param(&a)), ("chi", chi.label())]);
    let mut rep = CheckReport::new(TheoremId::T2_7, ctx.bits());
    let t0 = Instant::now();
    let lhs = Complex::with_val(prec, a.sqrt_ref()) * f_character(&a, 0, chi, ctx)?;
    let rhs = Complex::with_val(prec, b.sqrt_ref()) * f_character(&b, 0, chi, ctx)?;
    rep.points.push(CheckPoint::compare(&ps, "series", Role::Primary, lhs.clone(), rhs.clone(), ctx.check_tol(), t0));
    let t1 = Instant::now();
    let integral = character_xi_integral(&a, chi, ctx)?;
    rep.variant_notes.push(format!(
        "alpha={} chi={}: integral truncated at T={} (certified tail <= {:.2e}, {} panels)",
        fmt_param(&a),
        chi.label(),
        integral.t_max,
        integral.tail_bound,
        integral.panels
    ));
    let iv = Complex::with_val(prec, &integral.value);
    rep.points.push(CheckPoint::compare(&ps, "integral_vs_alpha", Role::Primary, lhs, iv.clone(), ctx.integral_tol(), t1));
    rep.points.push(CheckPoint::compare(&ps, "integral_vs_beta", Role::Primary, rhs, iv, ctx.integral_tol(), t1));
    rep.finish();
    Ok(rep)
}

/// Ramanujan's modular relation for Σ φ(nα), and optionally the Ξ-integral
/// that equals both sides (second report, integral tolerance).
pub fn check_ramanujan_220(alpha: &Complex, with_integral: bool, ctx: &PrecisionContext) -> Result<Vec<CheckReport>> {
    let prec = ctx.prec();
    let a = Complex::with_val(prec, alpha);
    let ps = params(&[("alpha", fmt_param(&a))]);
    require_re_pos(&a, "alpha")?;
    let b = Complex::with_val(prec, a.recip_ref());
    let t0 = Instant::now();
    let fa = frak(Rational::from(0), Rational::from(1), &a, ctx)?;
    let fb = frak(Rational::from(0), Rational::from(1), &b, ctx)?;
    let lhs = ramanujan_side(&a, &fa, prec);
    let rhs = ramanujan_side(&b, &fb, prec);
    let mut series = CheckReport::new(TheoremId::Ramanujan220, ctx.bits());
    series.points.push(CheckPoint::compare(&ps, "series", Role::Primary, lhs.clone(), rhs.clone(), ctx.check_tol(), t0));
    series.finish();
    let mut out = vec![series];
    if with_integral {
        if !a.imag().is_zero() {
            return Err(Error::Domain("the Xi-integral form is checked for real alpha > 0 only".into()));
        }
        let t1 = Instant::now();
        let integral = ramanujan_xi_integral(a.real(), ctx)?;
        let mut xi = CheckReport::new(TheoremId::RamanujanXi, ctx.bits());
        xi.variant_notes.push(format!(
            "alpha={}: integral truncated at T={} (certified tail <= {:.2e}, {} panels)",
            fmt_param(&a),
            integral.t_max,
            integral.tail_bound,
            integral.panels
        ));
        let iv = Complex::with_val(prec, &integral.value);
        xi.points.push(CheckPoint::compare(&ps, "integral_vs_alpha", Role::Primary, lhs, iv.clone(), ctx.integral_tol(), t1));
        xi.points.push(CheckPoint::compare(&ps, "integral_vs_beta", Role::Primary, rhs, iv, ctx.integral_tol(), t1));
        xi.finish();
        out.push(xi);
    }
    Ok(out)
}

/// Zagier's two- and three-term equations for F(x).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZagierEquation {
    TwoTerm,
    ThreeTerm,
}

impl FromStr for ZagierEquation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "fe2" | "two" => Ok(Self::TwoTerm),
            "fe3" | "three" => Ok(Self::ThreeTerm),
            _ => Err(Error::Parse(format!("unknown Zagier equation '{s}' (fe2 or fe3)"))),
        }
    }
}

fn f_one(prec: u32) -> Complex {
    // −γ²/2 − π²/12 − γ₁
    let g = Float::with_val(prec, Constant::Euler);
    let pi = Float::with_val(prec, Constant::Pi);
    let v = -(Float::with_val(prec, g.square_ref()) / 2u32) - Float::with_val(prec, pi.square_ref()) / 12u32 - gamma1_prec(prec);
    Complex::with_val(prec, v)
}

pub fn check_zagier(x: &Complex, which: ZagierEquation, ctx: &PrecisionContext) -> Result<CheckReport> {
    let prec = ctx.prec();
    let x = Complex::with_val(prec, x);
    let t0 = Instant::now();
    let f1 = f_one(prec);
    let fx = herglotz_f(&x, ctx)?;
    let (id, lhs, rhs) = match which {
        ZagierEquation::TwoTerm => {
            let xinv = Complex::with_val(prec, x.recip_ref());
            let lhs = Complex::with_val(prec, &fx + herglotz_f(&xinv, ctx)?);
            let lx = Complex::with_val(prec, x.ln_ref());
            let pi2 = Float::with_val(prec, Constant::Pi).square();
            let xm1 = Complex::with_val(prec, &x - 1u32);
            let sq = Complex::with_val(prec, xm1.square_ref());
            let last = sq * pi2 / Complex::with_val(prec, &x * 6u32);
            let rhs = Complex::with_val(prec, &f1 * 2u32) + Complex::with_val(prec, lx.square_ref()) / 2u32 - last;
            (TheoremId::ZagierFe2, lhs, rhs)
        }
        ZagierEquation::ThreeTerm => {
            let xp1 = Complex::with_val(prec, &x + 1u32);
            let ratio = Complex::with_val(prec, &x / &xp1);
            let lhs = Complex::with_val(prec, &fx - herglotz_f(&xp1, ctx)?) - herglotz_f(&ratio, ctx)?;
            let li = dilog_prec(&Complex::with_val(prec, xp1.recip_ref()), prec)?;
            (TheoremId::ZagierFe3, lhs, li - &f1)
        }
    };
    let ps = params(&[("x", fmt_param(&x))]);
    let mut rep = CheckReport::new(id, ctx.bits());
    rep.points.push(CheckPoint::compare(&ps, "stated", Role::Primary, lhs, rhs, ctx.check_tol(), t0));
    rep.finish();
    Ok(rep)
}

/// F_k(x) + (−x)^{k−1} F_k(1/x) = −γζ(k)(1 + (−x)^{k−1}) − Σ_{r=2}^{k−1} ζ(r)ζ(k+1−r)(−x)^{r−1}
///                                + ζ(k+1)((−x)^k − 1/x),
/// plus a cross-check of the same right-hand side built from 𝔉_{k,1} and 𝓑_k.
pub fn check_vz(k: u32, x: &Complex, ctx: &PrecisionContext) -> Result<CheckReport> {
    if k < 2 {
        return Err(Error::Domain(format!("VZ_FE needs k >= 2, got {k}")));
    }
    let prec = ctx.prec();
    let x = Complex::with_val(prec, x);
    let ki = k as i64;
    let ps = params(&[("k", k.to_string()), ("x", fmt_param(&x))]);
    let mut rep = CheckReport::new(TheoremId::VzFe, ctx.bits());
    let t0 = Instant::now();
    let xinv = Complex::with_val(prec, x.recip_ref());
    let neg_x = Complex::with_val(prec, -&x);
    let w = powi(&neg_x, k as i32 - 1);
    let lhs = higher_fk(&x, k, ctx)? + higher_fk(&xinv, k, ctx)? * &w;

    let g = Float::with_val(prec, Constant::Euler);
    let zk = zeta_r(ki, 1, prec)?;
    let zk1 = zeta_r(ki + 1, 1, prec)?;
    let mut rhs = -(Complex::with_val(prec, &w + 1u32) * &zk * &g);
    for r in 2..ki {
        rhs -= zeta_r(r, 1, prec)? * zeta_r(ki + 1 - r, 1, prec)? * powi(&neg_x, (r - 1) as i32);
    }
    rhs += Complex::with_val(prec, powi(&neg_x, k as i32) - &xinv) * &zk1;
    rep.points.push(CheckPoint::compare(&ps, "stated", Role::Primary, lhs, rhs.clone(), ctx.check_tol(), t0));

    // F_k(y) = 𝔉_{k,1}(y) + ζ(k) log y − ζ'(k) − ζ(k+1)/(2y), with 𝔉_{k,1}(x)
    // replaced through the N = 1 identity.
    if *x.real() > 0 {
        let t1 = Instant::now();
        let dzk = dzeta_r(ki, 1, prec)?;
        let lx = Complex::with_val(prec, x.ln_ref());
        let fxi = frak(Rational::from(k), Rational::from(1), &xinv, ctx)?;
        let b = closed_form_residues(&MellinIntegrand::theorem21(ki, x.clone())?, ClosedFormVariant::Paper, ctx)?;
        let fx_frak = Complex::with_val(prec, &fxi - &b) * powi(&x, k as i32 - 1) * sign(ki);
        let fk_x = fx_frak + Complex::with_val(prec, &zk * &lx) - &dzk - Complex::with_val(prec, &zk1 / Complex::with_val(prec, &x * 2u32));
        let fk_xi = fxi - Complex::with_val(prec, &zk * &lx) - &dzk - Complex::with_val(prec, &zk1 * &x) / 2u32;
        let built = fk_x + fk_xi * &w;
        rep.points.push(CheckPoint::compare(&ps, "via_n1_identity", Role::Primary, built, rhs, ctx.check_tol() * 100.0, t1));
    }
    rep.finish();
    Ok(rep)
}

/// Contour-shift identity for a Mellin integrand: the difference of the two
/// vertical-line integrals against the oracle residue sum. Runs at no more
/// than 128 bits and is compared at the integral tolerance.
pub fn check_contour_shift(f: &MellinIntegrand, ctx: &PrecisionContext) -> Result<CheckReport> {
    let ctx = ctx.rescaled(ctx.bits().min(128), ctx.check_tol().max(ctx.integral_tol()))?;
    let mut ps = params(&[("family", f.family.name().to_string()), ("x", fmt_param(&f.x))]);
    ps.insert("k".into(), f.k.to_string());
    if f.family == crate::residues::Family::GeneralKN || f.family == crate::residues::Family::Theorem23K0 {
        ps.insert("N".into(), f.n.to_string());
    }
    if let Some(chi) = &f.chi {
        ps.insert("chi".into(), chi.label());
    }
    let mut rep = CheckReport::new(TheoremId::ContourShift, ctx.bits());
    let t0 = Instant::now();
    let lines = crate::residues::contour_shift_difference(f, &ctx)?;
    let sum = residue_sum(f, &ctx)?;
    rep.points.push(CheckPoint::compare(&ps, "lines_minus_residues", Role::Primary, lines, sum, ctx.integral_tol(), t0));
    rep.finish();
    Ok(rep)
}
