//! Ξ-function integrals over [0, ∞), truncated where an explicit bound on
//! the integrand certifies the tail.

use rug::float::Constant;
use rug::{Complex, Float};

use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::lfunctions::{completed_prec, riemann_xi_s_prec};
use crate::precision::{abs_f64, arg_f64, PrecisionContext};
use crate::quadrature::gl_adaptive_prec;
use crate::specfun::gamma::gamma_prec;

/// A truncated integral with its certificate.
#[derive(Debug, Clone)]
pub struct IntegralValue {
    pub value: Complex,
    /// upper limit actually integrated to
    pub t_max: f64,
    /// bound on ∫_{t_max}^∞ |integrand|
    pub tail_bound: f64,
    pub panels: usize,
}

const PANEL_WIDTH: f64 = 2.0;

/// Working precision for an integral that must reach `tol`.
fn integral_prec(tol: f64, ctx: &PrecisionContext) -> u32 {
    let need = (-tol.log2()).ceil() as u32 + 64;
    need.max(128).min(ctx.prec())
}

/// Smallest T (a multiple of the panel width) with
/// ∫_T^∞ (a + b t) e^{−c t} dt = e^{−cT}((a + bT)/c + b/c²) ≤ target.
fn truncation_point(a: f64, b: f64, c: f64, target: f64) -> (f64, f64) {
    let tail = |t: f64| (-c * t).exp() * ((a + b * t) / c + b / (c * c));
    let mut t = PANEL_WIDTH;
    while tail(t) > target {
        t += PANEL_WIDTH;
    }
    (t, tail(t))
}

fn integrate<F>(f: &F, t_max: f64, tol: f64, prec: u32) -> Result<(Complex, usize)>
where
    F: Fn(&Float) -> Result<Complex>,
{
    let panels = (t_max / PANEL_WIDTH).round() as usize;
    let panel_tol = Float::with_val(prec, tol / (4.0 * panels as f64));
    let mut acc = Complex::with_val(prec, 0);
    for p in 0..panels {
        let a = Float::with_val(prec, p as f64 * PANEL_WIDTH);
        let b = Float::with_val(prec, (p + 1) as f64 * PANEL_WIDTH);
        acc += gl_adaptive_prec(f, &a, &b, 16, &panel_tol, prec)?;
    }
    Ok((acc, panels))
}

/// −π^{−3/2} ∫₀^∞ |Ξ(t/2) Γ((−1+it)/4)|² cos((t/2) log α)/(1+t²) dt, α > 0.
///
/// The integrand equals −|ζ(1/2+it/2)|² cos((t/2) log α)/(2 cosh(πt/2)), and
/// |ζ(1/2+iτ)| ≤ 2 + 6(1+τ)^{1/2} gives |integrand| ≤ (80 + 36t) e^{−πt/2}.
pub fn ramanujan_xi_integral(alpha: &Float, ctx: &PrecisionContext) -> Result<IntegralValue> {
    if *alpha <= 0 {
        return Err(Error::Domain("alpha must be positive".into()));
    }
    let tol = ctx.integral_tol();
    let prec = integral_prec(tol, ctx);
    let (t_max, tail_bound) = truncation_point(80.0, 36.0, std::f64::consts::FRAC_PI_2, tol / 4.0);
    let la = Float::with_val(prec, alpha.ln_ref());
    let pi = Float::with_val(prec, Constant::Pi);
    let norm = (Float::with_val(prec, pi.sqrt_ref()) * &pi).recip();
    let f = |t: &Float| -> Result<Complex> {
        let s = Complex::with_val(prec, (0.5, Float::with_val(prec, t / 2u32)));
        let xi = riemann_xi_s_prec(&s, prec)?;
        let g = gamma_prec(&Complex::with_val(prec, (-0.25, Float::with_val(prec, t / 4u32))), prec)?;
        let m = Complex::with_val(prec, xi * g).norm().real().clone();
        let c = Float::with_val(prec, Float::with_val(prec, t * &la) / 2u32).cos();
        let den = Float::with_val(prec, t.square_ref()) + 1u32;
        Ok(Complex::with_val(prec, -(m * c / den) * &norm))
    };
    let (value, panels) = integrate(&f, t_max, tol, prec)?;
    Ok(IntegralValue { value, t_max, tail_bound, panels })
}

/// −(1/2π)(π/d)^{b+1/2} ∫₀^∞ |Γ(1/2+it/2)/Γ(1/4+it/4+b/2)|² Ξ(−t/2, χ) Ξ(t/2, χ) cos((t/2) log α) dt.
///
/// The Γ-quotient cancels the Γ-factors of the two Ξ's, leaving
/// −(1/2) L(1/2−it/2, χ) L(1/2+it/2, χ) cos(·)/cosh(πt/2); with
/// |L(1/2+iτ, χ)| ≤ (2 + 6(1+τ)^{1/2})√d and |cos((t/2) log α)| ≤ e^{t|arg α|/2}
/// the integrand is at most d (80 + 36t) e^{−(π−|arg α|)t/2}.
pub fn character_xi_integral(alpha: &Complex, chi: &DirichletCharacter, ctx: &PrecisionContext) -> Result<IntegralValue> {
    if *alpha.real() <= 0 {
        return Err(Error::Domain("alpha must have positive real part".into()));
    }
    if chi.is_principal() || !chi.is_primitive() {
        return Err(Error::Domain(format!("{} is not primitive and nonprincipal", chi.label())));
    }
    let tol = ctx.integral_tol();
    let prec = integral_prec(tol, ctx);
    let d = chi.modulus() as f64;
    let theta = arg_f64(alpha).abs();
    let c = (std::f64::consts::PI - theta) / 2.0;
    let (t_max, tail_bound) = truncation_point(80.0 * d, 36.0 * d, c, tol / 4.0);
    let b = chi.parity() as u32;
    let la = Complex::with_val(prec, Complex::with_val(prec, alpha).ln_ref());
    let pi = Float::with_val(prec, Constant::Pi);
    let pd = Float::with_val(prec, &pi / chi.modulus());
    // (π/d)^{b+1/2}/(2π)
    let pre = (Float::with_val(prec, pd.ln_ref()) * (0.5 + b as f64)).exp() / (pi * 2u32);
    let f = |t: &Float| -> Result<Complex> {
        let half_t = Float::with_val(prec, t / 2u32);
        let quarter_t = Float::with_val(prec, t / 4u32);
        let g1 = gamma_prec(&Complex::with_val(prec, (0.5, &half_t)), prec)?;
        let g2 = gamma_prec(&Complex::with_val(prec, (0.25 + b as f64 / 2.0, &quarter_t)), prec)?;
        let q = Complex::with_val(prec, g1 / g2).norm().real().clone();
        let xp = completed_prec(&Complex::with_val(prec, (0.5, &half_t)), chi, prec)?.value;
        let xm = completed_prec(&Complex::with_val(prec, (0.5, -half_t.clone())), chi, prec)?.value;
        let cs = Complex::with_val(prec, &la * &half_t).cos();
        Ok(-(xp * xm * cs * q) * &pre)
    };
    let (value, panels) = integrate(&f, t_max, tol, prec)?;
    if !value.real().is_finite() || abs_f64(&value).is_nan() {
        return Err(Error::Convergence {
            what: "Xi integral".into(),
            last: "non-finite".into(),
            previous: String::new(),
        });
    }
    Ok(IntegralValue { value, t_max, tail_bound, panels })
}
