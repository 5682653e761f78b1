//! Dirichlet L-functions via Hurwitz combinations, completed ξ(s, χ),
//! Riemann Ξ, and generalized Bernoulli numbers.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float, Rational};

use crate::characters::{root_of_unity, DirichletCharacter};
use crate::error::{Error, Result};
use crate::precision::{log2_float, PrecisionContext};
use crate::specfun::bernoulli::bernoulli_polynomial;
use crate::specfun::digamma::digamma_prec;
use crate::specfun::gamma::gamma_prec;
use crate::specfun::zeta::{hurwitz_prec, zeta_prec};

fn require_nonprincipal(chi: &DirichletCharacter) -> Result<()> {
    if chi.is_principal() {
        return Err(Error::Unsupported(format!(
            "L-functions of the principal character ({}) are not supported",
            chi.label()
        )));
    }
    Ok(())
}

fn d_pow_neg(d: u64, s: &Complex, prec: u32) -> Complex {
    let ld = Float::with_val(prec, d).ln();
    (-Complex::with_val(prec, s * &ld)).exp()
}

/// Σ_{n ≥ n0+1} χ(n) n^{-s} for n0 a multiple of d, as a shifted Hurwitz
/// combination (s = 1 through digamma). No subtraction from L is involved.
pub(crate) fn l_tail_prec(s: &Complex, chi: &DirichletCharacter, n0: u64, prec: u32) -> Result<Complex> {
    let d = chi.modulus();
    debug_assert!(n0 % d == 0);
    let is_one = s.imag().is_zero() && *s.real() == 1;
    let mut acc = Complex::with_val(prec, 0);
    for a in 1..=d {
        if let Some(v) = chi.value_exponent(a as i64) {
            let shift = Float::with_val(prec, n0 + a) / d;
            let h = if is_one {
                digamma_prec(&Complex::with_val(prec, &shift), prec)?
            } else {
                hurwitz_prec(s, &shift, prec)?
            };
            acc += h * root_of_unity(v, chi.value_order(), prec);
        }
    }
    if is_one {
        Ok(-acc / d as u32)
    } else {
        Ok(acc * d_pow_neg(d, s, prec))
    }
}

pub(crate) fn l_function_prec(s: &Complex, chi: &DirichletCharacter, prec: u32) -> Result<Complex> {
    require_nonprincipal(chi)?;
    let d = chi.modulus();
    let dist = Complex::with_val(64, s - 1u32);
    let lg = log2_float(&Float::with_val(64, dist.abs_ref()));
    if lg == f64::NEG_INFINITY {
        let mut acc = Complex::with_val(prec, 0);
        for a in 1..=d {
            if let Some(v) = chi.value_exponent(a as i64) {
                let z = Complex::with_val(prec, Float::with_val(prec, a) / d);
                acc += digamma_prec(&z, prec)? * root_of_unity(v, chi.value_order(), prec);
            }
        }
        return Ok(-acc / d as u32);
    }
    // The Hurwitz poles cancel; recover the lost bits near s = 1.
    let extra = if lg < 0.0 { (-lg).ceil() as u32 + 8 } else { 0 };
    let wp = prec + extra;
    let sw = Complex::with_val(wp, s);
    let mut acc = Complex::with_val(wp, 0);
    for a in 1..=d {
        if let Some(v) = chi.value_exponent(a as i64) {
            let shift = Float::with_val(wp, a) / d;
            acc += hurwitz_prec(&sw, &shift, wp)? * root_of_unity(v, chi.value_order(), wp);
        }
    }
    let out = acc * d_pow_neg(d, &sw, wp);
    Ok(Complex::with_val(prec, out))
}

/// L(s, χ) for nonprincipal χ, entire in s.
pub fn l_function(s: &Complex, chi: &DirichletCharacter, ctx: &PrecisionContext) -> Result<Complex> {
    l_function_prec(&Complex::with_val(ctx.prec(), s), chi, ctx.prec())
}

/// ξ(s, χ) with its factors.
#[derive(Debug, Clone)]
pub struct CompletedLValue {
    pub s: Complex,
    pub chi: String,
    pub value: Complex,
    pub gamma_factor: Complex,
    pub l_value: Complex,
}

pub(crate) fn completed_prec(s: &Complex, chi: &DirichletCharacter, prec: u32) -> Result<CompletedLValue> {
    require_nonprincipal(chi)?;
    let b = chi.parity() as u32;
    let half = Complex::with_val(prec, s + b) / 2u32;
    if half.imag().is_zero() && half.real().is_integer() && *half.real() <= 0 {
        return Err(Error::Domain(format!(
            "xi(s, chi) hits a Gamma pole at s = {}",
            s.real().to_f64()
        )));
    }
    let pi_over_d = Float::with_val(prec, Constant::Pi) / chi.modulus();
    let lpd = pi_over_d.ln();
    let pw = (-Complex::with_val(prec, &half * &lpd)).exp();
    let g = gamma_prec(&half, prec)?;
    let gamma_factor = pw * g;
    let l_value = l_function_prec(s, chi, prec)?;
    let value = Complex::with_val(prec, &gamma_factor * &l_value);
    Ok(CompletedLValue {
        s: s.clone(),
        chi: chi.label(),
        value,
        gamma_factor,
        l_value,
    })
}

/// ξ(s, χ) = (π/d)^{−(s+b)/2} Γ((s+b)/2) L(s, χ).
pub fn xi_completed(s: &Complex, chi: &DirichletCharacter, ctx: &PrecisionContext) -> Result<CompletedLValue> {
    completed_prec(&Complex::with_val(ctx.prec(), s), chi, ctx.prec())
}

/// Ξ(t, χ) = ξ(1/2 + it, χ).
pub fn xi_critical(t: &Float, chi: &DirichletCharacter, ctx: &PrecisionContext) -> Result<Complex> {
    let s = Complex::with_val(ctx.prec(), (0.5, t));
    Ok(completed_prec(&s, chi, ctx.prec())?.value)
}

pub(crate) fn riemann_xi_s_prec(s: &Complex, prec: u32) -> Result<Complex> {
    // ξ(s) = (s/2)(s−1) π^{−s/2} Γ(s/2) ζ(s)
    let half = Complex::with_val(prec, s / 2u32);
    let lp = Float::with_val(prec, Constant::Pi).ln();
    let pw = (-Complex::with_val(prec, &half * &lp)).exp();
    let g = gamma_prec(&half, prec)?;
    let z = zeta_prec(s, prec)?;
    let sm1 = Complex::with_val(prec, s - 1u32);
    Ok(half * sm1 * pw * g * z)
}

/// Riemann Ξ(t) = ξ(1/2 + it).
pub fn riemann_xi(t: &Float, ctx: &PrecisionContext) -> Result<Complex> {
    let s = Complex::with_val(ctx.prec(), (0.5, t));
    riemann_xi_s_prec(&s, ctx.prec())
}

/// B_j(χ) as exact rational coefficients of ζ_L^e, e = 0..L.
pub type CyclotomicRational = Vec<Rational>;

type BernoulliCache = Mutex<HashMap<(u64, usize, usize), Arc<CyclotomicRational>>>;

fn gb_cache() -> &'static BernoulliCache {
    static CACHE: OnceLock<BernoulliCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Exact B_j(χ) = d^{j−1} Σ_a χ(a) B_j(a/d), grouped by root-of-unity exponent.
pub fn generalized_bernoulli_exact(j: usize, chi: &DirichletCharacter) -> Arc<CyclotomicRational> {
    let key = (chi.modulus(), chi.index(), j);
    if let Some(v) = gb_cache().lock().unwrap().get(&key) {
        return v.clone();
    }
    let d = chi.modulus();
    let l = chi.value_order() as usize;
    let mut coeffs = vec![Rational::new(); l];
    for a in 1..=d {
        if let Some(v) = chi.value_exponent(a as i64) {
            let x = Rational::from((a, d));
            coeffs[v as usize] += bernoulli_polynomial(j, &x);
        }
    }
    let scale = if j == 0 {
        Rational::from((1, d))
    } else {
        Rational::from(rug::Integer::from(d).pow(j as u32 - 1))
    };
    for c in coeffs.iter_mut() {
        *c *= &scale;
    }
    let out = Arc::new(coeffs);
    gb_cache().lock().unwrap().insert(key, out.clone());
    out
}

pub(crate) fn render_cyclotomic(c: &[Rational], prec: u32) -> Complex {
    let l = c.len() as u64;
    let mut acc = Complex::with_val(prec, 0);
    for (e, r) in c.iter().enumerate() {
        if !r.is_zero() {
            acc += root_of_unity(e as u64, l, prec) * Float::with_val(prec, r);
        }
    }
    acc
}

/// Generalized Bernoulli number B_j(χ).
pub fn generalized_bernoulli(j: usize, chi: &DirichletCharacter, ctx: &PrecisionContext) -> Complex {
    render_cyclotomic(&generalized_bernoulli_exact(j, chi), ctx.prec())
}
