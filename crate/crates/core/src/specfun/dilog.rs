//! Dilogarithm Li₂(z), principal branch with the cut on (1, ∞).

use rug::float::Constant;
use rug::{Complex, Float};

use super::bernoulli::bernoulli_number;
use crate::error::{Error, Result};
use crate::precision::{log2_float, PrecisionContext};

/// Σ_{n≥0} B_n u^{n+1}/(n+1)! with u = −log(1−z); converges for |u| < 2π.
fn bernoulli_series(z: &Complex, prec: u32) -> Result<Complex> {
    let one_minus = Complex::with_val(prec, 1 - z);
    let u = -Complex::with_val(prec, one_minus.ln_ref());
    let mut pw = u.clone(); // u^{n+1}
    let mut fact = Float::with_val(prec, 1); // (n+1)!
    let mut acc = u.clone();
    // n = 1 term: B_1 u^2 / 2
    pw *= &u;
    fact *= 2u32;
    acc -= Complex::with_val(prec, &pw / &fact) / 2u32;
    let mut n = 2usize;
    loop {
        pw *= &u;
        fact *= (n + 1) as u32;
        let b = Float::with_val(prec, bernoulli_number(n));
        let term = Complex::with_val(prec, &pw * &b) / &fact;
        acc += &term;
        if n > 8 && log2_float(&Float::with_val(64, term.abs_ref())) < -(prec as f64) - 4.0 {
            return Ok(acc);
        }
        if n > 20 * prec as usize {
            return Err(Error::Convergence {
                what: "dilogarithm series".into(),
                last: format!("{:e}", acc.real().to_f64()),
                previous: String::new(),
            });
        }
        // odd Bernoulli numbers vanish: skip straight to the next even index
        pw *= &u;
        fact *= (n + 2) as u32;
        n += 2;
    }
}

pub(crate) fn dilog_prec(z: &Complex, prec: u32) -> Result<Complex> {
    let re = z.real().to_f64();
    if z.imag().is_zero() && *z.real() > 1 {
        return Err(Error::Domain(format!("Li2 is evaluated on its branch cut at z = {re}")));
    }
    let pi = Float::with_val(prec, Constant::Pi);
    let pi2_6 = Float::with_val(prec, &pi * &pi) / 6u32;
    if z.imag().is_zero() && *z.real() == 1 {
        return Ok(Complex::with_val(prec, pi2_6));
    }
    if z.is_zero() {
        return Ok(Complex::with_val(prec, 0));
    }
    let abs2 = Float::with_val(prec, z.norm_ref());
    if abs2 > 1 {
        // Li₂(z) = −π²/6 − ½ log²(−z) − Li₂(1/z)
        let inv = Complex::with_val(prec, z.recip_ref());
        let l = Complex::with_val(prec, (-z.clone()).ln());
        let mut out = -dilog_prec(&inv, prec)?;
        out -= Complex::with_val(prec, &l * &l) / 2u32;
        out -= &pi2_6;
        return Ok(out);
    }
    if re > 0.5 {
        // Li₂(z) = π²/6 − log z log(1−z) − Li₂(1−z)
        let w = Complex::with_val(prec, 1 - z);
        let lz = Complex::with_val(prec, z.ln_ref());
        let lw = Complex::with_val(prec, w.ln_ref());
        let mut out = -dilog_prec(&w, prec)?;
        out -= lz * lw;
        out += &pi2_6;
        return Ok(out);
    }
    bernoulli_series(z, prec)
}

/// Li₂(z) = Σ z^n/n².
pub fn dilog(z: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    dilog_prec(&Complex::with_val(ctx.prec(), z), ctx.prec())
}
