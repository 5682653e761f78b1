//! Log-gamma and gamma by shifted Stirling series.

use rug::float::Constant;
use rug::{Complex, Float};

use super::bernoulli::bernoulli_even_floats;
use super::digamma::{is_nonpositive_integer, shift_radius};
use crate::error::{Error, Result};
use crate::precision::{log2_float, PrecisionContext};

/// Stirling series for log Γ(w), Re w large.
fn stirling(w: &Complex, prec: u32) -> Result<Complex> {
    let mut out = Complex::with_val(prec, w - 0.5f64) * Complex::with_val(prec, w.ln_ref());
    out -= w;
    let two_pi = Float::with_val(prec, Constant::Pi) * 2u32;
    out += Float::with_val(prec, two_pi.ln()) / 2u32;
    let table = bernoulli_even_floats(prec as usize / 2 + 40, prec);
    let winv = Complex::with_val(prec, w.recip_ref());
    let winv2 = Complex::with_val(prec, &winv * &winv);
    let mut pw = winv;
    for (m, b) in table.iter().enumerate().skip(1) {
        let den = (2 * m * (2 * m - 1)) as u32;
        let term = Complex::with_val(prec, &pw * b) / den;
        out += &term;
        if log2_float(&Float::with_val(64, term.abs_ref())) < -(prec as f64) - 2.0 {
            return Ok(out);
        }
        pw *= &winv2;
    }
    Err(Error::Convergence {
        what: "Stirling series".into(),
        last: format!("{:e}", out.real().to_f64()),
        previous: "term cap reached".into(),
    })
}

fn shift_count(z: &Complex, prec: u32) -> u64 {
    let r = shift_radius(prec);
    let re = z.real().to_f64();
    let im = z.imag().to_f64();
    if im.abs() >= r {
        if re >= 1.0 {
            0
        } else {
            (1.0 - re).ceil() as u64
        }
    } else {
        let need = (r * r - im * im).sqrt() - re;
        if need > 0.0 {
            need.ceil() as u64
        } else {
            0
        }
    }
}

fn pole_check(z: &Complex) -> Result<()> {
    if is_nonpositive_integer(z) {
        return Err(Error::Pole {
            function: "gamma",
            at: format!("{}", z.real().to_f64()),
        });
    }
    Ok(())
}

pub(crate) fn log_gamma_prec(z: &Complex, prec: u32) -> Result<Complex> {
    pole_check(z)?;
    let n = shift_count(z, prec);
    let w = Complex::with_val(prec, z + n);
    let mut out = stirling(&w, prec)?;
    if n > 0 {
        let mut p = Complex::with_val(prec, 1);
        let mut arg_sum = 0.0f64;
        for j in 0..n {
            let t = Complex::with_val(prec, z + j);
            arg_sum += t.imag().to_f64().atan2(t.real().to_f64());
            p *= t;
        }
        let lp = Complex::with_val(prec, p.ln_ref());
        let winding = ((arg_sum - lp.imag().to_f64()) / (2.0 * std::f64::consts::PI)).round();
        out -= lp;
        if winding != 0.0 {
            let two_pi = Float::with_val(prec, Constant::Pi) * 2u32 * winding;
            out -= Complex::with_val(prec, (0, two_pi));
        }
    }
    Ok(out)
}

pub(crate) fn gamma_prec(z: &Complex, prec: u32) -> Result<Complex> {
    pole_check(z)?;
    let n = shift_count(z, prec);
    let w = Complex::with_val(prec, z + n);
    let mut out = stirling(&w, prec)?.exp();
    if n > 0 {
        let mut p = Complex::with_val(prec, 1);
        for j in 0..n {
            p *= Complex::with_val(prec, z + j);
        }
        out /= p;
    }
    Ok(out)
}

/// Principal-branch log Γ(z) (continuous off the negative real axis).
pub fn log_gamma(z: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    log_gamma_prec(&Complex::with_val(ctx.prec(), z), ctx.prec())
}

/// Γ(z).
pub fn gamma(z: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    gamma_prec(&Complex::with_val(ctx.prec(), z), ctx.prec())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn err(a: &Complex, b: &Complex) -> f64 {
        Float::with_val(64, Complex::with_val(a.prec().0, a - b).abs_ref()).to_f64()
    }

    #[test]
    fn classical_values() {
        let c = PrecisionContext::default();
        let h = gamma(&c.complex(0.5), &c).unwrap();
        assert!(err(&h, &c.complex(c.pi().sqrt())) < 1e-70);
        let five = gamma(&c.complex(5), &c).unwrap();
        assert!(err(&five, &c.complex(24)) < 1e-65);
        assert!(gamma(&c.complex(-2), &c).is_err());
    }

    #[test]
    fn modulus_on_half_line() {
        // |Γ(1/2 + it)|² = π / cosh(πt)
        let c = PrecisionContext::default();
        let g = gamma(&c.complex((0.5, 1.0)), &c).unwrap();
        let m2 = Float::with_val(c.prec(), g.norm_ref());
        let want = c.pi() / c.pi().cosh();
        assert!((m2 - want).abs().to_f64() < 1e-70);
    }

    #[test]
    fn matches_mpfr_on_real_axis() {
        let c = PrecisionContext::default();
        for x in [0.1, 1.7, 9.25, 33.0, -0.5, -4.25] {
            let v = gamma(&c.complex(x), &c).unwrap();
            let o = Float::with_val(c.prec(), x).gamma();
            let rel = err(&v, &c.complex(&o)) / o.to_f64().abs();
            assert!(rel < 1e-68, "x = {x}");
        }
        for x in [0.1, 1.7, 9.25, 33.0] {
            let v = log_gamma(&c.complex(x), &c).unwrap();
            let o = Float::with_val(c.prec(), x).ln_gamma();
            assert!(err(&v, &c.complex(o)) < 1e-68, "x = {x}");
        }
    }

    #[test]
    fn log_gamma_is_continuous_branch() {
        let c = PrecisionContext::default();
        // log Γ(z+1) = log Γ(z) + log z holds exactly on the principal branch
        // away from the negative axis.
        for z in [c.complex((0.3, 5.0)), c.complex((-2.5, 0.75)), c.complex((-6.2, -3.0))] {
            let a = log_gamma(&Complex::with_val(c.prec(), &z + 1u32), &c).unwrap();
            let b = log_gamma(&z, &c).unwrap() + Complex::with_val(c.prec(), z.ln_ref());
            assert!(err(&a, &b) < 1e-65);
        }
    }
}
