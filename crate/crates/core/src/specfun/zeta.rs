//! Riemann and Hurwitz zeta by Euler–Maclaurin summation, with a
//! differentiated variant for ζ'.

use rug::{Complex, Float};

use super::bernoulli::bernoulli_even_floats;
use crate::error::{Error, Result};
use crate::precision::{abs_f64, log2_float, PrecisionContext};

fn near_one_warning(s: &Complex, prec: u32) {
    let d = Complex::with_val(64, s - 1u32);
    let m = Float::with_val(64, d.abs_ref());
    if log2_float(&m) < -(prec as f64) / 2.0 {
        log::warn!("zeta evaluated within 2^-{} of its pole at s = 1", prec / 2);
    }
}

/// log2|z| to within half a bit, from the exponents alone.
fn mag(z: &Complex) -> f64 {
    let e = |f: &Float| f.get_exp().map(|e| e as f64).unwrap_or(f64::NEG_INFINITY);
    e(z.real()).max(e(z.imag()))
}

fn abs_le(z: &Complex, log2_bound: f64) -> bool {
    mag(z) <= log2_bound
}

/// ζ(s, a) and optionally ∂ζ/∂s, by Euler–Maclaurin at `prec` bits.
pub(crate) fn hurwitz_em(s: &Complex, a: &Float, deriv: bool, prec: u32) -> Result<(Complex, Option<Complex>)> {
    if *a <= 0 {
        return Err(Error::Domain("Hurwitz zeta needs a > 0".into()));
    }
    if s.imag().is_zero() && *s.real() == 1 {
        return Err(Error::Pole {
            function: "zeta",
            at: "1".into(),
        });
    }
    near_one_warning(s, prec);
    let af = a.to_f64();
    let s_abs = abs_f64(s);
    let sigma = s.real().to_f64();
    let mut x_target = 0.2 * prec as f64 + s.imag().to_f64().abs() / 2.0;
    x_target = x_target.max(s_abs / std::f64::consts::PI + 0.1 * prec as f64);
    let mut n_direct = if x_target > af { (x_target - af).ceil() as u64 } else { 0 };
    loop {
        match em_once(s, a, n_direct, deriv, prec, sigma)? {
            Some(v) => return Ok(v),
            None => n_direct = (2 * n_direct).max(16),
        }
    }
}

fn em_once(
    s: &Complex,
    a: &Float,
    n_direct: u64,
    deriv: bool,
    prec: u32,
    sigma: f64,
) -> Result<Option<(Complex, Option<Complex>)>> {
    let mut sum = Complex::with_val(prec, 0);
    let mut dsum = Complex::with_val(prec, 0);
    let eps_log2 = -(prec as f64) - 4.0;
    // Tolerances are relative to the size of the leading term, so tiny values
    // (large a or large Re s) keep full relative accuracy.
    let mut scale = f64::NEG_INFINITY;
    // For a = 1, n^{-s} is completely multiplicative: exponentials are only
    // needed at primes.
    let multiplicative = *a == 1;
    let mut powers: Vec<(Complex, Float)> = Vec::new();
    for n in 0..n_direct {
        let (t, l) = if multiplicative {
            let m = n + 1;
            let p = smallest_prime_factor(m);
            let v = if m == 1 {
                (Complex::with_val(prec, 1), Float::new(prec))
            } else if p == m {
                let l = Float::with_val(prec, m).ln();
                ((-Complex::with_val(prec, s * &l)).exp(), l)
            } else {
                let (tp, lp) = &powers[(p - 1) as usize];
                let (tq, lq) = &powers[(m / p - 1) as usize];
                (Complex::with_val(prec, tp * tq), Float::with_val(prec, lp + lq))
            };
            powers.push(v.clone());
            v
        } else {
            let l = Float::with_val(prec, a + n).ln();
            ((-Complex::with_val(prec, s * &l)).exp(), l)
        };
        if deriv {
            dsum -= Complex::with_val(prec, &t * &l);
        }
        sum += &t;
        if n == 0 {
            scale = mag(&t);
        }
        // For Re s well above 1 the remaining terms may already be negligible.
        if sigma > 1.5 && n > 0 {
            let tm = mag(&t);
            let tail_factor = ((n as f64 + a.to_f64()) / (sigma - 1.0) + 1.0).log2();
            let lead = mag(&sum).max(scale);
            let l2 = if deriv { l.to_f64().max(1.0).log2() } else { 0.0 };
            if tm + tail_factor + l2 + 1.0 < eps_log2 + lead {
                return Ok(Some((sum, if deriv { Some(dsum) } else { None })));
            }
        }
    }
    let x = Float::with_val(prec, a + n_direct);
    let lx = Float::with_val(prec, x.ln_ref());
    let xf = x.to_f64();
    // X^{-s}
    let xs = (-Complex::with_val(prec, s * &lx)).exp();
    let s_minus_1 = Complex::with_val(prec, s - 1u32);
    // X^{1-s}/(s-1)
    let head = Complex::with_val(prec, &xs * &x) / &s_minus_1;
    sum += &head;
    scale = scale.max(mag(&head));
    let half = Complex::with_val(prec, &xs / 2u32);
    sum += &half;
    if deriv {
        dsum -= Complex::with_val(prec, &head * &lx);
        dsum -= Complex::with_val(prec, &head / &s_minus_1);
        dsum -= Complex::with_val(prec, &half * &lx);
    }
    let table = bernoulli_even_floats(prec as usize / 2 + 40, prec);
    let xinv = Float::with_val(prec, x.recip_ref());
    let xinv2 = Float::with_val(prec, &xinv * &xinv);
    // pw = X^{-s-2k+1}, poch = (s)_{2k-1}, dpoch = d/ds poch
    let mut pw = Complex::with_val(prec, &xs * &xinv);
    let mut poch = s.clone();
    let mut dpoch = Complex::with_val(prec, 1);
    let mut fact = Float::with_val(prec, 2); // (2k)!
    let cap = ((2.0 * std::f64::consts::PI * xf) as usize / 2).min(table.len() - 1);
    for k in 1..=cap {
        let coef = Float::with_val(prec, &table[k] / &fact);
        let base = Complex::with_val(prec, &poch * &pw);
        let term = Complex::with_val(prec, &base * &coef);
        sum += &term;
        let mut small = abs_le(&term, eps_log2 + mag(&sum).max(scale));
        if deriv {
            let mut dt = Complex::with_val(prec, &dpoch * &pw);
            dt -= Complex::with_val(prec, &base * &lx);
            dt *= &coef;
            dsum += &dt;
            small = small && abs_le(&dt, eps_log2 + mag(&dsum).max(scale));
        }
        if small {
            return Ok(Some((sum, if deriv { Some(dsum) } else { None })));
        }
        // advance: poch *= (s+2k-1)(s+2k)
        let f1 = Complex::with_val(prec, s + (2 * k - 1) as u32);
        let f2 = Complex::with_val(prec, s + (2 * k) as u32);
        let prod = Complex::with_val(prec, &f1 * &f2);
        if deriv {
            let dprod = Complex::with_val(prec, &f1 + &f2);
            dpoch = Complex::with_val(prec, &dpoch * &prod) + Complex::with_val(prec, &poch * &dprod);
        }
        poch *= prod;
        pw *= &xinv2;
        fact *= ((2 * k + 1) * (2 * k + 2)) as u32;
    }
    Ok(None)
}

fn smallest_prime_factor(m: u64) -> u64 {
    if m % 2 == 0 {
        return 2;
    }
    let mut p = 3;
    while p * p <= m {
        if m % p == 0 {
            return p;
        }
        p += 2;
    }
    m
}

pub(crate) fn hurwitz_prec(s: &Complex, a: &Float, prec: u32) -> Result<Complex> {
    Ok(hurwitz_em(s, a, false, prec)?.0)
}

pub(crate) fn zeta_prec(s: &Complex, prec: u32) -> Result<Complex> {
    hurwitz_prec(s, &Float::with_val(prec, 1), prec)
}

pub(crate) fn zeta_deriv_prec(s: &Complex, prec: u32) -> Result<Complex> {
    let (_, d) = hurwitz_em(s, &Float::with_val(prec, 1), true, prec)?;
    Ok(d.expect("derivative requested"))
}

/// Riemann ζ(s), s ≠ 1.
pub fn riemann_zeta(s: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    zeta_prec(&Complex::with_val(ctx.prec(), s), ctx.prec())
}

/// ζ'(s), s ≠ 1, by term-wise differentiated Euler–Maclaurin.
pub fn zeta_derivative(s: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    zeta_deriv_prec(&Complex::with_val(ctx.prec(), s), ctx.prec())
}

/// Hurwitz ζ(s, a) = Σ_{n≥0} (n+a)^{-s}, a > 0, s ≠ 1.
pub fn hurwitz_zeta(s: &Complex, a: &Float, ctx: &PrecisionContext) -> Result<Complex> {
    let a = Float::with_val(ctx.prec(), a);
    hurwitz_prec(&Complex::with_val(ctx.prec(), s), &a, ctx.prec())
}

/// ζ(s, a) together with ∂ζ(s, a)/∂s.
pub fn hurwitz_zeta_with_derivative(s: &Complex, a: &Float, ctx: &PrecisionContext) -> Result<(Complex, Complex)> {
    let a = Float::with_val(ctx.prec(), a);
    let (v, d) = hurwitz_em(&Complex::with_val(ctx.prec(), s), &a, true, ctx.prec())?;
    Ok((v, d.expect("derivative requested")))
}

/// First Stieltjes constant γ₁, via Euler–Maclaurin applied to log n / n.
pub(crate) fn gamma1_prec(prec: u32) -> Float {
    let n = (0.4 * prec as f64).ceil() as u32 + 10;
    let mut acc = Float::with_val(prec, 0);
    for j in 2..n {
        let jf = Float::with_val(prec, j);
        acc += Float::with_val(prec, jf.ln_ref()) / j;
    }
    let nf = Float::with_val(prec, n);
    let ln_n = Float::with_val(prec, nf.ln_ref());
    acc += Float::with_val(prec, &ln_n / (2 * n));
    acc -= Float::with_val(prec, &ln_n * &ln_n) / 2u32;
    // + Σ_k B_{2k}/(2k) (log N − H_{2k−1}) / N^{2k}
    let table = bernoulli_even_floats(prec as usize / 2 + 40, prec);
    let ninv2 = Float::with_val(prec, &nf * &nf).recip();
    let mut pw = ninv2.clone();
    let mut harmonic = Float::with_val(prec, 1); // H_1
    for (k, b) in table.iter().enumerate().skip(1) {
        let mut t = Float::with_val(prec, &ln_n - &harmonic);
        t *= b;
        t /= (2 * k) as u32;
        t *= &pw;
        acc += &t;
        if log2_float(&t) < -(prec as f64) - 4.0 {
            break;
        }
        harmonic += Float::with_val(prec, 2 * k as u32).recip();
        harmonic += Float::with_val(prec, 2 * k as u32 + 1).recip();
        pw *= &ninv2;
    }
    acc
}

/// γ₁, computed once per context.
pub fn stieltjes_gamma1(ctx: &PrecisionContext) -> Float {
    ctx.gamma1_cell().get_or_init(|| gamma1_prec(ctx.prec())).clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn err(a: &Complex, b: &Complex) -> f64 {
        Float::with_val(64, Complex::with_val(a.prec().0, a - b).abs_ref()).to_f64()
    }

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    #[test]
    fn basel_and_zero() {
        let c = ctx();
        let z2 = riemann_zeta(&c.complex(2), &c).unwrap();
        let pi = c.pi();
        assert!(err(&z2, &c.complex(Float::with_val(c.prec(), &pi * &pi) / 6u32)) < 1e-70);
        let z0 = riemann_zeta(&c.complex(0), &c).unwrap();
        assert!(err(&z0, &c.complex(-0.5)) < 1e-70);
        assert!(riemann_zeta(&c.complex(1), &c).is_err());
    }

    #[test]
    fn first_zero() {
        let c = ctx();
        let z = riemann_zeta(&c.complex((0.5, 14.134725141734693)), &c).unwrap();
        assert!(Float::with_val(64, z.abs_ref()).to_f64() < 1e-9);
    }

    #[test]
    fn matches_mpfr_real_zeta() {
        let c = ctx();
        for s in [-7.5, -2.0, -0.3, 0.5, 1.001, 2.5, 11.0, 60.0] {
            let v = riemann_zeta(&c.complex(s), &c).unwrap();
            let o = Float::with_val(c.prec(), s).zeta();
            let scale = o.to_f64().abs().max(1.0);
            assert!(err(&v, &c.complex(o)) / scale < 1e-68, "s = {s}");
        }
    }

    /// Central finite difference of riemann_zeta with step 2^(-bits/3).
    fn fd(s: &Complex, c: &PrecisionContext) -> Complex {
        let h = Float::with_val(c.prec(), Float::i_exp(1, -(c.bits() as i32) / 3));
        let sp = Complex::with_val(c.prec(), s + &h);
        let sm = Complex::with_val(c.prec(), s - &h);
        let d = riemann_zeta(&sp, c).unwrap() - riemann_zeta(&sm, c).unwrap();
        d / (h * 2u32)
    }

    #[test]
    fn derivative_against_finite_differences() {
        let c = ctx();
        let d0 = zeta_derivative(&c.complex(0), &c).unwrap();
        let two_pi = c.pi() * 2u32;
        let want = Float::with_val(c.prec(), two_pi.ln()) / -2i32;
        assert!(err(&d0, &c.complex(want)) < 1e-70);
        for s in [c.complex(2), c.complex(-1), c.complex((0.5, 7.0)), c.complex((3.0, -2.0))] {
            let d = zeta_derivative(&s, &c).unwrap();
            assert!(err(&d, &fd(&s, &c)) < 1e-45);
        }
        let d2 = zeta_derivative(&c.complex(2), &c).unwrap();
        assert!((d2.real().to_f64() + 0.9375482543158437).abs() < 1e-15);
    }

    #[test]
    fn hurwitz_values() {
        let c = ctx();
        let a3 = hurwitz_zeta(&c.complex(3), &c.real(1), &c).unwrap();
        let z3 = riemann_zeta(&c.complex(3), &c).unwrap();
        assert!(err(&a3, &z3) < 1e-70);
        let h = hurwitz_zeta(&c.complex(2), &c.real(0.5), &c).unwrap();
        let pi = c.pi();
        assert!(err(&h, &c.complex(Float::with_val(c.prec(), &pi * &pi) / 2u32)) < 1e-70);
        // ζ(−1, a) = −B_2(a)/2
        let a = Float::with_val(c.prec(), rug::Rational::from((1, 3)));
        let v = hurwitz_zeta(&c.complex(-1), &a, &c).unwrap();
        let b2 = Float::with_val(c.prec(), &a * &a) - &a + Float::with_val(c.prec(), rug::Rational::from((1, 6)));
        assert!(err(&v, &c.complex(-b2 / 2u32)) < 1e-70);
        assert!(hurwitz_zeta(&c.complex(2), &c.real(0), &c).is_err());
    }

    #[test]
    fn hurwitz_direct_summation_oracle() {
        // ζ(3, 0.3) by summing 10^4 terms plus the integral/EM tail estimate.
        let c = ctx();
        let prec = 160;
        let a = 0.3f64;
        let mut s = Float::with_val(prec, 0);
        let n = 10_000u32;
        for k in 0..n {
            let b = Float::with_val(prec, a) + k;
            s += (Float::with_val(prec, &b * &b) * &b).recip();
        }
        let x = Float::with_val(prec, a) + n;
        let x2 = Float::with_val(prec, &x * &x);
        s += Float::with_val(prec, &x2 * 2u32).recip();
        s += (Float::with_val(prec, &x2 * &x) * 2u32).recip();
        let v = hurwitz_zeta(&c.complex(3), &c.real(a), &c).unwrap();
        assert!((Float::with_val(prec, v.real()) - s).abs().to_f64() < 1e-16);
    }

    #[test]
    fn hurwitz_derivative_is_consistent() {
        let c = ctx();
        let s = c.complex((1.7, 3.0));
        let a = c.real(2.25);
        let (_, d) = hurwitz_zeta_with_derivative(&s, &a, &c).unwrap();
        let h = Float::with_val(c.prec(), Float::i_exp(1, -80));
        let sp = Complex::with_val(c.prec(), &s + &h);
        let sm = Complex::with_val(c.prec(), &s - &h);
        let fd = (hurwitz_zeta(&sp, &a, &c).unwrap() - hurwitz_zeta(&sm, &a, &c).unwrap()) / (h * 2u32);
        assert!(err(&d, &fd) < 1e-40);
    }

    #[test]
    fn gamma1_value_and_laurent() {
        let c = ctx();
        let g1 = stieltjes_gamma1(&c);
        assert!((g1.to_f64() + 0.0728158454836767).abs() < 1e-15);
        // ζ(1+h) − 1/h − γ + γ₁ h = O(h²)
        let hf = Float::with_val(c.prec(), 1e-5);
        let z = riemann_zeta(&c.complex(Float::with_val(c.prec(), 1 + &hf)), &c).unwrap();
        let mut r = Float::with_val(c.prec(), z.real()) - Float::with_val(c.prec(), hf.recip_ref()) - c.euler();
        r += Float::with_val(c.prec(), &g1 * &hf);
        assert!(r.abs().to_f64() < 1e-9);
    }

    #[test]
    fn gamma1_against_central_differences() {
        // ζ(1+h) − 1/h = γ − γ₁ h + O(h²); the odd part gives −γ₁ h + O(h³).
        let c = ctx();
        let h = Float::with_val(c.prec(), Float::i_exp(1, -60));
        let sp = c.complex(Float::with_val(c.prec(), 1 + &h));
        let sm = c.complex(Float::with_val(c.prec(), 1 - &h));
        let zp = Float::with_val(c.prec(), riemann_zeta(&sp, &c).unwrap().real());
        let zm = Float::with_val(c.prec(), riemann_zeta(&sm, &c).unwrap().real());
        let hinv = Float::with_val(c.prec(), h.recip_ref());
        let odd = ((zp - &hinv) - (zm + &hinv)) / (h * 2u32);
        let g1 = stieltjes_gamma1(&c);
        assert!((odd + g1).abs().to_f64() < 1e-30);
    }

    #[test]
    fn pole_structure() {
        let c = ctx();
        for e in [3, 6, 10] {
            for sign in [1.0f64, -1.0] {
                let d = sign * 10f64.powi(-e);
                let s = c.complex(Float::with_val(c.prec(), 1 + Float::with_val(c.prec(), d)));
                let z = riemann_zeta(&s, &c).unwrap();
                let r = Float::with_val(c.prec(), z.real()) * Float::with_val(c.prec(), d);
                assert!((r - 1u32).abs().to_f64() < 2.0 * d.abs());
            }
        }
    }

    #[test]
    fn tiny_values_keep_relative_accuracy() {
        // ζ(s, a) for large a and s is far below 1; the sum is its own oracle.
        let c = PrecisionContext::default();
        let p = c.prec();
        for (s, a) in [(61u32, 37u32), (101, 61), (45, 20)] {
            let h = hurwitz_zeta(&c.complex(s), &Float::with_val(p, a), &c).unwrap();
            let mut acc = Float::with_val(p, 0);
            for n in 0..10_000u32 {
                acc += Float::with_val(p, Float::u_pow_u(a + n, s)).recip();
            }
            let rel = (Float::with_val(p, h.real() - &acc) / &acc).abs().to_f64();
            assert!(rel < 1e-80, "s={s} a={a}: {rel:e}");
        }
    }
}
