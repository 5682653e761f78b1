//! Complex digamma by upward recurrence plus the Bernoulli asymptotic series.

use rug::float::Constant;
use rug::{Complex, Float};

use super::bernoulli::bernoulli_even_floats;
use crate::error::{Error, Result};
use crate::precision::{abs_f64, arg_f64, log2_float, PrecisionContext};

/// |z| beyond which the asymptotic series is summed directly.
pub(crate) fn shift_radius(prec: u32) -> f64 {
    (prec as f64 / 6.0).max(20.0)
}

pub(crate) fn is_nonpositive_integer(z: &Complex) -> bool {
    z.imag().is_zero() && z.real().is_integer() && *z.real() <= 0
}

fn warn_near_pole(z: &Complex, prec: u32) {
    let re = z.real().to_f64();
    let im = z.imag().to_f64();
    if re <= 0.5 {
        let d = ((re - re.round()).powi(2) + im * im).sqrt();
        if d > 0.0 && d.log2() < -(prec as f64) / 2.0 {
            log::warn!("digamma argument {re}{im:+}i is within 2^-{} of a pole", prec / 2);
        }
    }
}

/// Σ_{j<n} 1/(z+j) as a single quotient P/Q to avoid n divisions.
pub(crate) fn reciprocal_shift_sum(z: &Complex, n: u64) -> Complex {
    let prec = z.prec().0;
    let mut p = Complex::with_val(prec, 0);
    let mut q = Complex::with_val(prec, 1);
    for j in 0..n {
        let w = Complex::with_val(prec, z + j);
        // p/q + 1/w = (p w + q) / (q w)
        p *= &w;
        p += &q;
        q *= &w;
    }
    p / q
}

/// −Σ_{m≥1} B_{2m}/(2m w^{2m}) summed until terms drop below 2^-prec.
/// Returns the sum and the number of terms used.
pub(crate) fn asymptotic_tail_adaptive(w: &Complex, prec: u32) -> Result<(Complex, usize)> {
    let winv2 = Complex::with_val(prec, w * w).recip();
    let table = bernoulli_even_floats(prec as usize / 2 + 40, prec);
    let mut pw = winv2.clone();
    let mut acc = Complex::with_val(prec, 0);
    let thresh = -(prec as f64) - 2.0;
    for (m, b) in table.iter().enumerate().skip(1) {
        let c = Float::with_val(prec, b / (2 * m) as u32);
        let term = Complex::with_val(prec, &pw * &c);
        acc -= &term;
        if log2_float(&Float::with_val(64, term.abs_ref())) < thresh {
            return Ok((acc, m));
        }
        pw *= &winv2;
    }
    Err(Error::Convergence {
        what: "digamma asymptotic series".into(),
        last: format!("{:e}", acc.real().to_f64()),
        previous: "term cap reached".into(),
    })
}

/// ψ(z) − log z, evaluated without forming log z when |z| is large.
pub(crate) fn psi_minus_log(z: &Complex, prec: u32) -> Result<Complex> {
    let r = shift_radius(prec);
    if z.real().to_f64() > 0.0 && abs_f64(z) >= r {
        let (t, _) = asymptotic_tail_adaptive(z, prec)?;
        let half = Complex::with_val(prec, z * 2u32).recip();
        return Ok(t - half);
    }
    let psi = digamma_prec(z, prec)?;
    Ok(psi - Complex::with_val(prec, z.ln_ref()))
}

/// ψ(z) at `prec` bits.
pub(crate) fn digamma_prec(z: &Complex, prec: u32) -> Result<Complex> {
    if is_nonpositive_integer(z) {
        return Err(Error::Pole {
            function: "digamma",
            at: format!("{}", z.real().to_f64()),
        });
    }
    warn_near_pole(z, prec);
    let re = z.real().to_f64();
    let im = z.imag().to_f64();
    if re < 0.0 && im.abs() <= -re {
        // ψ(z) = ψ(1−z) − π cot(πz)
        let w = Complex::with_val(prec, 1 - z);
        let base = digamma_prec(&w, prec)?;
        let pi = Float::with_val(prec, Constant::Pi);
        let pz = Complex::with_val(prec, z * &pi);
        let cot = Complex::with_val(prec, pz.tan_ref()).recip();
        return Ok(base - cot * pi);
    }
    let r = shift_radius(prec);
    let n = if im.abs() >= r {
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
    };
    let w = Complex::with_val(prec, z + n);
    let (tail, _) = asymptotic_tail_adaptive(&w, prec)?;
    let mut out = Complex::with_val(prec, w.ln_ref());
    out -= Complex::with_val(prec, &w * 2u32).recip();
    out += tail;
    if n > 0 {
        out -= reciprocal_shift_sum(z, n);
    }
    Ok(out)
}

/// Digamma function ψ(z) = Γ'(z)/Γ(z).
pub fn digamma(z: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    let zz = Complex::with_val(ctx.prec(), z);
    digamma_prec(&zz, ctx.prec())
}

/// Truncated digamma asymptotic series with its remainder bound.
#[derive(Debug, Clone)]
pub struct AsymptoticTail {
    pub order: usize,
    /// −B_{2m}/(2m) for m = 1..=order.
    pub coefficients: Vec<Float>,
    pub validity_radius: f64,
}

impl AsymptoticTail {
    pub fn new(order: usize, ctx: &PrecisionContext) -> Self {
        let prec = ctx.prec();
        let coefficients = (1..=order)
            .map(|m| {
                let exact = super::bernoulli::bernoulli_number(2 * m) / (2 * m) as u64;
                Float::with_val(prec, -exact)
            })
            .collect();
        AsymptoticTail {
            order,
            coefficients,
            validity_radius: 1.0,
        }
    }

    /// T_M(z) and the bound |B_{2M+2}|/((2M+2)|z|^{2M+2})·sec^{2M+2}(arg z/2).
    pub fn evaluate(&self, z: &Complex, ctx: &PrecisionContext) -> Result<(Complex, Float)> {
        let prec = ctx.prec();
        let theta = arg_f64(z);
        if abs_f64(z) < self.validity_radius || theta.abs() > 0.75 * std::f64::consts::PI + 1e-15 {
            return Err(Error::Domain(format!(
                "asymptotic digamma tail needs |z| >= {} and |arg z| <= 3pi/4",
                self.validity_radius
            )));
        }
        let winv2 = Complex::with_val(prec, z * z).recip();
        let mut pw = winv2.clone();
        let mut acc = Complex::with_val(prec, 0);
        for c in &self.coefficients {
            acc += Complex::with_val(prec, &pw * c);
            pw *= &winv2;
        }
        let m2 = 2 * self.order + 2;
        let b = Float::with_val(prec, super::bernoulli::bernoulli_number(m2)).abs();
        let absz = Float::with_val(prec, z.abs_ref());
        let sec = Float::with_val(prec, theta / 2.0).cos().recip();
        let ratio = sec / absz;
        let bound = b / m2 as u32 * rug::ops::Pow::pow(ratio, m2 as u32);
        Ok((acc, bound))
    }
}

/// T_M(z) = −Σ_{m=1}^{M} B_{2m}/(2m z^{2m}) with a rigorous truncation bound.
pub fn psi_remainder(z: &Complex, m: usize, ctx: &PrecisionContext) -> Result<(Complex, Float)> {
    AsymptoticTail::new(m, ctx).evaluate(z, ctx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    fn err(a: &Complex, b: &Complex) -> f64 {
        Float::with_val(64, Complex::with_val(a.prec().0, a - b).abs_ref()).to_f64()
    }

    #[test]
    fn special_values() {
        let c = ctx();
        let g = c.euler();
        let one = digamma(&c.complex(1), &c).unwrap();
        assert!(err(&one, &c.complex(-g.clone())) < 1e-70);
        let two = digamma(&c.complex(2), &c).unwrap();
        assert!(err(&two, &c.complex(Float::with_val(c.prec(), 1 - &g))) < 1e-70);
    }

    #[test]
    fn half_against_series_oracle() {
        // ψ(1/2) = −γ + Σ_{n≥0} (1/(n+1) − 1/(n+1/2)); the series is summed
        // as −Σ 1/(2(n+1)(n+1/2)) with an integral tail bound (terms ~ 1/(2n²)).
        let prec = 128;
        let n_terms = 200_000u32;
        let mut s = Float::with_val(prec, 0);
        for n in 0..n_terms {
            let a = Float::with_val(prec, n + 1);
            let b = Float::with_val(prec, n) + 0.5;
            s -= (Float::with_val(prec, &a * &b) * 2u32).recip();
        }
        // tail ≈ −1/(2 n_terms) with error O(n^-2)
        s -= Float::with_val(prec, 2 * n_terms).recip();
        let g = Float::with_val(prec, Constant::Euler);
        let series = Float::with_val(prec, &s - &g);
        let c = ctx();
        let v = digamma(&c.complex(0.5), &c).unwrap();
        let diff = (Float::with_val(prec, v.real()) - &series).abs().to_f64();
        assert!(diff < 1e-9, "{diff}");
        let ln2 = Float::with_val(c.prec(), Constant::Log2);
        let exact = Float::with_val(c.prec(), -c.euler() - ln2 * 2u32);
        assert!(err(&v, &c.complex(exact)) < 1e-70);
    }

    #[test]
    fn matches_mpfr_on_real_axis() {
        let c = ctx();
        for x in [0.013, 0.7, 3.25, 17.5, 123.0, -2.5, -7.3] {
            let v = digamma(&c.complex(x), &c).unwrap();
            let o = Float::with_val(c.prec(), x).digamma();
            assert!(err(&v, &c.complex(o)) < 1e-65, "x = {x}");
        }
    }

    #[test]
    fn poles_are_rejected() {
        let c = ctx();
        assert!(digamma(&c.complex(0), &c).is_err());
        assert!(digamma(&c.complex(-3), &c).is_err());
    }

    #[test]
    fn reflection_region() {
        let c = ctx();
        let z = c.complex((-3.7, 0.9));
        let v = digamma(&z, &c).unwrap();
        let one_minus = Complex::with_val(c.prec(), 1 - &z);
        // recurrence ψ(z+1) − ψ(z) = 1/z from a point that reflects
        let v1 = digamma(&Complex::with_val(c.prec(), &z + 1u32), &c).unwrap();
        let rec = Complex::with_val(c.prec(), z.recip_ref());
        assert!(err(&Complex::with_val(c.prec(), &v1 - &v), &rec) < 1e-65);
        let _ = one_minus;
    }

    #[test]
    fn remainder_examples() {
        let c = ctx();
        let (t, b) = psi_remainder(&c.complex(1e6), 1, &c).unwrap();
        let lead = -Complex::with_val(c.prec(), rug::Rational::from((1, 12_000_000_000_000u64)));
        assert!(err(&t, &lead) < 1e-30);
        assert!(b.to_f64() < 1e-24);

        let z = c.complex(50);
        let (t, b) = psi_remainder(&z, 8, &c).unwrap();
        let psi = digamma(&z, &c).unwrap();
        let lhs = psi - Complex::with_val(c.prec(), z.ln_ref()) + Complex::with_val(c.prec(), &z * 2u32).recip();
        assert!(err(&lhs, &t) <= b.to_f64());

        let bounds: Vec<f64> = [30.0, 60.0, 120.0]
            .iter()
            .map(|&r| psi_remainder(&c.complex(r), 5, &c).unwrap().1.to_f64())
            .collect();
        assert!(bounds[0] > bounds[1] && bounds[1] > bounds[2]);
    }

    #[test]
    fn remainder_bound_holds_off_axis() {
        let c = ctx();
        for (r, th) in [(12.0f64, 0.7f64), (25.0, -2.2), (8.0, 2.3)] {
            let z = c.complex((r * th.cos(), r * th.sin()));
            for m in [3usize, 6, 10] {
                let (t, b) = psi_remainder(&z, m, &c).unwrap();
                let psi = digamma(&z, &c).unwrap();
                let lhs = psi - Complex::with_val(c.prec(), z.ln_ref()) + Complex::with_val(c.prec(), &z * 2u32).recip();
                assert!(err(&lhs, &t) <= b.to_f64(), "r={r} th={th} m={m}");
            }
        }
    }

    #[test]
    fn remainder_domain() {
        let c = ctx();
        let z = c.complex((-10.0, 1.0));
        assert!(psi_remainder(&z, 3, &c).is_err());
    }

    #[test]
    fn psi_minus_log_consistent() {
        let c = ctx();
        for z in [c.complex((150.0, 3.0)), c.complex((2.0, -1.0))] {
            let a = psi_minus_log(&z, c.prec()).unwrap();
            let b = digamma(&z, &c).unwrap() - Complex::with_val(c.prec(), z.ln_ref());
            assert!(err(&a, &b) < 1e-70);
        }
    }
}
