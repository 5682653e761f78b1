//! Summation engine for Σ_{n≥1} n^{−k} g(n^N x), where
//! g(z) = ψ(z) − log z + c/(2z) and c ∈ {0, 1}.
//!
//! Two strategies. When the asymptotic regime |n^N x| ≥ R is reached after a
//! few hundred terms, the tail is replaced by Bernoulli terms against Hurwitz
//! zeta tails. Otherwise (small N) the tail is handled by Euler–Maclaurin with
//! Cauchy-integral derivatives and a log-variable Gauss–Legendre integral.

use std::f64::consts::{LN_2, PI};

use rug::{Complex, Float, Rational};

use super::{SummationMethod, TruncationPlan};
use crate::error::{Error, Result};
use crate::precision::{abs_f64, arg_f64, log2_float};
use crate::quadrature::{circle_taylor_coefficients, gl_panel_prec, unit_roots};
use crate::specfun::bernoulli::bernoulli_even_floats;
use crate::specfun::digamma::psi_minus_log;
use crate::specfun::zeta::hurwitz_prec;

/// Largest direct-sum length for which the zeta-tail strategy is used.
const ZETA_TAIL_MAX_DIRECT: u64 = 600;
const MAX_TAIL_ORDER: usize = 4000;

/// Caller overrides, used to exercise the truncation bound.
#[derive(Debug, Clone, Default)]
pub struct EvalOptions {
    pub n_direct: Option<u64>,
    pub m_tail: Option<usize>,
}

pub(crate) struct Series<'a> {
    pub k: &'a Rational,
    pub n: &'a Rational,
    pub x: &'a Complex,
    pub c: u32,
}

/// Radius beyond which the digamma asymptotic series reaches 2^-prec.
pub(crate) fn asymptotic_radius(prec: u32) -> f64 {
    prec as f64 * LN_2 / (2.0 * PI) + 4.0
}

fn log2_abs_c(z: &Complex) -> f64 {
    log2_float(&Float::with_val(64, z.abs_ref()))
}

/// log2 of a Hurwitz-tail upper bound Σ_{n≥a} n^{−s} ≤ a^{−s} + a^{1−s}/(s−1).
fn log2_zeta_tail(s: f64, a: f64) -> f64 {
    let la = a.log2();
    let t1 = -s * la;
    let t2 = (1.0 - s) * la - (s - 1.0).log2();
    t1.max(t2) + 1.0
}

fn log2_bern(table: &[Float], m: usize) -> f64 {
    log2_float(&table[m])
}

impl Series<'_> {
    fn kf(&self, prec: u32) -> Float {
        Float::with_val(prec, self.k)
    }

    fn nf(&self, prec: u32) -> Float {
        Float::with_val(prec, self.n)
    }

    /// n^{−k} g(n^N x) at a real point t > 0.
    pub(crate) fn term_real(&self, t: &Float, kf: &Float, nf: &Float, prec: u32) -> Result<Complex> {
        let lt = Float::with_val(prec, t.ln_ref());
        let scale = Float::with_val(prec, nf * &lt).exp();
        let z = Complex::with_val(prec, self.x * &scale);
        let w = Float::with_val(prec, -(Float::with_val(prec, kf * &lt))).exp();
        Ok(self.g(&z, prec)? * w)
    }

    fn term_complex(&self, t: &Complex, kf: &Float, nf: &Float, prec: u32) -> Result<Complex> {
        let lt = Complex::with_val(prec, t.ln_ref());
        let scale = Complex::with_val(prec, &lt * nf).exp();
        let z = Complex::with_val(prec, self.x * &scale);
        let w = (-Complex::with_val(prec, &lt * kf)).exp();
        Ok(self.g(&z, prec)? * w)
    }

    fn g(&self, z: &Complex, prec: u32) -> Result<Complex> {
        let mut v = psi_minus_log(z, prec)?;
        if self.c != 0 {
            v += Complex::with_val(prec, z * 2u32).recip() * self.c;
        }
        Ok(v)
    }

    fn direct(&self, upto: u64, prec: u32) -> Result<Complex> {
        let kf = self.kf(prec);
        let nf = self.nf(prec);
        let mut acc = Complex::with_val(prec, 0);
        for n in 1..=upto {
            acc += self.term_real(&Float::with_val(prec, n), &kf, &nf, prec)?;
        }
        Ok(acc)
    }

    pub fn evaluate(&self, prec: u32, opts: &EvalOptions) -> Result<(Complex, TruncationPlan)> {
        let theta = arg_f64(self.x);
        let ax = abs_f64(self.x);
        let q = (theta / 2.0).cos();
        let nf = self.n.to_f64();
        let r = asymptotic_radius(prec);
        let reach = r / (ax * q);
        let n0 = if reach <= 1.0 { 0.0 } else { reach.powf(1.0 / nf).ceil() };
        if opts.n_direct.is_some() || opts.m_tail.is_some() || n0 <= ZETA_TAIL_MAX_DIRECT as f64 {
            let n0 = opts.n_direct.unwrap_or(n0 as u64);
            self.zeta_tail(n0, opts.m_tail, prec)
        } else {
            self.euler_maclaurin(prec)
        }
    }

    /// Choose the Bernoulli order for a tail starting at a^N|x|q.
    fn choose_order(&self, log2_base: f64, tail: impl Fn(usize) -> f64, table: &[Float], target: f64) -> (usize, f64) {
        let mut best = (1usize, f64::INFINITY);
        for m in 1..MAX_TAIL_ORDER {
            if m + 1 >= table.len() {
                break;
            }
            let e = 2 * m + 2;
            let lb = log2_bern(table, m + 1) - (e as f64).log2() - e as f64 * log2_base + tail(m);
            if lb < best.1 {
                best = (m, lb);
            }
            if lb < target {
                return (m, lb);
            }
            if lb > best.1 + 40.0 {
                break;
            }
        }
        best
    }

    fn zeta_tail(&self, n0: u64, m_fixed: Option<usize>, prec: u32) -> Result<(Complex, TruncationPlan)> {
        let theta = arg_f64(self.x);
        let q = (theta / 2.0).cos();
        let ax = abs_f64(self.x);
        let kf64 = self.k.to_f64();
        let nf64 = self.n.to_f64();
        let a = (n0 + 1) as f64;
        let log2_base = (ax * q).log2();
        let table = bernoulli_even_floats(MAX_TAIL_ORDER.min(prec as usize + 64), prec);
        let tail_s = |m: usize| log2_zeta_tail(kf64 + (2 * m + 2) as f64 * nf64, a);
        let (m, lb) = match m_fixed {
            Some(m) => {
                let e = 2 * m + 2;
                let lb = log2_bern(&table, m + 1) - (e as f64).log2() - e as f64 * log2_base + tail_s(m);
                (m, lb)
            }
            None => self.choose_order(log2_base, tail_s, &table, -(prec as f64) - 4.0),
        };
        log::debug!("zeta-tail plan: n0 = {n0}, M = {m}, log2 bound = {lb:.1}");

        let mut acc = self.direct(n0, prec)?;
        let kf = self.kf(prec);
        let nf = self.nf(prec);
        let shift = Float::with_val(prec, n0 + 1);
        let xinv2 = Complex::with_val(prec, self.x * self.x).recip();
        let mut pw = xinv2.clone();
        for mm in 1..=m {
            let s = Float::with_val(prec, &nf * (2 * mm) as u32) + &kf;
            let z = hurwitz_prec(&Complex::with_val(prec, &s), &shift, prec)?;
            let coeff = Float::with_val(prec, &table[mm] / (2 * mm) as u32);
            acc -= z * &pw * coeff;
            pw *= &xinv2;
        }
        if self.c != 1 {
            let s = Float::with_val(prec, &kf + &nf);
            let z = hurwitz_prec(&Complex::with_val(prec, &s), &shift, prec)?;
            let f = Complex::with_val(prec, self.x * 2u32).recip() * (self.c as i32 - 1);
            acc += z * f;
        }
        let rounding = -(prec as f64) + ((n0 + m as u64 + 2) as f64).log2() + 2.0;
        let bound = Float::with_val(prec, lb).exp2() + Float::with_val(prec, rounding).exp2();
        let plan = TruncationPlan {
            method: SummationMethod::ZetaTail,
            n_direct: n0,
            m_tail: m,
            tail_formula: format!(
                "sum_(m=1..{m}) -B_2m/(2m x^2m) zeta(k+2mN, {}) {}",
                n0 + 1,
                if self.c == 1 { "" } else { "+ (c-1)/(2x) zeta(k+N, n0+1)" }
            )
            .trim_end()
            .to_string(),
            bound,
        };
        Ok((acc, plan))
    }

    fn euler_maclaurin(&self, prec: u32) -> Result<(Complex, TruncationPlan)> {
        let theta = arg_f64(self.x);
        let q = (theta / 2.0).cos();
        let ax = abs_f64(self.x);
        let kf64 = self.k.to_f64();
        let nf64 = self.n.to_f64();
        let phi = (PI - theta.abs()) / nf64;
        let s_phi = if phi >= PI / 2.0 { 1.0 } else { phi.sin() };
        let rho_min = 1.3 * (prec as f64 * LN_2 + 30.0) / (2.0 * PI);
        let n0 = ((rho_min / s_phi).ceil() as u64).max(2);
        let rho = n0 as f64 * s_phi;
        let kf = self.kf(prec);
        let nf = self.nf(prec);
        let target = -(prec as f64) - 4.0;

        let mut acc = self.direct(n0 - 1, prec)?;
        let f0 = self.term_real(&Float::with_val(prec, n0), &kf, &nf, prec)?;
        acc += Complex::with_val(prec, &f0 / 2u32);

        // Euler–Maclaurin corrections from Taylor coefficients on |t − n0| = ρ/2.
        let radius = Float::with_val(prec, rho / 2.0);
        let nodes = (prec as usize + 32).next_multiple_of(4);
        let centre = Complex::with_val(prec, n0);
        let mut samples = Vec::with_capacity(nodes);
        for w in unit_roots(nodes, prec) {
            let t = Complex::with_val(prec, &centre + Complex::with_val(prec, &w * &radius));
            samples.push(self.term_complex(&t, &kf, &nf, prec)?);
        }
        let table = bernoulli_even_floats(nodes / 2 + 2, prec);
        let mut small = 0;
        let mut em_last = f64::NEG_INFINITY;
        let mut j = 1;
        while 2 * j < nodes / 2 {
            let a = circle_taylor_coefficients(&samples, &radius, &[2 * j - 1], prec).remove(0);
            let coeff = Float::with_val(prec, &table[j] / (2 * j) as u32);
            let term = a * coeff;
            em_last = log2_abs_c(&term);
            acc -= term;
            if em_last < target {
                small += 1;
                if small == 2 {
                    break;
                }
            } else {
                small = 0;
            }
            j += 1;
        }
        if small < 2 {
            return Err(Error::Convergence {
                what: "Euler-Maclaurin correction series".into(),
                last: format!("2^{em_last:.1}"),
                previous: format!("{j} terms"),
            });
        }

        // ∫_{n0}^{t1} by Gauss–Legendre in v = log t.
        let reach = asymptotic_radius(prec) / (ax * q);
        let t1 = reach.powf(1.0 / nf64).max(n0 as f64);
        let v0 = Float::with_val(prec, n0).ln();
        let v1 = Float::with_val(prec, t1).ln();
        let width = phi.min(PI);
        let h = width.min(2.0);
        let ratio = 0.85 * width / (h / 2.0);
        let rho_b = ratio + (ratio * ratio + 1.0).sqrt();
        let n_gl = ((prec as f64 * LN_2 + 20.0) / (2.0 * rho_b.ln())).ceil() as usize + 4;
        let span = (Float::with_val(64, &v1 - &v0)).to_f64();
        let panels = ((span / h).ceil() as usize).max(1);
        let integrand = |v: &Float| -> Result<Complex> {
            let t = Float::with_val(prec, v.exp_ref());
            Ok(self.term_real(&t, &kf, &nf, prec)? * t)
        };
        let step = Float::with_val(prec, &v1 - &v0) / panels as u32;
        for p in 0..panels {
            let a = Float::with_val(prec, &step * p as u32) + &v0;
            let b = if p + 1 == panels { v1.clone() } else { Float::with_val(prec, &a + &step) };
            acc += gl_panel_prec(&integrand, &a, &b, n_gl, prec)?;
        }

        // ∫_{t1}^∞ through the asymptotic expansion, term by term.
        let t1f = Float::with_val(prec, t1);
        let lt1 = Float::with_val(prec, t1f.ln_ref());
        let log2_base = (ax * q).log2() + nf64 * t1.log2();
        let table_m = bernoulli_even_floats(MAX_TAIL_ORDER.min(prec as usize + 64), prec);
        let tail = |m: usize| {
            let e = kf64 + (2 * m + 2) as f64 * nf64 - 1.0;
            (1.0 - kf64) * t1.log2() - e.log2()
        };
        let (m, lb) = self.choose_order(log2_base, tail, &table_m, target);
        let xinv2 = Complex::with_val(prec, self.x * self.x).recip();
        let mut pw = xinv2.clone();
        let one_minus_k = Float::with_val(prec, 1 - &kf);
        for mm in 1..=m {
            let e = Float::with_val(prec, &nf * (2 * mm) as u32) - &one_minus_k;
            let tp = (Float::with_val(prec, -(Float::with_val(prec, &e * &lt1)))).exp();
            let coeff = Float::with_val(prec, &table_m[mm] / (2 * mm) as u32) * tp / e;
            acc -= Complex::with_val(prec, &pw * coeff);
            pw *= &xinv2;
        }
        if self.c != 1 {
            let e = Float::with_val(prec, &kf + &nf) - 1u32;
            let tp = (Float::with_val(prec, -(Float::with_val(prec, &e * &lt1)))).exp();
            let f = Complex::with_val(prec, self.x * 2u32).recip() * (self.c as i32 - 1);
            acc += f * tp / e;
        }
        let evals = (n0 + nodes as u64 + (panels * n_gl) as u64) as f64;
        let est = em_last.max(lb).max(-(prec as f64) + evals.log2() + 2.0);
        log::debug!("Euler-Maclaurin plan: n0 = {n0}, EM terms = {j}, GL {panels}x{n_gl}, M = {m}");
        let plan = TruncationPlan {
            method: SummationMethod::EulerMaclaurin,
            n_direct: n0,
            m_tail: m,
            tail_formula: format!(
                "f({n0})/2 + int_{n0}^t1 f + asymptotic int_t1^inf f - sum_(j=1..{j}) B_2j/(2j) f^(2j-1)({n0})/(2j-1)!"
            ),
            bound: Float::with_val(prec, est).exp2() * 4u32,
        };
        Ok((acc, plan))
    }
}
