//! Herglotz-type series: F, F_k, 𝔉_{k,N}, ℱ_{k,N}, F*, the auxiliary φ, and
//! the character twists ψ(x, χ) and F_k(x, χ).

mod character;
mod engine;

use std::fmt;

use rug::{Complex, Float, Rational};

use crate::error::{Error, Result};
use crate::precision::PrecisionContext;
use crate::specfun::digamma::digamma_prec;
use crate::specfun::zeta::{zeta_deriv_prec, zeta_prec};

pub use character::{f_character, f_character_with_plan, psi_character};
pub use engine::EvalOptions;

use engine::Series;

/// Which tail strategy an evaluation used.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SummationMethod {
    /// Direct terms, then Bernoulli asymptotics against Hurwitz zeta tails.
    ZetaTail,
    /// Direct terms, then Euler–Maclaurin with a quadrature integral.
    EulerMaclaurin,
    /// Character series: Bernoulli asymptotics against L-function tails.
    CharacterTail,
}

impl fmt::Display for SummationMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SummationMethod::ZetaTail => "zeta-tail",
            SummationMethod::EulerMaclaurin => "euler-maclaurin",
            SummationMethod::CharacterTail => "character-tail",
        };
        f.write_str(s)
    }
}

/// How a series was truncated and an upper bound on the truncation error.
///
/// The bound is rigorous for `ZetaTail` (up to rounding); for the other
/// methods it is an estimate from the size of the last retained terms.
#[derive(Debug, Clone)]
pub struct TruncationPlan {
    pub method: SummationMethod,
    pub n_direct: u64,
    pub m_tail: usize,
    pub tail_formula: String,
    pub bound: Float,
}

/// A series value together with its truncation plan.
#[derive(Debug, Clone)]
pub struct HerglotzValue {
    pub value: Complex,
    pub plan: TruncationPlan,
}

/// Parameters of 𝔉_{k,N}(x). k and N are exact rationals.
#[derive(Debug, Clone)]
pub struct HerglotzParams {
    pub k: Rational,
    pub n: Rational,
    pub x: Complex,
}

pub(crate) fn check_off_cut(x: &Complex) -> Result<()> {
    if x.imag().is_zero() && *x.real() <= 0 {
        return Err(Error::Domain(format!(
            "x = {} lies on the branch cut (-inf, 0]",
            x.real().to_f64()
        )));
    }
    if !x.real().is_finite() || !x.imag().is_finite() {
        return Err(Error::Domain("x must be finite".into()));
    }
    Ok(())
}

impl HerglotzParams {
    pub fn new(k: impl Into<Rational>, n: impl Into<Rational>, x: Complex) -> Result<Self> {
        let p = HerglotzParams {
            k: k.into(),
            n: n.into(),
            x,
        };
        p.validate(2)?;
        Ok(p)
    }

    /// Checks N > 0, x off the cut, and k + cN > 1 (c = 2 for 𝔉, 1 for ℱ).
    fn validate(&self, c: u32) -> Result<()> {
        if self.n <= 0 {
            return Err(Error::Domain(format!("N = {} must be positive", self.n)));
        }
        let s = Rational::from(&self.n * c) + &self.k;
        if s <= 1 {
            return Err(Error::Domain(format!(
                "k + {c}N = {s} must exceed 1 for convergence"
            )));
        }
        check_off_cut(&self.x)
    }
}

fn run(k: &Rational, n: &Rational, x: &Complex, c: u32, ctx: &PrecisionContext, opts: &EvalOptions) -> Result<HerglotzValue> {
    let prec = ctx.prec();
    let x = Complex::with_val(prec, x);
    let series = Series { k, n, x: &x, c };
    let (value, plan) = series.evaluate(prec, opts)?;
    Ok(HerglotzValue { value, plan })
}

/// φ(x) = ψ(x) + 1/(2x) − log x.
pub fn phi(x: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    check_off_cut(x)?;
    let prec = ctx.prec();
    let x = Complex::with_val(prec, x);
    let psi = digamma_prec(&x, prec)?;
    let l = Complex::with_val(prec, x.ln_ref());
    Ok(psi + Complex::with_val(prec, &x * 2u32).recip() - l)
}

/// 𝔉_{k,N}(x) = Σ n^{−k}(ψ(n^N x) − log(n^N x) + 1/(2n^N x)), with plan.
pub fn frak_f_with_plan(p: &HerglotzParams, ctx: &PrecisionContext, opts: &EvalOptions) -> Result<HerglotzValue> {
    p.validate(2)?;
    run(&p.k, &p.n, &p.x, 1, ctx, opts)
}

/// 𝔉_{k,N}(x).
pub fn frak_f(p: &HerglotzParams, ctx: &PrecisionContext) -> Result<Complex> {
    Ok(frak_f_with_plan(p, ctx, &EvalOptions::default())?.value)
}

/// ℱ_{k,N}(x) = Σ n^{−k}(ψ(n^N x) − log(n^N x)), with plan. Needs k + N > 1.
pub fn script_f_with_plan(p: &HerglotzParams, ctx: &PrecisionContext, opts: &EvalOptions) -> Result<HerglotzValue> {
    p.validate(1)?;
    run(&p.k, &p.n, &p.x, 0, ctx, opts)
}

/// ℱ_{k,N}(x).
pub fn script_f(p: &HerglotzParams, ctx: &PrecisionContext) -> Result<Complex> {
    Ok(script_f_with_plan(p, ctx, &EvalOptions::default())?.value)
}

/// The Herglotz function F(x) = Σ (ψ(nx) − log(nx))/n, with plan.
pub fn herglotz_f_with_plan(x: &Complex, ctx: &PrecisionContext) -> Result<HerglotzValue> {
    check_off_cut(x)?;
    let one = Rational::from(1);
    run(&one, &one, x, 0, ctx, &EvalOptions::default())
}

/// The Herglotz function F(x).
pub fn herglotz_f(x: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    Ok(herglotz_f_with_plan(x, ctx)?.value)
}

/// F*(x) = Σ (ψ(nx) − log(nx) + 1/(2nx))/n, i.e. 𝔉_{1,1}(x).
pub fn f_star(x: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    check_off_cut(x)?;
    let one = Rational::from(1);
    Ok(run(&one, &one, x, 1, ctx, &EvalOptions::default())?.value)
}

/// Higher Herglotz function F_k(x) = Σ ψ(nx)/n^k for integer k ≥ 2, with plan.
pub fn higher_fk_with_plan(x: &Complex, k: u32, ctx: &PrecisionContext) -> Result<HerglotzValue> {
    if k < 2 {
        return Err(Error::Domain(format!("F_k needs k >= 2, got {k}")));
    }
    check_off_cut(x)?;
    let prec = ctx.prec();
    let kq = Rational::from(k);
    let mut hv = run(&kq, &Rational::from(1), x, 0, ctx, &EvalOptions::default())?;
    // Σ log(nx)/n^k = ζ(k) log x − ζ'(k)
    let s = Complex::with_val(prec, k);
    let z = zeta_prec(&s, prec)?;
    let dz = zeta_deriv_prec(&s, prec)?;
    let lx = Complex::with_val(prec, Complex::with_val(prec, x).ln_ref());
    hv.value += z * lx - dz;
    Ok(hv)
}

/// F_k(x) for integer k ≥ 2.
pub fn higher_fk(x: &Complex, k: u32, ctx: &PrecisionContext) -> Result<Complex> {
    Ok(higher_fk_with_plan(x, k, ctx)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::float::Constant;

    fn err(a: &Complex, b: &Complex) -> f64 {
        Float::with_val(64, Complex::with_val(a.prec().0, a - b).abs_ref()).to_f64()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn phi_values() {
        let c = PrecisionContext::default();
        let g = c.euler();
        let p1 = phi(&c.complex(1), &c).unwrap();
        assert!(err(&p1, &c.complex(Float::with_val(c.prec(), 0.5 - &g))) < 1e-70);
        let ph = phi(&c.complex(0.5), &c).unwrap();
        let ln2 = Float::with_val(c.prec(), Constant::Log2);
        let want = Float::with_val(c.prec(), 1 - &g) - ln2;
        assert!(err(&ph, &c.complex(want)) < 1e-70);
        let big = phi(&c.complex(1e4), &c).unwrap();
        let lead = -1.0 / 12.0 / 1e8;
        assert!((big.real().to_f64() - lead).abs() < 1e-17);
        assert!(phi(&c.complex(-1), &c).is_err());
    }

    #[test]
    fn herglotz_at_one() {
        let c = PrecisionContext::default();
        let f1 = herglotz_f(&c.complex(1), &c).unwrap();
        let g = c.euler();
        let g1 = crate::specfun::stieltjes_gamma1(&c);
        let pi2 = Float::with_val(c.prec(), c.pi().square_ref());
        let want = -Float::with_val(c.prec(), g.square_ref()) / 2u32 - pi2 / 12u32 - g1;
        assert!(err(&f1, &c.complex(want)) < 1e-70);
    }

    #[test]
    fn relation_web() {
        let c = PrecisionContext::default();
        let pi2 = Float::with_val(c.prec(), c.pi().square_ref());
        for x in [c.complex(2), c.complex(0.5), c.complex((1, 1)), c.complex(3)] {
            let f = herglotz_f(&x, &c).unwrap();
            let p = HerglotzParams::new(1, 1, x.clone()).unwrap();
            let f11 = frak_f(&p, &c).unwrap();
            let corr = Complex::with_val(c.prec(), &x * 12u32).recip() * &pi2;
            assert!(err(&f11, &(f.clone() + &corr)) < 1e-70);
            let fs = f_star(&x, &c).unwrap();
            assert!(err(&fs, &f11) < 1e-70);
            let s11 = script_f(&p, &c).unwrap();
            assert!(err(&s11, &f) < 1e-70);
        }
        // 𝔉 = ℱ + ζ(k+N)/(2x) at fractional and integer parameters
        let x = c.complex(1.25);
        for (k, n) in [(q(2, 1), q(3, 1)), (q(7, 4), q(1, 4)), (q(3, 2), q(1, 2))] {
            let p = HerglotzParams::new(k.clone(), n.clone(), x.clone()).unwrap();
            let a = frak_f(&p, &c).unwrap();
            let b = script_f(&p, &c).unwrap();
            let s = Float::with_val(c.prec(), Rational::from(&k + &n));
            let z = crate::specfun::riemann_zeta(&c.complex(s), &c).unwrap();
            let corr = z / Complex::with_val(c.prec(), &x * 2u32);
            assert!(err(&a, &(b + corr)) < 1e-70, "k={k} N={n}");
        }
    }

    #[test]
    fn higher_fk_decomposition() {
        let c = PrecisionContext::default();
        let x = c.complex(1);
        let f2 = higher_fk(&x, 2, &c).unwrap();
        // F_2(1) = Σ ψ(n)/n² = −γζ(2) + Σ H_{n−1}/n² = −γζ(2) + ζ(3)
        let z2 = Float::with_val(c.prec(), c.pi().square_ref()) / 6u32;
        let z3 = Float::with_val(c.prec(), 3u32).zeta();
        let want = z3 - c.euler() * z2;
        assert!(err(&f2, &c.complex(want)) < 1e-70);
    }

    #[test]
    fn fractional_small_n_against_brute_force() {
        // Σ_{n ≤ 10^5} plus the leading tail −(1/12x²)Σ n^{−k−2N} bracket the
        // accelerated value.
        let c = PrecisionContext::new(128, 1e-25).unwrap();
        let prec = 96;
        let x = Complex::with_val(c.prec(), (0.0, -std::f64::consts::PI / 4.0)).exp()
            / Float::with_val(c.prec(), 2f64.powf(0.25));
        let p = HerglotzParams::new(q(7, 4), q(1, 4), x.clone()).unwrap();
        let hv = frak_f_with_plan(&p, &c, &EvalOptions::default()).unwrap();
        assert_eq!(hv.plan.method, SummationMethod::EulerMaclaurin);
        let kf = Float::with_val(prec, 1.75);
        let nf = Float::with_val(prec, 0.25);
        let xs = Complex::with_val(prec, &x);
        let series = Series { k: &p.k, n: &p.n, x: &xs, c: 1 };
        let limit = 100_000u64;
        let mut s = Complex::with_val(prec, 0);
        for n in 1..=limit {
            s += series.term_real(&Float::with_val(prec, n), &kf, &nf, prec).unwrap();
        }
        // tail ≈ −(1/(12x²)) ∫_L^∞ t^{−2.25} dt, relative correction O(L^{−1/2})
        let l = limit as f64;
        let tail_mag = l.powf(-1.25) / 1.25 / 12.0 / abs_sq(&xs);
        let d = err(&hv.value, &Complex::with_val(c.prec(), &s));
        assert!(d < 1.2 * tail_mag, "{d} vs {tail_mag}");
        assert!(d > 0.8 * tail_mag, "{d} vs {tail_mag}");
    }

    fn abs_sq(z: &Complex) -> f64 {
        let a = Float::with_val(64, z.abs_ref()).to_f64();
        a * a
    }

    #[test]
    fn truncation_bound_is_sound() {
        let c = PrecisionContext::default();
        let grid: Vec<(Rational, Rational, Complex)> = vec![
            (q(1, 1), q(1, 1), c.complex(2)),
            (q(1, 1), q(1, 1), c.complex((1, 1))),
            (q(0, 1), q(2, 1), c.complex(1.25)),
            (q(2, 1), q(3, 1), c.complex((0.5, -0.7))),
            (q(3, 2), q(1, 2), c.complex(4)),
            (q(5, 1), q(4, 1), c.complex((1, 0.5))),
        ];
        for (k, n, x) in grid {
            let p = HerglotzParams::new(k.clone(), n.clone(), x).unwrap();
            let reference = frak_f(&p, &c).unwrap();
            for (nd, m) in [(3u64, 2usize), (10, 3), (30, 5)] {
                let opts = EvalOptions { n_direct: Some(nd), m_tail: Some(m) };
                let hv = frak_f_with_plan(&p, &c, &opts).unwrap();
                let actual = err(&hv.value, &reference);
                let long = EvalOptions { n_direct: Some(10 * nd), m_tail: Some(m) };
                let hl = frak_f_with_plan(&p, &c, &long).unwrap();
                let vs_long = err(&hv.value, &hl.value);
                let b = hv.plan.bound.to_f64();
                assert!(actual <= b, "k={k} N={n} nd={nd}: {actual} > {b}");
                assert!(vs_long <= b + hl.plan.bound.to_f64());
            }
        }
    }

    #[test]
    fn precision_scaling() {
        let lo = PrecisionContext::new(128, 1e-25).unwrap();
        let hi = PrecisionContext::default();
        for (k, n, x) in [(q(1, 1), q(1, 1), (1.0, 1.0)), (q(5, 3), q(1, 3), (0.5, -0.4))] {
            let a = frak_f(&HerglotzParams::new(k.clone(), n.clone(), lo.complex(x)).unwrap(), &lo).unwrap();
            let b = frak_f(&HerglotzParams::new(k, n, hi.complex(x)).unwrap(), &hi).unwrap();
            assert!(err(&a, &Complex::with_val(lo.prec(), &b)) < 1e-36);
        }
    }

    #[test]
    fn domain_errors() {
        let c = PrecisionContext::default();
        assert!(HerglotzParams::new(-2, 1, c.complex(1)).is_err());
        assert!(HerglotzParams::new(1, 1, c.complex(-0.5)).is_err());
        assert!(HerglotzParams::new(1, 0, c.complex(1)).is_err());
        let p = HerglotzParams::new(0, 1, c.complex(2)).unwrap();
        assert!(script_f(&p, &c).is_err());
        assert!(higher_fk(&c.complex(1), 1, &c).is_err());
    }
}
