mod common;

use common::{abs, dist};
use herglotz::quadrature::{circle_quadrature, gauss_legendre_panel};
use herglotz::specfun::{digamma, gamma, hurwitz_zeta, riemann_zeta};
use herglotz::PrecisionContext;
use proptest::prelude::*;
use rug::ops::Pow;
use rug::{Complex, Float};

fn ctx() -> PrecisionContext {
    PrecisionContext::default()
}

fn low() -> PrecisionContext {
    PrecisionContext::new(128, 1e-25).unwrap()
}

fn high() -> PrecisionContext {
    PrecisionContext::new(320, 1e-60).unwrap()
}

fn psi_recurrence(re: f64, im: f64, c: &PrecisionContext) -> f64 {
    let z = c.complex((re, im));
    let a = digamma(&Complex::with_val(c.prec(), &z + 1u32), c).unwrap();
    let b = digamma(&z, c).unwrap();
    dist(&(a - b), &z.recip())
}

fn gamma_reflection(re: f64, im: f64, c: &PrecisionContext) -> f64 {
    let s = c.complex((re, im));
    let one_minus = Complex::with_val(c.prec(), 1 - &s);
    let pis = Complex::with_val(c.prec(), &s * c.pi());
    let lhs = gamma(&s, c).unwrap() * gamma(&one_minus, c).unwrap() * pis.sin();
    dist(&lhs, &c.complex(c.pi()))
}

fn zeta_vs_hurwitz(re: f64, im: f64, c: &PrecisionContext) -> f64 {
    let s = c.complex((re, im));
    let a = riemann_zeta(&s, c).unwrap();
    let b = hurwitz_zeta(&s, &c.real(1), c).unwrap();
    dist(&a, &b) / abs(&a).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn digamma_recurrence(re in 0.05f64..40.0, im in -40.0f64..40.0) {
        prop_assert!(psi_recurrence(re, im, &ctx()) < 1e-40);
    }

    #[test]
    fn gamma_reflection_holds(re in -6.0f64..6.0, im in -4.0f64..4.0) {
        prop_assume!(im.abs() > 1e-3 || (re - re.round()).abs() > 1e-3);
        prop_assert!(gamma_reflection(re, im, &ctx()) < 1e-40);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn zeta_is_hurwitz_at_one(re in -8.0f64..8.0, im in -30.0f64..30.0) {
        prop_assume!((re - 1.0).abs() > 1e-3 || im.abs() > 1e-3);
        prop_assert!(zeta_vs_hurwitz(re, im, &ctx()) < 1e-40);
    }

    #[test]
    fn identities_scale_with_precision(re in 0.1f64..10.0, im in -10.0f64..10.0) {
        for (c, tol) in [(low(), 1e-25), (high(), 1e-60)] {
            prop_assert!(psi_recurrence(re, im, &c) < tol);
            prop_assert!(gamma_reflection(re, im, &c) < tol);
            prop_assert!(zeta_vs_hurwitz(re + 1.5, im, &c) < tol);
        }
    }

    #[test]
    fn circle_monomials(m in -4i32..=4, cre in -3.0f64..3.0, cim in -3.0f64..3.0, r in 0.05f64..2.0) {
        let c = ctx();
        let centre = c.complex((cre, cim));
        let v = circle_quadrature(
            |s| Ok(Complex::with_val(c.prec(), s - &centre).pow(m)),
            &centre,
            &c.real(r),
            16,
            &c,
        )
        .unwrap();
        let want = c.complex(if m == -1 { 1 } else { 0 });
        prop_assert!(dist(&v, &want) < 1e-40);
    }

    #[test]
    fn circle_nested_convergence(rho in 1.5f64..4.0, theta in 0.0f64..6.3, a in 0.1f64..2.0) {
        // e^{as}/(s - p) with p outside the unit circle: analytic on the disc,
        // trapezoid error about rho^-n
        let c = ctx();
        let p = c.complex((rho * theta.cos(), rho * theta.sin()));
        let f = |s: &Complex| Ok(Complex::with_val(c.prec(), s * a).exp() / Complex::with_val(c.prec(), s - &p));
        let est: Vec<Complex> = [16, 32, 64, 128]
            .iter()
            .map(|&n| circle_quadrature(f, &c.complex(0), &c.real(1), n, &c).unwrap())
            .collect();
        for w in est.windows(3) {
            let d1 = dist(&w[1], &w[0]);
            let d2 = dist(&w[2], &w[1]);
            prop_assert!(d2 <= d1 || d2 < 1e-60, "{d2} > {d1}");
        }
        prop_assert!(abs(&est[3]) < 1e-15);
    }

    #[test]
    fn gauss_legendre_doubling_reduces_error(a in -3.0f64..3.0, b in 0.5f64..4.0) {
        // ∫_0^b e^{at} dt = (e^{ab} - 1)/a
        let c = ctx();
        prop_assume!(a.abs() > 1e-3);
        let exact = (Float::with_val(c.prec(), c.real(a) * b).exp() - 1u32) / a;
        let exact = c.complex(exact);
        let f = |t: &Float| Ok(c.complex(Float::with_val(c.prec(), t * a).exp()));
        let errs: Vec<f64> = [2usize, 4, 8, 16]
            .iter()
            .map(|&n| dist(&gauss_legendre_panel(f, &c.real(0), &c.real(b), n, &c).unwrap(), &exact))
            .collect();
        for w in errs.windows(2) {
            prop_assert!(w[1] < w[0] || w[1] < 1e-60, "{errs:?}");
        }
    }
}

#[test]
fn zeta_laurent_structure() {
    let c = ctx();
    for e in 3..=10 {
        let h = 10f64.powi(-e);
        for sign in [1.0, -1.0] {
            let s = c.complex(1.0 + sign * h);
            let z = riemann_zeta(&s, &c).unwrap();
            let v = z * Complex::with_val(c.prec(), &s - 1u32);
            // (s-1)ζ(s) = 1 + γ(s-1) + O((s-1)²)
            let d = dist(&v, &c.complex(1));
            assert!(d < h, "h={h:e}: {d:e}");
            assert!(d > 0.5 * h, "h={h:e}: {d:e}");
        }
    }
}
