//! ψ(x, χ) = −Σ χ(k)/(k + x) and F_k(x, χ) = Σ χ(n) ψ(nx, χ)/n^k.

use rug::ops::Pow;
use rug::{Complex, Float};

use super::engine::asymptotic_radius;
use super::{check_off_cut, HerglotzValue, SummationMethod, TruncationPlan};
use crate::characters::{root_of_unity, DirichletCharacter};
use crate::error::{Error, Result};
use crate::lfunctions::{generalized_bernoulli_exact, l_tail_prec, render_cyclotomic};
use crate::precision::{abs_f64, arg_f64, log2_float, powi, PrecisionContext};
use crate::specfun::digamma::digamma_prec;

pub(crate) fn psi_character_prec(x: &Complex, chi: &DirichletCharacter, prec: u32) -> Result<Complex> {
    // −Σ_a χ(a) Σ_m 1/(md + a + x); the divergent parts cancel since Σχ(a) = 0.
    let d = chi.modulus();
    let mut acc = Complex::with_val(prec, 0);
    for a in 1..=d {
        if let Some(v) = chi.value_exponent(a as i64) {
            let w = Complex::with_val(prec, x + a) / d as u32;
            acc += digamma_prec(&w, prec)? * root_of_unity(v, chi.value_order(), prec);
        }
    }
    Ok(acc / d as u32)
}

/// ψ(x, χ) = (1/d) Σ_{a=1}^{d} χ(a) ψ((a + x)/d) for nonprincipal χ.
pub fn psi_character(x: &Complex, chi: &DirichletCharacter, ctx: &PrecisionContext) -> Result<Complex> {
    if chi.is_principal() {
        return Err(Error::Unsupported("psi(x, chi) needs a nonprincipal character".into()));
    }
    let prec = ctx.prec();
    psi_character_prec(&Complex::with_val(prec, x), chi, prec).map_err(|e| match e {
        Error::Pole { .. } => Error::Domain(format!("psi(x, {}) has a pole at x = {}", chi.label(), x.real().to_f64())),
        other => other,
    })
}

/// F_k(x, χ) with its truncation plan.
///
/// Past n0 the expansion ψ(z, χ) ~ Σ_p (−1)^{p+1} B_p(χ)/(p z^p) is summed
/// against the tails Σ_{n>n0} χ(n) n^{−k−p}; the p = 1, k = 0 tail is the
/// convergent L(1, χ)-type tail.
pub fn f_character_with_plan(x: &Complex, k: u32, chi: &DirichletCharacter, ctx: &PrecisionContext) -> Result<HerglotzValue> {
    check_off_cut(x)?;
    if chi.is_principal() || !chi.is_primitive() {
        return Err(Error::Domain(format!(
            "F_k(x, chi) needs a primitive nonprincipal character, got {}",
            chi.label()
        )));
    }
    let prec = ctx.prec();
    let x = Complex::with_val(prec, x);
    let d = chi.modulus();
    let theta = arg_f64(&x);
    let q = (theta / 2.0).cos();
    let ax = abs_f64(&x);
    let r = asymptotic_radius(prec);
    let blocks = (r / (ax * q)).ceil().max(1.0) as u64;
    let n0 = blocks * d;

    // Plan the expansion order from the exact B_p(χ) magnitudes.
    let target = -(prec as f64) - 4.0;
    let log2_n0 = (n0 as f64).log2();
    let mut coeffs: Vec<(usize, Complex)> = Vec::new();
    let mut small = 0;
    let mut last = f64::NEG_INFINITY;
    let mut p = 1usize;
    let p_cap = 4 * prec as usize;
    while p < p_cap {
        let b = render_cyclotomic(&generalized_bernoulli_exact(p, chi), prec);
        if !b.is_zero() {
            let s = (k as usize + p) as f64;
            let tail = if s > 1.0 {
                (1.0 - s) * log2_n0 - (s - 1.0).log2() + 1.0
            } else {
                (d as f64).log2()
            };
            let est = log2_float(&Float::with_val(64, b.abs_ref())) - (p as f64).log2() - p as f64 * (ax * q).log2() + tail;
            let c = b / p as u32;
            // c_p = (−1)^{p+1} B_p(χ)/p
            coeffs.push((p, if p % 2 == 0 { -c } else { c }));
            last = est;
            if est < target {
                small += 1;
                if small == 2 {
                    break;
                }
            } else {
                small = 0;
            }
        }
        p += 1;
    }
    if small < 2 {
        return Err(Error::Convergence {
            what: format!("psi(x, {}) expansion", chi.label()),
            last: format!("2^{last:.1}"),
            previous: format!("{p} terms"),
        });
    }

    let mut acc = Complex::with_val(prec, 0);
    for n in 1..=n0 {
        if let Some(v) = chi.value_exponent(n as i64) {
            let nx = Complex::with_val(prec, &x * n);
            let mut t = psi_character_prec(&nx, chi, prec)? * root_of_unity(v, chi.value_order(), prec);
            if k > 0 {
                t /= Float::with_val(prec, n).pow(k);
            }
            acc += t;
        }
    }
    let xinv = Complex::with_val(prec, x.recip_ref());
    for (p, c) in &coeffs {
        let s = Complex::with_val(prec, k as usize + p);
        let tail = l_tail_prec(&s, chi, n0, prec)?;
        let xp = powi(&xinv, *p as i32);
        acc += tail * c * xp;
    }
    let rounding = -(prec as f64) + ((n0 * d) as f64).log2() + 4.0;
    let est = last.max(rounding) + 2.0;
    let plan = TruncationPlan {
        method: SummationMethod::CharacterTail,
        n_direct: n0,
        m_tail: coeffs.last().map(|c| c.0).unwrap_or(0),
        tail_formula: format!(
            "sum_p (-1)^(p+1) B_p(chi)/(p x^p) sum_(n>{n0}) chi(n) n^(-k-p)"
        ),
        bound: Float::with_val(prec, est).exp2(),
    };
    Ok(HerglotzValue { value: acc, plan })
}

/// F_k(x, χ) = Σ χ(n) ψ(nx, χ)/n^k for primitive nonprincipal χ, k ≥ 0.
pub fn f_character(x: &Complex, k: u32, chi: &DirichletCharacter, ctx: &PrecisionContext) -> Result<Complex> {
    Ok(f_character_with_plan(x, k, chi, ctx)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::characters_mod;
    use crate::lfunctions::l_function;

    fn err(a: &Complex, b: &Complex) -> f64 {
        Float::with_val(64, Complex::with_val(a.prec().0, a - b).abs_ref()).to_f64()
    }

    fn chi(s: &str) -> DirichletCharacter {
        s.parse().unwrap()
    }

    /// −Σ_{k ≤ B·d} χ(k)/(k + x), summed over whole periods.
    fn grouped(x: &Complex, chi: &DirichletCharacter, periods: u64, prec: u32) -> Complex {
        let d = chi.modulus();
        let mut acc = Complex::with_val(prec, 0);
        for kk in 1..=periods * d {
            let v = chi.evaluate_prec(kk as i64, prec);
            if !v.is_zero() {
                acc -= v / Complex::with_val(prec, x + kk);
            }
        }
        acc
    }

    #[test]
    fn psi_character_at_zero() {
        let c = PrecisionContext::default();
        let x4 = chi("4.1");
        let v = psi_character(&c.complex(0), &x4, &c).unwrap();
        let want = -c.pi() / 4u32;
        assert!(err(&v, &c.complex(want)) < 1e-70);
        let l1 = l_function(&c.complex(1), &x4, &c).unwrap();
        assert!(err(&v, &(-l1)) < 1e-70);
    }

    #[test]
    fn psi_character_grouped_oracle() {
        // Over whole periods the partial sums converge like O(1/(Bd)).
        let c = PrecisionContext::new(128, 1e-25).unwrap();
        let prec = c.prec();
        for d in 3..=8u64 {
            for ch in characters_mod(d).unwrap() {
                if ch.is_principal() || !ch.is_primitive() {
                    continue;
                }
                for x in [0.5, 1.0, 7.0 / 3.0] {
                    let xv = c.complex(x);
                    let v = psi_character(&xv, &ch, &c).unwrap();
                    let g = grouped(&xv, &ch, 10_000, prec);
                    assert!(err(&v, &g) < 2.0 * d as f64 / 10_000.0, "{} x={x}", ch.label());
                }
            }
        }
    }

    #[test]
    fn psi_character_leading_asymptotic() {
        let c = PrecisionContext::default();
        for label in ["3.1", "4.1"] {
            let ch = chi(label);
            let x = c.complex(1000);
            let v = psi_character(&x, &ch, &c).unwrap();
            let l0 = l_function(&c.complex(0), &ch, &c).unwrap();
            let lead = -l0 / Complex::with_val(c.prec(), &x);
            assert!(err(&v, &lead) < 1e-6 * abs_f64(&lead));
        }
    }

    #[test]
    fn f_character_against_direct_sum() {
        let c = PrecisionContext::new(128, 1e-25).unwrap();
        let prec = c.prec();
        let x3 = chi("3.1");
        let v = f_character(&c.complex(1), 2, &x3, &c).unwrap();
        let lim = 100_000i64;
        let mut s = Complex::with_val(prec, 0);
        for n in 1..=lim {
            let cn = x3.evaluate_prec(n, prec);
            if cn.is_zero() {
                continue;
            }
            let nx = c.complex(n);
            let psi = psi_character_prec(&nx, &x3, prec).unwrap();
            s += psi * cn / Float::with_val(prec, n * n);
        }
        // terms are O(n^{-3}) so the remainder is O(lim^{-2})
        assert!(err(&v, &s) < 1e-10);
    }

    #[test]
    fn f_character_reality() {
        let c = PrecisionContext::default();
        for label in ["3.1", "4.1", "5.2"] {
            for k in 0..3 {
                let v = f_character(&c.complex(1.5), k, &chi(label), &c).unwrap();
                assert!(v.imag().to_f64().abs() < 1e-70, "{label} k={k}");
            }
        }
    }

    #[test]
    fn f_character_k0_symmetry() {
        // √α F₀(α, χ) = √β F₀(β, χ), αβ = 1
        let c = PrecisionContext::default();
        for label in ["4.1", "5.2", "5.1"] {
            let ch = chi(label);
            let a = f_character(&c.complex(2), 0, &ch, &c).unwrap();
            let b = f_character(&c.complex(0.5), 0, &ch, &c).unwrap();
            let lhs = a * Float::with_val(c.prec(), 2u32).sqrt();
            let rhs = b * Float::with_val(c.prec(), 0.5).sqrt();
            assert!(err(&lhs, &rhs) < 1e-70, "{label}");
        }
    }

    #[test]
    fn f_character_rejects_bad_input() {
        let c = PrecisionContext::default();
        assert!(f_character(&c.complex(1), 1, &chi("6.1"), &c).is_err());
        assert!(f_character(&c.complex(-1), 1, &chi("4.1"), &c).is_err());
        assert!(psi_character(&c.complex(-3), &chi("4.1"), &c).is_err());
    }
}
