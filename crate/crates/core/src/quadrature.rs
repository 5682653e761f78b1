//! Gauss–Legendre panels and trapezoidal circle quadrature.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::float::Constant;
use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::precision::PrecisionContext;

/// Largest node count tried by the adaptive Gauss–Legendre driver.
pub const GL_NODE_CAP: usize = 1024;
/// Largest node count tried by the adaptive circle driver.
pub const CIRCLE_NODE_CAP: usize = 8192;

/// Nodes and weights on [-1, 1].
#[derive(Debug)]
pub struct GaussLegendreRule {
    pub nodes: Vec<Float>,
    pub weights: Vec<Float>,
}

type RuleCache = Mutex<HashMap<(usize, u32), Arc<GaussLegendreRule>>>;

fn rule_cache() -> &'static RuleCache {
    static CACHE: OnceLock<RuleCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Legendre P_n(x) and P_n'(x) by the three-term recurrence.
fn legendre(n: usize, x: &Float) -> (Float, Float) {
    let prec = x.prec();
    let mut p0 = Float::with_val(prec, 1);
    let mut p1 = x.clone();
    for j in 2..=n {
        let jf = j as u32;
        let mut p2 = Float::with_val(prec, x * &p1);
        p2 *= 2 * jf - 1;
        p2 -= Float::with_val(prec, &p0 * (jf - 1));
        p2 /= jf;
        p0 = p1;
        p1 = p2;
    }
    // P_n' = n (x P_n - P_{n-1}) / (x^2 - 1)
    let mut num = Float::with_val(prec, x * &p1);
    num -= &p0;
    num *= n as u32;
    let mut den = Float::with_val(prec, x * x);
    den -= 1;
    (p1, num / den)
}

/// Gauss–Legendre rule with `n` nodes at `prec` bits, cached.
pub fn gauss_legendre_rule(n: usize, prec: u32) -> Arc<GaussLegendreRule> {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    if let Some(r) = rule_cache().lock().unwrap().get(&(n, prec)) {
        return r.clone();
    }
    let work = prec + 32;
    let mut nodes = vec![Float::new(prec); n];
    let mut weights = vec![Float::new(prec); n];
    let half = n / 2;
    for i in 0..half {
        // f64 start, polished by Newton at doubling precision.
        let mut x0 = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..6 {
            let (p, dp) = legendre(n, &Float::with_val(64, x0));
            let step = (p / dp).to_f64();
            x0 -= step;
        }
        let mut x = Float::with_val(53, x0);
        let mut p_bits = 53u32;
        loop {
            p_bits = (2 * p_bits).min(work);
            x.set_prec(p_bits);
            let (p, dp) = legendre(n, &x);
            x -= p / dp;
            if p_bits == work {
                let (p, dp) = legendre(n, &x);
                x -= p / dp;
                break;
            }
        }
        let (_, dp) = legendre(n, &x);
        let mut w = Float::with_val(work, &x * &x);
        w = Float::with_val(work, 1) - w;
        w *= Float::with_val(work, &dp * &dp);
        let w = Float::with_val(work, 2) / w;
        nodes[i] = Float::with_val(prec, -&x);
        nodes[n - 1 - i] = Float::with_val(prec, &x);
        weights[i] = Float::with_val(prec, &w);
        weights[n - 1 - i] = Float::with_val(prec, &w);
    }
    if n % 2 == 1 {
        let zero = Float::with_val(work, 0);
        let (_, dp) = legendre(n, &zero);
        nodes[half] = Float::with_val(prec, 0);
        weights[half] = Float::with_val(prec, 2 / Float::with_val(work, &dp * &dp));
    }
    let rule = Arc::new(GaussLegendreRule { nodes, weights });
    rule_cache()
        .lock()
        .unwrap()
        .insert((n, prec), rule.clone());
    rule
}

/// Fixed-order Gauss–Legendre approximation of ∫_a^b f.
pub fn gauss_legendre_panel<F>(f: F, a: &Float, b: &Float, nodes: usize, ctx: &PrecisionContext) -> Result<Complex>
where
    F: Fn(&Float) -> Result<Complex>,
{
    gl_panel_prec(&f, a, b, nodes, ctx.prec())
}

pub(crate) fn gl_panel_prec<F>(f: &F, a: &Float, b: &Float, nodes: usize, prec: u32) -> Result<Complex>
where
    F: Fn(&Float) -> Result<Complex> + ?Sized,
{
    if nodes < 1 {
        return Err(Error::Config("Gauss-Legendre needs at least one node".into()));
    }
    let rule = gauss_legendre_rule(nodes, prec);
    let half = Float::with_val(prec, b - a) / 2u32;
    let mid = Float::with_val(prec, a + b) / 2u32;
    let mut acc = Complex::with_val(prec, 0);
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        let t = Float::with_val(prec, x * &half) + &mid;
        let v = f(&t)?;
        acc += v * w;
    }
    Ok(acc * half)
}

/// Adaptive Gauss–Legendre: doubles the node count from `start` until two
/// successive estimates differ by at most `tol`.
pub fn gauss_legendre_adaptive<F>(
    f: F,
    a: &Float,
    b: &Float,
    start: usize,
    tol: &Float,
    ctx: &PrecisionContext,
) -> Result<Complex>
where
    F: Fn(&Float) -> Result<Complex>,
{
    gl_adaptive_prec(&f, a, b, start, tol, ctx.prec())
}

pub(crate) fn gl_adaptive_prec<F>(
    f: &F,
    a: &Float,
    b: &Float,
    start: usize,
    tol: &Float,
    prec: u32,
) -> Result<Complex>
where
    F: Fn(&Float) -> Result<Complex> + ?Sized,
{
    let mut n = start.max(2);
    let mut prev = gl_panel_prec(f, a, b, n, prec)?;
    loop {
        let next_n = n * 2;
        if next_n > GL_NODE_CAP {
            let last = prev.clone();
            return Err(Error::Convergence {
                what: format!("Gauss-Legendre on [{}, {}]", a.to_f64(), b.to_f64()),
                last: format!("{:.20e}", last.real().to_f64()),
                previous: format!("node cap {GL_NODE_CAP} reached"),
            });
        }
        let cur = gl_panel_prec(f, a, b, next_n, prec)?;
        let diff = Complex::with_val(prec, &cur - &prev);
        if Float::with_val(prec, diff.abs_ref()) <= *tol {
            return Ok(cur);
        }
        prev = cur;
        n = next_n;
    }
}

/// Unit roots e^{2πi q/n}, q = 0..n.
pub(crate) fn unit_roots(n: usize, prec: u32) -> Vec<Complex> {
    let two_pi = Float::with_val(prec, Constant::Pi) * 2u32;
    (0..n)
        .map(|q| {
            let ang = Float::with_val(prec, &two_pi * q as u32) / n as u32;
            let (s, c) = ang.sin_cos(Float::new(prec));
            Complex::with_val(prec, (c, s))
        })
        .collect()
}

/// (1/2πi)∮ f(s) ds over |s − center| = radius with `nodes` equispaced points.
pub fn circle_quadrature<F>(
    f: F,
    center: &Complex,
    radius: &Float,
    nodes: usize,
    ctx: &PrecisionContext,
) -> Result<Complex>
where
    F: Fn(&Complex) -> Result<Complex>,
{
    if nodes < 8 {
        return Err(Error::Config("circle quadrature needs at least 8 nodes".into()));
    }
    let prec = ctx.prec();
    let roots = unit_roots(nodes, prec);
    let mut acc = Complex::with_val(prec, 0);
    for w in &roots {
        let h = Complex::with_val(prec, w * radius);
        let s = Complex::with_val(prec, center + &h);
        acc += f(&s)? * h;
    }
    Ok(acc / nodes as u32)
}

/// Circle quadrature with node doubling (previous samples are reused) until
/// successive estimates agree to `tol`.
pub fn circle_quadrature_adaptive<F>(
    f: F,
    center: &Complex,
    radius: &Float,
    start: usize,
    tol: &Float,
    ctx: &PrecisionContext,
) -> Result<Complex>
where
    F: Fn(&Complex) -> Result<Complex>,
{
    circle_adaptive_prec(&f, center, radius, start, tol, ctx.prec())
}

pub(crate) fn circle_adaptive_prec<F>(
    f: &F,
    center: &Complex,
    radius: &Float,
    start: usize,
    tol: &Float,
    prec: u32,
) -> Result<Complex>
where
    F: Fn(&Complex) -> Result<Complex> + ?Sized,
{
    let mut n = start.max(8);
    let sample = |w: &Complex| -> Result<Complex> {
        let h = Complex::with_val(prec, w * radius);
        let s = Complex::with_val(prec, center + &h);
        Ok(f(&s)? * h)
    };
    let mut sum = Complex::with_val(prec, 0);
    for w in unit_roots(n, prec) {
        sum += sample(&w)?;
    }
    let mut est = Complex::with_val(prec, &sum / n as u32);
    loop {
        let m = 2 * n;
        if m > CIRCLE_NODE_CAP {
            return Err(Error::Convergence {
                what: "circle quadrature".into(),
                last: format!("{:.20e}", est.real().to_f64()),
                previous: format!("node cap {CIRCLE_NODE_CAP} reached"),
            });
        }
        let roots = unit_roots(m, prec);
        for w in roots.iter().skip(1).step_by(2) {
            sum += sample(w)?;
        }
        let next = Complex::with_val(prec, &sum / m as u32);
        let diff = Complex::with_val(prec, &next - &est);
        let done = Float::with_val(prec, diff.abs_ref()) <= *tol;
        est = next;
        n = m;
        if done {
            return Ok(est);
        }
    }
}

/// Taylor coefficients a_m = f^{(m)}(center)/m! for m in `orders`, from a
/// `nodes`-point trapezoid rule on the circle of the given radius.
pub(crate) fn circle_taylor_coefficients(
    samples: &[Complex],
    radius: &Float,
    orders: &[usize],
    prec: u32,
) -> Vec<Complex> {
    let k = samples.len();
    let roots = unit_roots(k, prec);
    let mut out = Vec::with_capacity(orders.len());
    for &m in orders {
        let mut acc = Complex::with_val(prec, 0);
        for (q, v) in samples.iter().enumerate() {
            // conj(ω^{qm})
            let idx = (q * m) % k;
            let w = &roots[idx];
            let wc = Complex::with_val(prec, w.conj_ref());
            acc += wc * v;
        }
        acc /= k as u32;
        let rm = Float::with_val(prec, rug::ops::Pow::pow(radius, m as u32));
        out.push(acc / rm);
    }
    out
}
