//! Precision context and small numeric helpers shared by every evaluator.

use std::fmt;
use std::sync::OnceLock;

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float};

use crate::error::{Error, Result};

/// Arbitrary-precision real scalar.
pub type HpReal = Float;
/// Arbitrary-precision complex scalar (principal branch for log and powers).
pub type HpComplex = Complex;

pub const MIN_BITS: u32 = 64;
pub const MIN_GUARD_BITS: u32 = 16;
pub const DEFAULT_GUARD_BITS: u32 = 32;
pub const DEFAULT_BITS: u32 = 256;
pub const DEFAULT_CHECK_TOL: f64 = 1e-40;
pub const DEFAULT_INTEGRAL_TOL: f64 = 1e-20;

/// Working precision plus the tolerances derived from it.
///
/// Evaluators run at `bits + guard_bits`; `check_tol` is the absolute
/// threshold used by identity checks.
pub struct PrecisionContext {
    bits: u32,
    guard_bits: u32,
    check_tol: f64,
    integral_tol: f64,
    gamma1: OnceLock<Float>,
}

impl PrecisionContext {
    pub fn new(bits: u32, check_tol: f64) -> Result<Self> {
        Self::with_guard_bits(bits, DEFAULT_GUARD_BITS, check_tol)
    }

    pub fn with_guard_bits(bits: u32, guard_bits: u32, check_tol: f64) -> Result<Self> {
        if bits < MIN_BITS {
            return Err(Error::Precision(format!(
                "bits = {bits} is below the minimum of {MIN_BITS}"
            )));
        }
        if guard_bits < MIN_GUARD_BITS {
            return Err(Error::Precision(format!(
                "guard_bits = {guard_bits} is below the minimum of {MIN_GUARD_BITS}"
            )));
        }
        if !(check_tol.is_finite() && check_tol > 0.0) {
            return Err(Error::Precision(format!(
                "tolerance {check_tol} must be positive and finite"
            )));
        }
        let floor_log2 = -(bits as f64) + guard_bits as f64 + 8.0;
        if check_tol.log2() < floor_log2 {
            return Err(Error::Precision(format!(
                "tolerance {check_tol:e} is unachievable at {bits} bits (floor 2^{floor_log2})"
            )));
        }
        Ok(PrecisionContext {
            bits,
            guard_bits,
            check_tol,
            integral_tol: DEFAULT_INTEGRAL_TOL.max(check_tol),
            gamma1: OnceLock::new(),
        })
    }

    /// Overrides the tolerance used by integral-based identities.
    pub fn with_integral_tol(mut self, tol: f64) -> Result<Self> {
        if !(tol.is_finite() && tol > 0.0) {
            return Err(Error::Precision(format!("integral tolerance {tol} must be positive")));
        }
        self.integral_tol = tol;
        Ok(self)
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn guard_bits(&self) -> u32 {
        self.guard_bits
    }

    pub fn check_tol(&self) -> f64 {
        self.check_tol
    }

    pub fn integral_tol(&self) -> f64 {
        self.integral_tol
    }

    /// Precision used for intermediate arithmetic.
    pub fn prec(&self) -> u32 {
        self.bits + self.guard_bits
    }

    /// Unit roundoff of the working precision.
    pub fn eps(&self) -> Float {
        Float::with_val(self.prec(), Float::i_exp(1, -(self.prec() as i32)))
    }

    pub fn real<T>(&self, v: T) -> Float
    where
        Float: rug::Assign<T>,
    {
        Float::with_val(self.prec(), v)
    }

    pub fn complex<T>(&self, v: T) -> Complex
    where
        Complex: rug::Assign<T>,
    {
        Complex::with_val(self.prec(), v)
    }

    pub fn pi(&self) -> Float {
        Float::with_val(self.prec(), Constant::Pi)
    }

    pub fn euler(&self) -> Float {
        Float::with_val(self.prec(), Constant::Euler)
    }

    /// A context with the same guard bits and the tolerance scaled to `bits`.
    pub fn rescaled(&self, bits: u32, check_tol: f64) -> Result<Self> {
        let ctx = Self::with_guard_bits(bits, self.guard_bits, check_tol)?;
        ctx.with_integral_tol(self.integral_tol)
    }

    pub(crate) fn gamma1_cell(&self) -> &OnceLock<Float> {
        &self.gamma1
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self::new(DEFAULT_BITS, DEFAULT_CHECK_TOL).expect("default context is valid")
    }
}

impl Clone for PrecisionContext {
    fn clone(&self) -> Self {
        let gamma1 = OnceLock::new();
        if let Some(v) = self.gamma1.get() {
            let _ = gamma1.set(v.clone());
        }
        PrecisionContext {
            bits: self.bits,
            guard_bits: self.guard_bits,
            check_tol: self.check_tol,
            integral_tol: self.integral_tol,
            gamma1,
        }
    }
}

impl fmt::Debug for PrecisionContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PrecisionContext")
            .field("bits", &self.bits)
            .field("guard_bits", &self.guard_bits)
            .field("check_tol", &self.check_tol)
            .field("integral_tol", &self.integral_tol)
            .finish()
    }
}

/// Shorthand for `PrecisionContext::new`.
pub fn make_context(bits: u32, check_tol: f64) -> Result<PrecisionContext> {
    PrecisionContext::new(bits, check_tol)
}

/// Decimal digits that a `bits`-bit mantissa carries.
pub fn decimal_digits(bits: u32) -> usize {
    ((bits as f64) * std::f64::consts::LOG10_2).floor() as usize
}

/// `|z|` as an f64 (saturating), used for planning.
pub(crate) fn abs_f64(z: &Complex) -> f64 {
    let a = Float::with_val(64, z.abs_ref());
    a.to_f64()
}

pub(crate) fn arg_f64(z: &Complex) -> f64 {
    let a = Float::with_val(64, z.arg_ref());
    a.to_f64()
}

pub(crate) fn log2_float(a: &Float) -> f64 {
    if a.is_zero() {
        return f64::NEG_INFINITY;
    }
    if !a.is_finite() {
        return f64::INFINITY;
    }
    let (m, e) = a.to_f64_exp();
    m.abs().log2() + e as f64
}

/// `n^{-s}` for positive real n.
#[cfg(test)]
pub(crate) fn real_pow_neg(n: &Float, s: &Complex) -> Complex {
    let l = Float::with_val(s.prec().0, n.ln_ref());
    let e = -Complex::with_val(s.prec().0, s * &l);
    e.exp()
}

pub(crate) fn powi(z: &Complex, n: i32) -> Complex {
    Complex::with_val(z.prec().0, z.pow(n))
}
