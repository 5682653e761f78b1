#![allow(dead_code)]

use rug::{Complex, Float};

pub fn dist(a: &Complex, b: &Complex) -> f64 {
    let d = Complex::with_val(a.prec().0.max(b.prec().0), a - b);
    Float::with_val(64, d.abs_ref()).to_f64()
}

pub fn abs(a: &Complex) -> f64 {
    Float::with_val(64, a.abs_ref()).to_f64()
}
