//! Dirichlet characters built from a CRT decomposition of (ℤ/dℤ)*.
//!
//! Values are stored exactly as exponents of a primitive L-th root of unity,
//! where L is the exponent of the group.

use std::fmt;
use std::str::FromStr;

use rug::float::Constant;
use rug::{Complex, Float};

use crate::error::{Error, Result};

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

pub(crate) fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn mult_order(g: u64, m: u64) -> u64 {
    let mut x = g % m;
    let mut k = 1;
    while x != 1 {
        x = mul_mod(x, g, m);
        k += 1;
    }
    k
}

#[cfg(test)]
fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

/// x ≡ r (mod q), x ≡ 1 (mod d/q), with gcd(q, d/q) = 1.
fn crt_lift(r: u64, q: u64, d: u64) -> u64 {
    let other = d / q;
    if other == 1 {
        return r % d;
    }
    (0..q)
        .map(|t| 1 + t * other)
        .find(|x| x % q == r % q)
        .expect("CRT lift exists for coprime moduli")
}

/// Generators of (ℤ/dℤ)* with their orders, in canonical order: primes
/// ascending; for 2^e (e ≥ 3) the pair (−1, 5).
fn generators(d: u64) -> Vec<(u64, u64)> {
    let mut gens = Vec::new();
    for (p, e) in factorize(d) {
        let q = p.pow(e);
        if p == 2 {
            match e {
                1 => {}
                2 => gens.push((crt_lift(3, q, d), 2)),
                _ => {
                    gens.push((crt_lift(q - 1, q, d), 2));
                    gens.push((crt_lift(5, q, d), q / 4));
                }
            }
        } else {
            let phi = q / p * (p - 1);
            let g = (2..q)
                .find(|&g| gcd(g, p) == 1 && mult_order(g, q) == phi)
                .expect("odd prime powers have primitive roots");
            gens.push((crt_lift(g, q, d), phi));
        }
    }
    gens
}

/// Discrete-log data for one modulus, shared by all its characters.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Group {
    modulus: u64,
    orders: Vec<u64>,
    exponent: u64,
    /// For each residue: exponent vector, or None for non-units.
    dlog: Vec<Option<Vec<u64>>>,
}

impl Group {
    fn new(d: u64) -> Self {
        let gens = generators(d);
        let orders: Vec<u64> = gens.iter().map(|g| g.1).collect();
        let exponent = orders.iter().fold(1, |a, &o| lcm(a, o));
        let mut dlog = vec![None; d as usize];
        let total: u64 = orders.iter().product();
        for idx in 0..total {
            let mut e = vec![0u64; gens.len()];
            let mut rest = idx;
            for i in (0..gens.len()).rev() {
                e[i] = rest % orders[i];
                rest /= orders[i];
            }
            let mut x = 1 % d;
            for (i, &(g, _)) in gens.iter().enumerate() {
                for _ in 0..e[i] {
                    x = mul_mod(x, g, d);
                }
            }
            dlog[x as usize] = Some(e);
        }
        Group {
            modulus: d,
            orders,
            exponent,
            dlog,
        }
    }
}

/// A Dirichlet character modulo d.
#[derive(Clone, PartialEq, Eq)]
pub struct DirichletCharacter {
    modulus: u64,
    index: usize,
    /// exponent vector on the canonical generators
    exps: Vec<u64>,
    /// L = exponent of the group; χ(n) = e^{2πi v_n / L}
    order: u64,
    /// v_n for each residue, None on non-units
    values: Vec<Option<u64>>,
    parity: u8,
    primitive: bool,
}

impl fmt::Debug for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DirichletCharacter({})", self.label())
    }
}

impl fmt::Display for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

fn build(group: &Group, index: usize) -> DirichletCharacter {
    let d = group.modulus;
    let l = group.exponent;
    let mut exps = vec![0u64; group.orders.len()];
    let mut rest = index as u64;
    for i in (0..exps.len()).rev() {
        exps[i] = rest % group.orders[i];
        rest /= group.orders[i];
    }
    let values: Vec<Option<u64>> = group
        .dlog
        .iter()
        .map(|e| {
            e.as_ref().map(|e| {
                e.iter()
                    .zip(&exps)
                    .zip(&group.orders)
                    .fold(0u64, |acc, ((&ei, &ai), &oi)| (acc + ei * ai * (l / oi)) % l)
            })
        })
        .collect();
    let minus_one = values[(d - 1) as usize].expect("-1 is a unit");
    let parity = if minus_one == 0 { 0 } else { 1 };
    let mut chi = DirichletCharacter {
        modulus: d,
        index,
        exps,
        order: l,
        values,
        parity,
        primitive: false,
    };
    chi.primitive = chi.compute_primitive();
    chi
}

/// All φ(d) characters mod d in canonical order (index 0 is principal).
pub fn characters_mod(d: u64) -> Result<Vec<DirichletCharacter>> {
    if d < 3 {
        return Err(Error::Domain(format!("characters_mod needs d >= 3, got {d}")));
    }
    let group = Group::new(d);
    let total: u64 = group.orders.iter().product();
    Ok((0..total as usize).map(|j| build(&group, j)).collect())
}

/// The character with canonical index `j` mod `d`.
pub fn character(d: u64, j: usize) -> Result<DirichletCharacter> {
    if d < 3 {
        return Err(Error::Domain(format!("modulus must be >= 3, got {d}")));
    }
    let group = Group::new(d);
    let total: u64 = group.orders.iter().product();
    if j as u64 >= total {
        return Err(Error::Domain(format!("index {j} out of range: there are {total} characters mod {d}")));
    }
    Ok(build(&group, j))
}

impl FromStr for DirichletCharacter {
    type Err = Error;

    /// Parses the "d.j" label format.
    fn from_str(s: &str) -> Result<Self> {
        let (d, j) = s
            .trim()
            .split_once('.')
            .ok_or_else(|| Error::Parse(format!("character label '{s}' is not of the form d.j")))?;
        let d: u64 = d
            .parse()
            .map_err(|_| Error::Parse(format!("bad modulus in character label '{s}'")))?;
        let j: usize = j
            .parse()
            .map_err(|_| Error::Parse(format!("bad index in character label '{s}'")))?;
        character(d, j)
    }
}

/// An exact value ζ_L^v, or 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharValue {
    Zero,
    Root { exponent: u64, order: u64 },
}

/// e^{2πi v/L} at `prec`, exact for the four axis points.
pub fn root_of_unity(v: u64, l: u64, prec: u32) -> Complex {
    let g = gcd(v % l, l);
    let (v, l) = ((v % l) / g, l / g);
    match (v, l) {
        (0, _) => Complex::with_val(prec, 1),
        (1, 2) => Complex::with_val(prec, -1),
        (1, 4) => Complex::with_val(prec, (0, 1)),
        (3, 4) => Complex::with_val(prec, (0, -1)),
        _ => {
            let ang = Float::with_val(prec, Constant::Pi) * 2u32 * v / l;
            let (s, c) = ang.sin_cos(Float::new(prec));
            Complex::with_val(prec, (c, s))
        }
    }
}

impl DirichletCharacter {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn index(&self) -> usize {
        self.index
    }

    /// Canonical "d.j" label.
    pub fn label(&self) -> String {
        format!("{}.{}", self.modulus, self.index)
    }

    /// b with χ(−1) = (−1)^b.
    pub fn parity(&self) -> u8 {
        self.parity
    }

    pub fn is_primitive(&self) -> bool {
        self.primitive
    }

    pub fn is_principal(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// True when every value is ±1 or 0.
    pub fn is_real(&self) -> bool {
        self.values
            .iter()
            .flatten()
            .all(|&v| v == 0 || 2 * v == self.order)
    }

    /// Order L of the root of unity used to encode values.
    pub fn value_order(&self) -> u64 {
        self.order
    }

    pub fn exponent_vector(&self) -> &[u64] {
        &self.exps
    }

    /// Exact value χ(n).
    pub fn value(&self, n: i64) -> CharValue {
        let r = n.rem_euclid(self.modulus as i64) as usize;
        match self.values[r] {
            None => CharValue::Zero,
            Some(v) => CharValue::Root {
                exponent: v,
                order: self.order,
            },
        }
    }

    /// Exponent v with χ(n) = e^{2πi v/L}, None on non-units.
    pub fn value_exponent(&self, n: i64) -> Option<u64> {
        let r = n.rem_euclid(self.modulus as i64) as usize;
        self.values[r]
    }

    /// χ(n) rendered at `prec` bits.
    pub fn evaluate_prec(&self, n: i64, prec: u32) -> Complex {
        match self.value_exponent(n) {
            None => Complex::with_val(prec, 0),
            Some(v) => root_of_unity(v, self.order, prec),
        }
    }

    /// χ(n) rendered at the context's working precision.
    pub fn evaluate(&self, n: i64, ctx: &crate::PrecisionContext) -> Complex {
        self.evaluate_prec(n, ctx.prec())
    }

    /// Pointwise complex conjugate.
    pub fn conjugate(&self) -> DirichletCharacter {
        let group = Group::new(self.modulus);
        let exps: Vec<u64> = self
            .exps
            .iter()
            .zip(&group.orders)
            .map(|(&a, &o)| (o - a) % o)
            .collect();
        let mut index = 0u64;
        for (a, o) in exps.iter().zip(&group.orders) {
            index = index * o + a;
        }
        build(&group, index as usize)
    }

    /// Smallest modulus from which the character is induced.
    pub fn conductor(&self) -> u64 {
        let d = self.modulus;
        let mut divisors: Vec<u64> = (1..=d).filter(|m| d % m == 0).collect();
        divisors.sort_unstable();
        for m in divisors {
            if self.trivial_on_kernel(m) {
                return m;
            }
        }
        d
    }

    /// χ is induced from modulus m iff χ(n) = 1 for all units n ≡ 1 (mod m).
    fn trivial_on_kernel(&self, m: u64) -> bool {
        let d = self.modulus;
        (0..d / m).all(|t| {
            let n = 1 + t * m;
            match self.values[(n % d) as usize] {
                None => true,
                Some(v) => v == 0,
            }
        })
    }

    fn compute_primitive(&self) -> bool {
        let d = self.modulus;
        !(1..d).any(|m| d % m == 0 && self.trivial_on_kernel(m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_moduli() {
        let c3 = characters_mod(3).unwrap();
        assert_eq!(c3.len(), 2);
        let nonprincipal: Vec<_> = c3.iter().filter(|c| !c.is_principal()).collect();
        assert_eq!(nonprincipal.len(), 1);
        assert_eq!(nonprincipal[0].parity(), 1);

        let c4 = characters_mod(4).unwrap();
        assert_eq!(c4.len(), 2);
        let chi = &c4[1];
        assert_eq!(chi.value_exponent(3), Some(1));
        assert_eq!(chi.value_order(), 2);
        assert_eq!(chi.value(6), CharValue::Zero);
        assert_eq!(chi.value_exponent(7), Some(1));
        assert_eq!(chi.value_exponent(1), Some(0));

        let c5 = characters_mod(5).unwrap();
        assert_eq!(c5.len(), 4);
        assert_eq!(c5.iter().filter(|c| c.is_real()).count(), 2);
        assert!(characters_mod(2).is_err());
    }

    #[test]
    fn mod5_labels() {
        let chi: DirichletCharacter = "5.1".parse().unwrap();
        // 2 is the smallest primitive root mod 5, so χ(2) = i.
        assert_eq!(chi.value_exponent(2), Some(1));
        assert_eq!(chi.value_order(), 4);
        assert_eq!(chi.parity(), 1);
        let conj = chi.conjugate();
        assert_eq!(conj.label(), "5.3");
        assert_eq!(conj.value_exponent(2), Some(3));
        assert_eq!(conj.conjugate(), chi);
        let even: DirichletCharacter = "5.2".parse().unwrap();
        assert!(even.is_real() && even.parity() == 0 && even.is_primitive());
        assert_eq!(even.conjugate(), even);
    }

    #[test]
    fn primitivity() {
        let c4: DirichletCharacter = "4.1".parse().unwrap();
        assert!(c4.is_primitive());
        // mod 6 nonprincipal: induced from mod 3
        let c6 = characters_mod(6).unwrap();
        assert_eq!(c6.len(), 2);
        assert!(!c6[1].is_primitive());
        assert_eq!(c6[1].conductor(), 3);
        // two real nonprincipal characters mod 8 are primitive, one is induced from mod 4
        let c8 = characters_mod(8).unwrap();
        let prim_real: Vec<_> = c8.iter().filter(|c| c.is_real() && c.is_primitive()).collect();
        assert_eq!(prim_real.len(), 2);
    }

    #[test]
    fn multiplicativity_and_zeros() {
        for d in 3..=200u64 {
            for chi in characters_mod(d).unwrap() {
                for m in 0..d {
                    let vm = chi.value_exponent(m as i64);
                    assert_eq!(vm.is_none(), gcd(m, d) > 1);
                    for n in 0..d {
                        let vn = chi.value_exponent(n as i64);
                        let vmn = chi.value_exponent(((m * n) % d) as i64);
                        match (vm, vn) {
                            (Some(a), Some(b)) => assert_eq!(vmn, Some((a + b) % chi.value_order())),
                            _ => assert_eq!(vmn, None),
                        }
                    }
                }
                if d > 40 {
                    break;
                }
            }
        }
    }

    #[test]
    fn orthogonality_exact() {
        for d in 3..=60u64 {
            let chars = characters_mod(d).unwrap();
            let phi = euler_phi(d);
            assert_eq!(chars.len() as u64, phi);
            let l = chars[0].value_order();
            for a in &chars {
                for b in &chars {
                    // Σ_n ζ^{v_a(n) − v_b(n)} grouped by exponent
                    let mut counts = vec![0i64; l as usize];
                    for n in 0..d {
                        if let (Some(x), Some(y)) = (a.value_exponent(n as i64), b.value_exponent(n as i64)) {
                            counts[((x + l - y) % l) as usize] += 1;
                        }
                    }
                    let s = counts
                        .iter()
                        .enumerate()
                        .fold(Complex::with_val(80, 0), |acc, (e, &c)| acc + root_of_unity(e as u64, l, 80) * c);
                    let want = if a == b { phi as f64 } else { 0.0 };
                    let diff = Complex::with_val(80, &s - want);
                    assert!(Float::with_val(53, diff.abs_ref()).to_f64() < 1e-15, "d={d}");
                }
            }
        }
    }

    #[test]
    fn parity_and_sums() {
        for d in 3..=40u64 {
            for chi in characters_mod(d).unwrap() {
                let minus = chi.value_exponent(d as i64 - 1).unwrap();
                let expect = if chi.parity() == 0 { 0 } else { chi.value_order() / 2 };
                assert_eq!(minus, expect);
                if !chi.is_principal() {
                    let mut s = Complex::with_val(80, 0);
                    for a in 1..=d {
                        s += chi.evaluate_prec(a as i64, 80);
                    }
                    assert!(Float::with_val(53, s.abs_ref()).to_f64() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn enumeration_is_deterministic() {
        for d in [12u64, 15, 16, 20, 24] {
            let a = characters_mod(d).unwrap();
            let b = characters_mod(d).unwrap();
            assert_eq!(a, b);
            for (j, chi) in a.iter().enumerate() {
                let parsed: DirichletCharacter = chi.label().parse().unwrap();
                assert_eq!(&parsed, chi);
                assert_eq!(chi.index(), j);
            }
        }
        assert!("4.2".parse::<DirichletCharacter>().is_err());
        assert!("x".parse::<DirichletCharacter>().is_err());
    }
}
