//! Exact Bernoulli numbers via tangent numbers.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::{Float, Integer, Rational};

/// B_{2k} for k = 0, 1, ... (grown on demand).
fn even_cache() -> &'static Mutex<Vec<Rational>> {
    static CACHE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(vec![Rational::from(1)]))
}

/// Tangent numbers T_1..T_n (Brent–Harvey in-place recurrence).
fn tangent_numbers(n: usize) -> Vec<Integer> {
    let mut t = vec![Integer::new(); n + 1];
    if n == 0 {
        return t;
    }
    t[1] = Integer::from(1);
    for k in 2..=n {
        t[k] = Integer::from(&t[k - 1] * (k as u64 - 1));
    }
    for k in 2..=n {
        for j in k..=n {
            let a = Integer::from(&t[j - 1] * (j as u64 - k as u64));
            let b = Integer::from(&t[j] * (j as u64 - k as u64 + 2));
            t[j] = a + b;
        }
    }
    t
}

fn extend_even(cache: &mut Vec<Rational>, upto_k: usize) {
    if cache.len() > upto_k {
        return;
    }
    let n = upto_k.max(2 * cache.len()).max(16);
    let t = tangent_numbers(n);
    cache.truncate(1);
    for (k, tk) in t.iter().enumerate().skip(1) {
        // B_{2k} = (-1)^{k-1} 2k T_k / (4^k (4^k - 1))
        let four_k = Integer::from(1) << (2 * k as u32);
        let den = Integer::from(&four_k - 1u32) * &four_k;
        let mut num = Integer::from(tk * (2 * k as u64));
        if k % 2 == 0 {
            num = -num;
        }
        cache.push(Rational::from((num, den)));
    }
}

/// Exact B_n with the B_1 = −1/2 convention.
pub fn bernoulli_number(n: usize) -> Rational {
    match n {
        0 => Rational::from(1),
        1 => Rational::from((-1, 2)),
        _ if n % 2 == 1 => Rational::new(),
        _ => {
            let mut c = even_cache().lock().unwrap();
            extend_even(&mut c, n / 2);
            c[n / 2].clone()
        }
    }
}

type FloatCache = Mutex<HashMap<u32, Arc<Vec<Float>>>>;

fn float_cache() -> &'static FloatCache {
    static CACHE: OnceLock<FloatCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// B_{2k} rounded to `prec` bits, for k = 0..count (index k holds B_{2k}).
/// The returned table may be longer than requested.
pub fn bernoulli_even_floats(count: usize, prec: u32) -> Arc<Vec<Float>> {
    let mut cache = float_cache().lock().unwrap();
    if let Some(t) = cache.get(&prec) {
        if t.len() > count {
            return t.clone();
        }
    }
    let want = count.max(32) + count / 2;
    let table = {
        let mut c = even_cache().lock().unwrap();
        extend_even(&mut c, want);
        c[..=want]
            .iter()
            .map(|b| Float::with_val(prec, b))
            .collect::<Vec<_>>()
    };
    let table = Arc::new(table);
    cache.insert(prec, table.clone());
    table
}

/// Exact Bernoulli polynomial B_n(x) = Σ C(n,i) B_i x^{n−i}.
pub fn bernoulli_polynomial(n: usize, x: &Rational) -> Rational {
    let mut acc = Rational::new();
    let mut binom = Integer::from(1);
    let mut xp = Rational::from(1);
    // accumulate from i = n down to 0 so that x^{n-i} grows
    let mut terms = Vec::with_capacity(n + 1);
    for i in 0..=n {
        terms.push(binom.clone());
        binom = binom * (n - i) as u64 / (i as u64 + 1);
    }
    for i in (0..=n).rev() {
        let b = bernoulli_number(i);
        if !b.is_zero() {
            acc += Rational::from(&b * &xp) * &terms[i];
        }
        xp *= x;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Σ_{k<n+1} C(n+1,k) B_k = 0, the classical recurrence.
    fn recurrence_oracle(n: usize) -> Vec<Rational> {
        let mut b: Vec<Rational> = vec![Rational::from(1)];
        for m in 1..=n {
            let mut s = Rational::new();
            let mut c = Integer::from(1);
            for (k, bk) in b.iter().enumerate() {
                s += Rational::from(bk * &c);
                c = c * (m + 1 - k) as u64 / (k as u64 + 1);
            }
            b.push(-s / (m as u64 + 1));
        }
        b
    }

    #[test]
    fn small_values() {
        assert_eq!(bernoulli_number(0), 1);
        assert_eq!(bernoulli_number(1), Rational::from((-1, 2)));
        assert_eq!(bernoulli_number(2), Rational::from((1, 6)));
        assert_eq!(bernoulli_number(12), Rational::from((-691, 2730)));
        assert_eq!(bernoulli_number(7), 0);
    }

    #[test]
    fn matches_recurrence() {
        let oracle = recurrence_oracle(80);
        for (n, b) in oracle.iter().enumerate() {
            assert_eq!(&bernoulli_number(n), b, "B_{n}");
        }
    }

    #[test]
    fn polynomial_values() {
        // B_2(x) = x^2 - x + 1/6
        let x = Rational::from((1, 3));
        assert_eq!(bernoulli_polynomial(2, &x), Rational::from((1, 9)) - Rational::from((1, 3)) + Rational::from((1, 6)));
        // B_n(1) = B_n for n != 1
        for n in [0usize, 2, 3, 6, 9] {
            assert_eq!(bernoulli_polynomial(n, &Rational::from(1)), bernoulli_number(n));
        }
        // B_n(1 - x) = (-1)^n B_n(x)
        let x = Rational::from((2, 7));
        let y = Rational::from((5, 7));
        for n in 0..12usize {
            let a = bernoulli_polynomial(n, &x);
            let b = bernoulli_polynomial(n, &y);
            if n % 2 == 0 {
                assert_eq!(a, b);
            } else {
                assert_eq!(a, -b);
            }
        }
    }

    #[test]
    fn float_table_is_rounded_exact_value() {
        let t = bernoulli_even_floats(40, 300);
        let exact = bernoulli_number(80);
        assert_eq!(t[40], Float::with_val(300, &exact));
    }
}
