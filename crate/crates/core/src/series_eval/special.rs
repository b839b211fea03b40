//! Gamma function and Gauss `2F1` at `z = -1`.

use std::sync::{Mutex, OnceLock};

use rug::{Float, Integer, Rational};

use super::bigreal::BigReal;
use super::constants::constants;
use crate::error::{Error, Result};

/// `B_0, B_1, ..., B_n` (with `B_1 = -1/2`), extended on demand.
fn bernoulli_upto(n: usize) -> Vec<Rational> {
    static CACHE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(vec![Rational::from(1)]));
    let mut b = cache.lock().expect("bernoulli cache poisoned");
    while b.len() <= n {
        let m = b.len();
        // sum_{k=0}^{m} C(m+1, k) B_k = 0
        let mut acc = Rational::new();
        let mut binom = Integer::from(1);
        for (k, bk) in b.iter().enumerate() {
            if k > 1 && k % 2 == 1 {
                // odd Bernoulli numbers beyond B_1 vanish
            } else {
                acc += Rational::from(bk * &binom);
            }
            binom = binom * (m + 1 - k) as u32 / (k + 1) as u32;
        }
        let bm = -acc / (m as u32 + 1);
        b.push(bm);
    }
    b[..=n].to_vec()
}

/// `Gamma(x)` for `x > 0` at the precision of `x`.
///
/// Shifts the argument up to `z = x + n >= 0.35 P`, applies Stirling's series
/// for `log Gamma(z)`, then divides by `x (x+1) ... (x+n-1)`.
pub fn gamma(x: &Float) -> Result<BigReal> {
    let bits = x.prec();
    if *x <= 0 {
        return Err(Error::Domain(format!("gamma needs x > 0, got {}", x.to_f64())));
    }
    let work = bits + 64;
    let target = (0.35 * bits as f64).ceil().max(10.0);
    let shift = (target - x.to_f64()).ceil().max(0.0) as u32;
    let xw = Float::with_val(work, x);
    let z = Float::with_val(work, &xw + shift);

    let c = constants(work);
    let two_pi = Float::with_val(work, &c.pi * 2u32);
    let ln_z = Float::with_val(work, z.ln_ref());
    let mut lg = Float::with_val(work, &z - 0.5f64) * &ln_z - &z + two_pi.ln() / 2u32;

    let eps = Float::with_val(53, 1) >> (work as i32 + 8);
    let z2 = Float::with_val(work, z.square_ref());
    let mut zpow = z.clone(); // z^{2k-1}
    let mut k = 1usize;
    loop {
        let b = bernoulli_upto(2 * k);
        let denom = Integer::from((2 * k) as u64 * (2 * k - 1) as u64);
        let coef = Rational::from(&b[2 * k] / denom);
        let term = Float::with_val(work, &coef) / &zpow;
        let small = Float::with_val(53, term.abs_ref()) < eps;
        lg += term;
        if small || k > 4 * work as usize {
            break;
        }
        zpow *= &z2;
        k += 1;
    }

    let mut value = lg.exp();
    let mut prod = Float::with_val(work, 1);
    for i in 0..shift {
        prod *= Float::with_val(work, &xw + i);
    }
    value /= prod;
    let out = Float::with_val(bits, &value);
    let err = Float::with_val(53, out.abs_ref()) >> (bits as i32 - 4);
    Ok(BigReal::new(out, err))
}

/// `F(a, b; c; -1)` via Pfaff: `2^{-a} F(a, c - b; c; 1/2)`.
pub fn hyp2f1_at_minus1(a: &Float, b: &Float, c: &Float) -> Result<BigReal> {
    let bits = a.prec().max(b.prec()).max(c.prec());
    if *c <= 0 && c.is_integer() {
        return Err(Error::HypergeometricPole(c.to_string_radix(10, Some(10))));
    }
    let work = bits + 32;
    let a = Float::with_val(work, a);
    let bb = Float::with_val(work, c - b);
    let c = Float::with_val(work, c);

    let eps = Float::with_val(53, 1) >> (bits as i32 + 8);
    let mut term = Float::with_val(work, 1);
    let mut sum = Float::with_val(work, 1);
    let min_terms = 2.0 * (a.to_f64().abs() + bb.to_f64().abs() + c.to_f64().abs()) + 10.0;
    let mut n = 0u32;
    let tail = loop {
        // term_{n+1} = term_n (a+n)(c-b+n) / ((c+n)(n+1)) / 2
        let num = Float::with_val(work, &a + n) * Float::with_val(work, &bb + n);
        let den = Float::with_val(work, &c + n) * (n + 1);
        term *= num;
        term /= den;
        term >>= 1;
        n += 1;
        sum += &term;
        if term.is_zero() {
            break Float::with_val(53, 0);
        }
        let ta = Float::with_val(53, term.abs_ref());
        if (n as f64) > min_terms && ta < Float::with_val(53, sum.abs_ref()) * &eps {
            // ratios are below 3/4 once n exceeds min_terms, so the tail is < 3|term|
            break ta * 3u32;
        }
        if n > 100 * work {
            break ta * 3u32;
        }
    };

    let two_pow = {
        let ln2 = &constants(work).log2;
        (-Float::with_val(work, &a * ln2)).exp()
    };
    let value = Float::with_val(bits, &sum * &two_pow);
    let err = Float::with_val(53, &tail * Float::with_val(53, &two_pow))
        + (Float::with_val(53, value.abs_ref()) >> (bits as i32 - 4));
    Ok(BigReal::new(value, err))
}
