//! Truncated power series in fixed point and the letter operators.
//!
//! Coefficients are integers scaled by `2^frac_bits`; every operator the
//! iterated-integral kernel needs (prefix sums, halving, division by a small
//! integer) stays in integer arithmetic.

use rug::{Assign, Float, Integer};

use super::bigreal::BigReal;
use crate::error::{Error, Result};
use crate::indices::Letter;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<Integer>,
    frac_bits: u32,
}

impl TruncatedSeries {
    /// The constant series 1 with coefficients `f_0..f_order`.
    pub fn one(order: usize, frac_bits: u32) -> Self {
        assert!(order >= 1, "truncation order must be at least 1");
        let mut coeffs = vec![Integer::new(); order + 1];
        coeffs[0] = Integer::from(1) << frac_bits;
        TruncatedSeries { coeffs, frac_bits }
    }

    pub fn zero(order: usize, frac_bits: u32) -> Self {
        assert!(order >= 1, "truncation order must be at least 1");
        TruncatedSeries {
            coeffs: vec![Integer::new(); order + 1],
            frac_bits,
        }
    }

    /// Build from real coefficients, rounding each to the fixed-point grid.
    pub fn from_floats(coeffs: &[Float], frac_bits: u32) -> Self {
        assert!(coeffs.len() >= 2, "truncation order must be at least 1");
        let coeffs = coeffs
            .iter()
            .map(|c| {
                let scaled = Float::with_val(c.prec() + frac_bits, c << frac_bits);
                scaled.to_integer().expect("finite coefficient")
            })
            .collect();
        TruncatedSeries { coeffs, frac_bits }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn frac_bits(&self) -> u32 {
        self.frac_bits
    }

    pub fn raw(&self) -> &[Integer] {
        &self.coeffs
    }

    pub(crate) fn coeffs_mut(&mut self) -> &mut [Integer] {
        &mut self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Float {
        Float::with_val(self.frac_bits.max(64), &self.coeffs[n]) >> self.frac_bits
    }

    /// `|f_N| 2^{-N} * 4`, in units of `2^{-frac_bits}`.
    fn tail_raw(&self) -> Float {
        let n = self.order();
        Float::with_val(53, &self.coeffs[n]).abs() >> (n as i32 - 2)
    }
}

/// A signed sum of letters applied as one operator; `Omega_1` is
/// `letter(+1) - letter(-1)` and mirrors to `letter(0) + letter(2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Form {
    terms: [(Letter, i8); 2],
    len: u8,
}

impl Form {
    pub const fn letter(l: Letter) -> Form {
        Form {
            terms: [(l, 1), (l, 0)],
            len: 1,
        }
    }

    pub const fn signed(l: Letter, sign: i8) -> Form {
        Form {
            terms: [(l, sign), (l, 0)],
            len: 1,
        }
    }

    /// `2 dt / (1 - t^2)`.
    pub const fn omega_one() -> Form {
        Form {
            terms: [(Letter::PlusOne, 1), (Letter::MinusOne, -1)],
            len: 2,
        }
    }

    pub fn terms(&self) -> &[(Letter, i8)] {
        &self.terms[..self.len as usize]
    }

    pub fn contains(&self, l: Letter) -> bool {
        self.terms().iter().any(|&(x, _)| x == l)
    }

    /// Image under `t -> 1 - t`, with orientation signs folded in.
    pub fn mirrored(&self) -> Form {
        let mut out = *self;
        for t in out.terms.iter_mut().take(self.len as usize) {
            let (l, s) = mirror_letter(t.0);
            *t = (l, t.1 * s);
        }
        out
    }
}

/// `0 -> +1`, `+1 -> 0`, `-1 -> -(2)`, `2 -> -(-1)`.
pub fn mirror_letter(l: Letter) -> (Letter, i8) {
    match l {
        Letter::Zero => (Letter::PlusOne, 1),
        Letter::PlusOne => (Letter::Zero, 1),
        Letter::MinusOne => (Letter::Two, -1),
        Letter::Two => (Letter::MinusOne, -1),
    }
}

/// `g(t) = int_0^t f(s) (form c)(s)`.
pub fn apply_letter(f: &TruncatedSeries, c: Letter) -> Result<TruncatedSeries> {
    apply_form(f, &Form::letter(c))
}

pub fn apply_form(f: &TruncatedSeries, form: &Form) -> Result<TruncatedSeries> {
    let mut out = TruncatedSeries::zero(f.order(), f.frac_bits);
    apply_form_into(f, form, &mut out.coeffs)?;
    Ok(out)
}

/// In-place kernel. Each letter contributes a numerator; one division by `n`
/// per coefficient integrates the sum.
pub(crate) fn apply_form_into(
    f: &TruncatedSeries,
    form: &Form,
    out: &mut [Integer],
) -> Result<()> {
    let fc = &f.coeffs;
    if form.contains(Letter::Zero) && fc[0] != 0 {
        return Err(Error::LogDivergence);
    }
    let terms = form.terms();
    // running state h_{n-1} for each non-zero letter
    let mut state: [Integer; 2] = [Integer::new(), Integer::new()];
    let mut num = Integer::new();
    out[0] = Integer::new();
    for n in 1..fc.len() {
        num.assign(0);
        for (k, &(letter, sign)) in terms.iter().enumerate() {
            let h = &mut state[k];
            match letter {
                Letter::Zero => add_signed(&mut num, &fc[n], sign),
                Letter::PlusOne => {
                    // h_{n-1} = f_0 + ... + f_{n-1}
                    *h += &fc[n - 1];
                    add_signed(&mut num, h, sign);
                }
                Letter::MinusOne => {
                    // h_m + h_{m-1} = f_m, form carries an overall minus
                    *h = Integer::from(&fc[n - 1] - &*h);
                    add_signed(&mut num, h, -sign);
                }
                Letter::Two => {
                    // h_m = (f_m + h_{m-1}) / 2
                    *h += &fc[n - 1];
                    *h >>= 1;
                    add_signed(&mut num, h, sign);
                }
            }
        }
        out[n] = Integer::from(&num / n as u32);
    }
    Ok(())
}

fn add_signed(acc: &mut Integer, x: &Integer, sign: i8) {
    if sign >= 0 {
        *acc += x;
    } else {
        *acc -= x;
    }
}

/// Fixed-point Horner evaluation at `t = 1/2`; returns the raw scaled value and
/// the tail estimate in the same units.
pub(crate) fn eval_at_half_raw(f: &TruncatedSeries) -> (Integer, Float) {
    let c = &f.coeffs;
    let mut v = c[c.len() - 1].clone();
    for n in (0..c.len() - 1).rev() {
        v >>= 1;
        v += &c[n];
    }
    (v, f.tail_raw())
}

/// `f(1/2)` with the truncation tail and rounding folded into the error.
pub fn eval_at_half(f: &TruncatedSeries) -> BigReal {
    let (v, tail) = eval_at_half_raw(f);
    let bits = f.frac_bits.max(64);
    let value = Float::with_val(bits, &v) >> f.frac_bits;
    let err = (tail + 2u32) >> f.frac_bits;
    BigReal::new(value, err)
}
