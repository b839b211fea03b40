//! Iterated integrals over `[0, 1]` by splitting the path at `1/2`.
//!
//! `I(0; w; 1) = sum_{w = uv} I(0; u; 1/2) I(1/2; v; 1)`, and the second factor
//! is rewritten under `t -> 1 - t` as an integral over `[0, 1/2]` of the mirrored,
//! reversed word. Both sides then converge like `2^{-N}`.

use rug::{Float, Integer};

use super::bigreal::{BigReal, Precision};
use super::series::{apply_form_into, eval_at_half_raw, Form, TruncatedSeries};
use crate::error::{Error, Result};
use crate::indices::{EvalWord, Letter};

/// `I(0; w; 1)` for a word over `{0, +1, -1, 2}`.
///
/// The first letter must not be 0 and the last must not be +1.
pub fn chen_evaluate(w: &EvalWord, prec: Precision) -> Result<BigReal> {
    let forms: Vec<Form> = w.letters().iter().map(|&l| Form::letter(l)).collect();
    check_endpoints(&forms).map_err(|reason| Error::NotEvaluable(w.to_string(), reason))?;
    evaluate_unchecked(&forms, prec)
}

/// Same as [`chen_evaluate`] for words whose letters are signed letter sums.
pub fn chen_evaluate_forms(forms: &[Form], prec: Precision) -> Result<BigReal> {
    check_endpoints(forms).map_err(|reason| Error::NotEvaluable(format!("{forms:?}"), reason))?;
    evaluate_unchecked(forms, prec)
}

fn check_endpoints(forms: &[Form]) -> std::result::Result<(), &'static str> {
    match (forms.first(), forms.last()) {
        (Some(f), _) if f.contains(Letter::Zero) => Err("first letter is 0 (divergent at t = 0)"),
        (_, Some(l)) if l.contains(Letter::PlusOne) => Err("last letter is +1 (divergent at t = 1)"),
        _ => Ok(()),
    }
}

struct Pass {
    values: Vec<Integer>,
    tails: Vec<Float>,
}

/// Values at `1/2` of every prefix of `forms`, in one left-to-right sweep.
fn prefix_pass(forms: impl Iterator<Item = Form>, k: usize, prec: Precision) -> Result<Pass> {
    let f = prec.bits;
    let mut cur = TruncatedSeries::one(prec.terms, f);
    let mut next = TruncatedSeries::zero(prec.terms, f);
    let mut values = Vec::with_capacity(k + 1);
    let mut tails = Vec::with_capacity(k + 1);
    values.push(Integer::from(1) << f);
    tails.push(Float::with_val(53, 0));
    for form in forms {
        apply_form_into(&cur, &form, next.coeffs_mut())?;
        std::mem::swap(&mut cur, &mut next);
        let (v, t) = eval_at_half_raw(&cur);
        values.push(v);
        tails.push(t);
    }
    Ok(Pass { values, tails })
}

fn evaluate_unchecked(forms: &[Form], prec: Precision) -> Result<BigReal> {
    let k = forms.len();
    let f = prec.bits;
    if k == 0 {
        return Ok(BigReal::from_int(1, f));
    }
    let left = prefix_pass(forms.iter().copied(), k, prec)?;
    let right = prefix_pass(forms.iter().rev().map(Form::mirrored), k, prec)?;

    let mut acc = Integer::new();
    let mut err = Float::with_val(53, 0);
    let rounding = Float::with_val(53, 2 * (k + 2));
    for j in 0..=k {
        let (p, q) = (&left.values[j], &right.values[k - j]);
        acc += Integer::from(p * q);
        let pa = Float::with_val(53, p).abs();
        let qa = Float::with_val(53, q).abs();
        err += pa * (Float::with_val(53, &right.tails[k - j]) + &rounding);
        err += qa * (Float::with_val(53, &left.tails[j]) + &rounding);
    }
    let value = Float::with_val(f, &acc) >> (2 * f);
    let err = (err >> (2 * f)) + (Float::with_val(53, k + 1) >> f);
    Ok(BigReal::new(value, err))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::float::Constant;

    fn pi(bits: u32) -> Float {
        Float::with_val(bits, Constant::Pi)
    }

    fn w(s: &str) -> EvalWord {
        s.parse().unwrap()
    }

    #[test]
    fn zeta_two() {
        let prec = Precision::for_digits(40);
        let v = chen_evaluate(&w("+0"), prec).unwrap();
        let expect = Float::with_val(prec.bits, pi(prec.bits).square() / 6u32);
        let diff = Float::with_val(prec.bits, v.value() - &expect).abs();
        assert!(diff < 1e-40, "{diff}");
        assert!(diff <= *v.error());
        assert!(v.error().to_f64() < 1e-40);
    }

    #[test]
    fn alternating_zeta_two() {
        let prec = Precision::for_digits(40);
        let v = chen_evaluate(&w("-0"), prec).unwrap();
        let expect = Float::with_val(prec.bits, -pi(prec.bits).square() / 12u32);
        let diff = Float::with_val(prec.bits, v.value() - &expect).abs();
        assert!(diff < 1e-40, "{diff}");
    }

    #[test]
    fn log_two_from_single_letter() {
        // I(0; -1; 1) = -log 2
        let prec = Precision::for_digits(30);
        let v = chen_evaluate(&w("-"), prec).unwrap();
        let ln2 = Float::with_val(prec.bits, Constant::Log2);
        assert!(Float::with_val(prec.bits, v.value() + &ln2).abs() < 1e-30);
    }

    #[test]
    fn empty_word_is_one() {
        let v = chen_evaluate(&EvalWord::default(), Precision::for_digits(20)).unwrap();
        assert_eq!(*v.value(), 1);
    }

    #[test]
    fn endpoint_checks() {
        let p = Precision::for_digits(20);
        assert!(matches!(chen_evaluate(&w("0+0"), p), Err(Error::NotEvaluable(..))));
        assert!(matches!(chen_evaluate(&w("+0+"), p), Err(Error::NotEvaluable(..))));
        assert!(chen_evaluate(&w("+02"), p).is_ok());
    }

    #[test]
    fn omega_word_gives_mtv_two() {
        // T(2) = pi^2 / 4
        let prec = Precision::for_digits(40);
        let forms = [Form::omega_one(), Form::letter(Letter::Zero)];
        let v = chen_evaluate_forms(&forms, prec).unwrap();
        let expect = Float::with_val(prec.bits, pi(prec.bits).square() / 4u32);
        assert!(Float::with_val(prec.bits, v.value() - &expect).abs() < 1e-40);
    }
}
