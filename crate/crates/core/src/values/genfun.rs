//! Both sides of the height-one generating series identity
//!
//! `1 - sum_{m,n >= 1} T(1^{n-1}, m+1) X^m Y^n
//!    = 2 Gamma(1-X) Gamma(1-Y) / Gamma(1-X-Y) F(1-X, 1-Y; 1-X-Y; -1)`.

use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Float, Rational};

use super::evaluator::Evaluator;
use crate::error::{Error, Result};
use crate::indices::Index;
use crate::series_eval::{gamma, hyp2f1_at_minus1, BigReal};

/// Uniform bound on height-one T-values used for the truncation tail. By
/// duality `T(1^{n-1}, 2) = T(n+1) <= T(2)`, and the values decrease in `m`,
/// so every height-one value is below `pi^2 / 4 < 4`.
const HEIGHT_ONE_BOUND: u32 = 4;

/// `|X| <= 1/4` and `-1/4 <= Y <= 0`. `Y = 0` is the boundary case where
/// both sides equal 1.
pub fn check_genfun_box(x: &Rational, y: &Rational) -> Result<()> {
    let quarter = Rational::from((1, 4));
    if Rational::from(x.abs_ref()) > quarter || *y > 0 || *y < Rational::from(-&quarter) {
        return Err(Error::ParameterBox(format!(
            "need |X| <= 1/4 and -1/4 <= Y <= 0, got X = {x}, Y = {y}"
        )));
    }
    Ok(())
}

/// `C sum_{s > M} (s - 1) r^s`, the bound on the discarded terms with `m + n > M`.
fn tail_bound(r: &Rational, order: u32) -> Float {
    let r = Float::with_val(64, r);
    if r.is_zero() {
        return Float::with_val(53, 0);
    }
    let one_minus = Float::with_val(64, 1u32 - &r);
    let head = Float::with_val(64, (&r).pow(order + 1));
    let shape = Float::with_val(64, &one_minus * order) + &r;
    let t = head * shape / Float::with_val(64, one_minus.square_ref()) * HEIGHT_ONE_BOUND;
    Float::with_val(53, &t)
}

/// Smallest `M` whose tail bound falls below `10^{-digits} / 16`.
pub fn genfun_truncation_order(x: &Rational, y: &Rational, digits: u32) -> u32 {
    let r = std::cmp::max(Rational::from(x.abs_ref()), Rational::from(y.abs_ref()));
    let target = Float::with_val(64, Float::u_pow_u(10, digits)).recip() / 16u32;
    let mut m = 1;
    while tail_bound(&r, m) >= target {
        m += 1;
    }
    m
}

impl Evaluator {
    /// Left-hand side truncated at `m + n <= M`, with the tail bound in the error.
    pub fn genfun_lhs(&self, x: &Rational, y: &Rational) -> Result<BigReal> {
        check_genfun_box(x, y)?;
        let bits = self.precision().bits;
        let digits = self.precision().digits();
        let order = genfun_truncation_order(x, y, digits);
        let mut terms = Vec::new();
        if *x != 0 && *y != 0 {
            for s in 2..=order {
                for n in 1..s {
                    terms.push((n, s - n));
                }
            }
        }
        let parts = terms
            .par_iter()
            .map(|&(n, m)| {
                let coeff = Rational::from(x.pow(m)) * Rational::from(y.pow(n));
                self.mtv(&Index::height_one(n, m)).map(|v| v.mul_rational(&coeff))
            })
            .collect::<Result<Vec<_>>>()?;
        let sum = parts.iter().fold(BigReal::zero(bits), |acc, v| &acc + v);
        let r = std::cmp::max(Rational::from(x.abs_ref()), Rational::from(y.abs_ref()));
        let out = &BigReal::from_int(1, bits) - &sum;
        Ok(out.widen_error(&tail_bound(&r, order)))
    }

    /// Right-hand side from Gamma and `2F1` at `-1`.
    pub fn genfun_rhs(&self, x: &Rational, y: &Rational) -> Result<BigReal> {
        check_genfun_box(x, y)?;
        let bits = self.precision().bits;
        let a = Float::with_val(bits, 1 - Rational::from(x));
        let b = Float::with_val(bits, 1 - Rational::from(y));
        let c = Float::with_val(bits, 1 - Rational::from(x + y));
        let ga = gamma(&a)?;
        let gb = gamma(&b)?;
        let gc = gamma(&c)?;
        let f = hyp2f1_at_minus1(&a, &b, &c)?;
        let ratio = &(&ga * &gb) / &gc;
        Ok((&ratio * &f).mul_int(&2.into()))
    }
}

pub fn genfun_lhs(x: &Rational, y: &Rational, digits: u32) -> Result<BigReal> {
    Evaluator::for_digits(digits).genfun_lhs(x, y)
}

pub fn genfun_rhs(x: &Rational, y: &Rational, digits: u32) -> Result<BigReal> {
    Evaluator::for_digits(digits).genfun_rhs(x, y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i32, b: i32) -> Rational {
        Rational::from((a, b))
    }

    #[test]
    fn both_sides_are_one_on_the_axes() {
        let ev = Evaluator::for_digits(20);
        for (x, y) in [(q(0, 1), q(-1, 8)), (q(1, 8), q(0, 1)), (q(0, 1), q(0, 1))] {
            assert_eq!(*ev.genfun_lhs(&x, &y).unwrap().value(), 1);
            let rhs = ev.genfun_rhs(&x, &y).unwrap();
            assert!(Float::with_val(64, rhs.value() - 1u32).abs() < 1e-20, "{x} {y}");
        }
    }

    #[test]
    fn identity_holds_at_small_arguments() {
        let ev = Evaluator::for_digits(25);
        let (x, y) = (q(1, 8), q(-1, 8));
        let lhs = ev.genfun_lhs(&x, &y).unwrap();
        let rhs = ev.genfun_rhs(&x, &y).unwrap();
        assert!((&lhs - &rhs).abs_lt(&Float::with_val(64, 1e-22)));
    }

    #[test]
    fn box_is_enforced() {
        let ev = Evaluator::for_digits(20);
        assert!(matches!(ev.genfun_lhs(&q(1, 2), &q(-1, 2)), Err(Error::ParameterBox(_))));
        assert!(matches!(ev.genfun_rhs(&q(1, 8), &q(1, 8)), Err(Error::ParameterBox(_))));
    }

    #[test]
    fn truncation_order_grows_with_digits() {
        let a = genfun_truncation_order(&q(1, 8), &q(-1, 8), 30);
        let b = genfun_truncation_order(&q(1, 8), &q(-1, 8), 60);
        let c = genfun_truncation_order(&q(1, 16), &q(-1, 16), 30);
        assert!(a < b && c < a, "{a} {b} {c}");
    }
}
