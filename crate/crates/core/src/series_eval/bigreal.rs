use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::Round;
use rug::ops::{AddAssignRound, Pow};
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

/// Bits used to carry error estimates.
const ERR_PREC: u32 = 53;

/// Guard bits added on top of the decimal target.
pub const GUARD_BITS: u32 = 96;
/// Extra series terms on top of the decimal target.
pub const GUARD_TERMS: usize = 64;

const BITS_PER_DIGIT: f64 = std::f64::consts::LOG2_10;

/// Working precision (bits) and series truncation order (terms) for one evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Precision {
    pub bits: u32,
    pub terms: usize,
}

impl Precision {
    /// `P = ceil(3.3219 d) + 96` bits and `N = ceil(3.3219 d) + 64` terms.
    pub fn for_digits(digits: u32) -> Self {
        let b = (digits as f64 * BITS_PER_DIGIT).ceil() as u32;
        Precision {
            bits: (b + GUARD_BITS).max(64),
            terms: b as usize + GUARD_TERMS,
        }
    }

    pub fn with_terms(self, terms: usize) -> Self {
        Precision {
            terms: terms.max(1),
            ..self
        }
    }

    /// Decimal digits this precision was sized for.
    pub fn digits(&self) -> u32 {
        ((self.bits.saturating_sub(GUARD_BITS)) as f64 / BITS_PER_DIGIT).floor() as u32
    }

    pub fn doubled(&self) -> Self {
        Precision {
            bits: 2 * self.bits,
            terms: 2 * self.terms,
        }
    }
}

/// A real number at a fixed binary precision together with a conservative
/// absolute error estimate.
#[derive(Clone, Debug)]
pub struct BigReal {
    value: Float,
    err: Float,
}

fn err_float(x: impl Into<f64>) -> Float {
    Float::with_val(ERR_PREC, x.into())
}

/// Unit in the last place of `x` at its own precision.
pub(crate) fn ulp(x: &Float) -> Float {
    let prec = x.prec() as i32;
    match x.get_exp() {
        Some(e) => Float::with_val(ERR_PREC, 1) << (e - prec),
        None => Float::with_val(ERR_PREC, 1) >> prec,
    }
}

impl BigReal {
    pub fn new(value: Float, err: Float) -> Self {
        BigReal {
            value,
            err: Float::with_val(ERR_PREC, err.abs()),
        }
    }

    pub fn exact(value: Float) -> Self {
        BigReal {
            value,
            err: err_float(0.0),
        }
    }

    pub fn zero(bits: u32) -> Self {
        Self::exact(Float::new(bits))
    }

    pub fn from_int(i: impl Into<Integer>, bits: u32) -> Self {
        let i = i.into();
        let v = Float::with_val(bits, &i);
        let exact = v == i;
        let err = if exact { err_float(0.0) } else { ulp(&v) };
        BigReal { value: v, err }
    }

    pub fn from_rational(r: &Rational, bits: u32) -> Self {
        let v = Float::with_val(bits, r);
        let err = if *r.denom() == 1 && v == *r { err_float(0.0) } else { ulp(&v) };
        BigReal { value: v, err }
    }

    pub fn value(&self) -> &Float {
        &self.value
    }

    pub fn into_value(self) -> Float {
        self.value
    }

    pub fn error(&self) -> &Float {
        &self.err
    }

    pub fn prec(&self) -> u32 {
        self.value.prec()
    }

    pub fn with_error(mut self, err: Float) -> Self {
        self.err = Float::with_val(ERR_PREC, err.abs());
        self
    }

    pub fn widen_error(mut self, extra: &Float) -> Self {
        self.err += extra.clone().abs();
        self
    }

    pub fn abs(&self) -> BigReal {
        BigReal {
            value: self.value.clone().abs(),
            err: self.err.clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    /// Base-10 logarithm of the absolute value, `-inf` for zero.
    pub fn log10_abs(&self) -> f64 {
        log10_of(&self.value)
    }

    pub fn log10_error(&self) -> f64 {
        log10_of(&self.err)
    }

    /// Number of decimal digits this value can be trusted to, absolutely.
    pub fn accurate_digits(&self) -> f64 {
        let from_prec = self.prec() as f64 / BITS_PER_DIGIT;
        if self.err.is_zero() {
            from_prec
        } else {
            (-self.log10_error()).min(from_prec)
        }
    }

    /// Scientific decimal with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        self.value.to_string_radix(10, Some(digits.max(1)))
    }

    /// Fixed-point decimal with `digits` digits after the point.
    pub fn to_fixed(&self, digits: usize) -> String {
        fixed_decimal(&self.value, digits)
    }

    pub fn round_to(&self, bits: u32) -> BigReal {
        let v = Float::with_val(bits, &self.value);
        let mut err = self.err.clone();
        if v != self.value {
            err += ulp(&v);
        }
        BigReal { value: v, err }
    }

    pub fn mul_rational(&self, r: &Rational) -> BigReal {
        let bits = self.prec();
        let v = Float::with_val(bits, &self.value * r);
        let rabs = Float::with_val(ERR_PREC, r).abs();
        let err = Float::with_val(ERR_PREC, &self.err * &rabs) + ulp(&v) * 2u32;
        BigReal { value: v, err }
    }

    pub fn mul_int(&self, i: &Integer) -> BigReal {
        self.mul_rational(&Rational::from(i))
    }

    pub fn pow(&self, n: u32) -> BigReal {
        let mut out = BigReal::from_int(1, self.prec());
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// `|self| < bound`, taking the value at face value.
    pub fn abs_lt(&self, bound: &Float) -> bool {
        self.value.clone().abs() < *bound
    }
}

pub(crate) fn log10_of(x: &Float) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (m, e) = x.to_f64_exp();
    m.abs().log10() + e as f64 * std::f64::consts::LOG10_2
}

pub(crate) fn fixed_decimal(x: &Float, digits: usize) -> String {
    let scale = Integer::from(10).pow(digits as u32);
    let scaled = Float::with_val(x.prec() + 64, x * &scale);
    let (mut i, _) = scaled.to_integer_round(Round::Nearest).expect("finite value");
    let neg = i < 0;
    i.abs_mut();
    let mut s = i.to_string();
    if s.len() <= digits {
        s = "0".repeat(digits + 1 - s.len()) + &s;
    }
    let (int_part, frac_part) = s.split_at(s.len() - digits);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        write!(f, "{}", self.to_decimal(digits))
    }
}

impl Add for &BigReal {
    type Output = BigReal;

    fn add(self, rhs: &BigReal) -> BigReal {
        let bits = self.prec().max(rhs.prec());
        let mut v = Float::with_val(bits, &self.value);
        v.add_assign_round(&rhs.value, Round::Nearest);
        let err = Float::with_val(ERR_PREC, &self.err + &rhs.err) + ulp(&v);
        BigReal { value: v, err }
    }
}

impl Sub for &BigReal {
    type Output = BigReal;

    fn sub(self, rhs: &BigReal) -> BigReal {
        self + &(-rhs)
    }
}

impl Neg for &BigReal {
    type Output = BigReal;

    fn neg(self) -> BigReal {
        BigReal {
            value: Float::with_val(self.prec(), -&self.value),
            err: self.err.clone(),
        }
    }
}

impl Mul for &BigReal {
    type Output = BigReal;

    fn mul(self, rhs: &BigReal) -> BigReal {
        let bits = self.prec().max(rhs.prec());
        let v = Float::with_val(bits, &self.value * &rhs.value);
        let a = Float::with_val(ERR_PREC, self.value.abs_ref());
        let b = Float::with_val(ERR_PREC, rhs.value.abs_ref());
        let err = Float::with_val(ERR_PREC, &a * &rhs.err)
            + Float::with_val(ERR_PREC, &b * &self.err)
            + Float::with_val(ERR_PREC, &self.err * &rhs.err)
            + ulp(&v);
        BigReal { value: v, err }
    }
}

impl Div for &BigReal {
    type Output = BigReal;

    /// Panics if the divisor's value is zero.
    fn div(self, rhs: &BigReal) -> BigReal {
        assert!(!rhs.value.is_zero(), "division by zero");
        let bits = self.prec().max(rhs.prec());
        let v = Float::with_val(bits, &self.value / &rhs.value);
        let q = Float::with_val(ERR_PREC, v.abs_ref());
        let b = Float::with_val(ERR_PREC, rhs.value.abs_ref());
        // first order in both errors, with the divisor's error kept below |b| / 2
        let spread = Float::with_val(ERR_PREC, &self.err + Float::with_val(ERR_PREC, &q * &rhs.err));
        let denom = Float::with_val(ERR_PREC, &b - Float::with_val(ERR_PREC, &rhs.err * 2u32)).max(&(b / 2u32));
        let err = spread / denom + ulp(&v);
        BigReal { value: v, err }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for BigReal {
            type Output = BigReal;
            fn $m(self, rhs: BigReal) -> BigReal {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl std::iter::Sum for BigReal {
    fn sum<I: Iterator<Item = BigReal>>(iter: I) -> BigReal {
        iter.fold(None::<BigReal>, |acc, x| match acc {
            None => Some(x),
            Some(a) => Some(&a + &x),
        })
        .unwrap_or_else(|| BigReal::zero(64))
    }
}

/// Evaluate a rational linear combination of values.
pub fn combine<'a, I>(terms: I, bits: u32) -> BigReal
where
    I: IntoIterator<Item = (&'a Rational, &'a BigReal)>,
{
    let mut acc = BigReal::zero(bits);
    for (c, v) in terms {
        acc = &acc + &v.mul_rational(c);
    }
    acc
}
