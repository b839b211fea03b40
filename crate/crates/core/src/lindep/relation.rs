use rug::ops::Pow;
use rug::{Float, Integer};
use serde::{Deserialize, Serialize};

use super::lll::{default_delta, lll_reduce, IntegerLattice};
use crate::error::{Error, Result};
use crate::series_eval::BigReal;

/// Decimal digits kept between the lattice scale and the input accuracy.
const GUARD_DIGITS: f64 = 10.0;
/// Digits by which spurious lattice vectors are expected to exceed the coefficient bound.
const SPURIOUS_MARGIN: f64 = 1.5;
/// Minimum trustworthy digits for a relation search.
pub const MIN_DIGITS: f64 = 50.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RelationStatus {
    /// Residual below `10^{-0.6 D}` with coefficients inside the bound.
    Accepted,
    /// Best candidate falls between the acceptance and rejection thresholds.
    Inconclusive,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RelationResult {
    /// Integer coefficients, divided by their gcd, first nonzero entry positive.
    #[serde(with = "integer_strings")]
    pub coefficients: Vec<Integer>,
    #[serde(with = "bigreal_string")]
    pub residual: BigReal,
    pub accepted: bool,
    pub status: RelationStatus,
    /// Decimal digits `D` the search was calibrated for.
    pub digits: f64,
    /// Coefficient bound `10^cb` used for acceptance.
    pub coeff_bound_digits: u32,
}

impl RelationResult {
    pub fn max_coefficient(&self) -> Integer {
        self.coefficients
            .iter()
            .map(|c| c.clone().abs())
            .max()
            .unwrap_or_default()
    }
}

mod integer_strings {
    use rug::Integer;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Integer], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|x| x.to_string()).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Integer>, D::Error> {
        let strs = Vec::<String>::deserialize(d)?;
        strs.iter()
            .map(|t| t.parse::<Integer>().map_err(serde::de::Error::custom))
            .collect()
    }
}

pub(crate) mod bigreal_string {
    use rug::Float;
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::series_eval::BigReal;

    pub fn serialize<S: Serializer>(v: &BigReal, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_decimal(12))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigReal, D::Error> {
        let t = String::deserialize(d)?;
        let parsed = Float::parse(&t).map_err(serde::de::Error::custom)?;
        Ok(BigReal::exact(Float::with_val(64, parsed)))
    }
}

/// Trustworthy decimal digits shared by all inputs.
pub fn common_digits(xs: &[BigReal]) -> Result<f64> {
    let bits = xs[0].prec();
    if let Some(other) = xs.iter().find(|x| x.prec() != bits) {
        return Err(Error::MixedPrecision(bits, other.prec()));
    }
    Ok(xs.iter().map(BigReal::accurate_digits).fold(f64::INFINITY, f64::min))
}

/// Coefficient bound (in digits) used when the caller does not give one:
/// spurious relations among `n` numbers known to `D` digits have entries near
/// `10^{D'/n}`, where `D' = D - cb - guard` is the lattice scale.
pub fn auto_coeff_bound(digits: f64, n: usize) -> u32 {
    let n = n as f64;
    let cb = (digits - GUARD_DIGITS - n * SPURIOUS_MARGIN) / (n + 1.0);
    cb.floor().max(1.0) as u32
}

/// Search for a small integer relation `sum a_i x_i = 0`.
///
/// Returns `None` when the best candidate's residual is above `10^{-0.3 D}` or
/// no candidate respects the coefficient bound; otherwise an accepted or
/// inconclusive result.
pub fn find_integer_relation(
    xs: &[BigReal],
    coeff_bound_digits: Option<u32>,
) -> Result<Option<RelationResult>> {
    if xs.is_empty() {
        return Err(Error::DegenerateLattice("no values given"));
    }
    let digits = common_digits(xs)?;
    if digits < MIN_DIGITS {
        return Err(Error::InsufficientPrecision(format!(
            "relation search needs at least {MIN_DIGITS} accurate digits, inputs carry {digits:.1}"
        )));
    }
    let n = xs.len();
    let cb = coeff_bound_digits.unwrap_or_else(|| auto_coeff_bound(digits, n));
    let scale_digits = (digits - cb as f64 - GUARD_DIGITS).floor();
    if scale_digits < 1.0 {
        return Err(Error::InsufficientPrecision(format!(
            "coefficient bound 10^{cb} leaves no room at {digits:.1} digits"
        )));
    }
    let bits = xs[0].prec();
    let reduced = staged_reduction(xs, scale_digits as u32, bits)?;

    let bound = Integer::from(10).pow(cb);
    let accept = Float::with_val(64, 10).pow(-0.6 * digits);
    let reject = Float::with_val(64, 10).pow(-0.3 * digits);

    let mut best_accepted: Option<(Integer, RelationResult)> = None;
    let mut best_other: Option<RelationResult> = None;
    for row in &reduced {
        let coeffs = normalize(row.clone());
        if coeffs.iter().all(|c| *c == 0) {
            continue;
        }
        let within = coeffs.iter().all(|c| c.clone().abs() < bound);
        if !within {
            continue;
        }
        let residual = evaluate(&coeffs, xs, bits);
        let small = residual.abs_lt(&accept);
        let res = RelationResult {
            coefficients: coeffs.clone(),
            residual,
            accepted: small,
            status: if small { RelationStatus::Accepted } else { RelationStatus::Inconclusive },
            digits,
            coeff_bound_digits: cb,
        };
        if small {
            let norm: Integer = coeffs.iter().map(|c| Integer::from(c * c)).sum();
            if best_accepted.as_ref().is_none_or(|(m, _)| norm < *m) {
                best_accepted = Some((norm, res));
            }
        } else {
            let better = best_other.as_ref().is_none_or(|b| {
                Float::with_val(64, res.residual.value().abs_ref())
                    < Float::with_val(64, b.residual.value().abs_ref())
            });
            if better {
                best_other = Some(res);
            }
        }
    }
    if let Some((_, r)) = best_accepted {
        return Ok(Some(r));
    }
    Ok(best_other.filter(|r| r.residual.abs_lt(&reject)))
}

/// Digits of scale added per reduction stage.
const STAGE_DIGITS: u32 = 60;

/// Coefficient rows of an LLL-reduced basis of the lattice spanned by
/// `[e_i | round(10^scale_digits x_i)]`.
///
/// The scale is raised in stages: each stage rebuilds the last column from
/// the current coefficient rows at a larger scale and reduces again, so each
/// reduction starts close to reduced and sees entries of moderate size.
fn staged_reduction(xs: &[BigReal], scale_digits: u32, bits: u32) -> Result<Vec<Vec<Integer>>> {
    let n = xs.len();
    let mut coeffs: Vec<Vec<Integer>> = (0..n)
        .map(|i| (0..n).map(|j| Integer::from((i == j) as u32)).collect())
        .collect();
    let mut digits = 0;
    while digits < scale_digits {
        digits = (digits + STAGE_DIGITS).min(scale_digits);
        let scale = Float::with_val(bits + 64, Integer::from(10).pow(digits));
        let rows: Vec<Vec<Integer>> = coeffs
            .iter()
            .map(|c| {
                let mut acc = Float::with_val(bits + 64, 0);
                for (a, x) in c.iter().zip(xs) {
                    acc += Float::with_val(bits + 64, x.value() * a);
                }
                let mut row = c.clone();
                row.push(Float::with_val(bits + 64, &acc * &scale).to_integer().expect("finite input"));
                row
            })
            .collect();
        let reduced = lll_reduce(&IntegerLattice::new(rows)?, &default_delta())?;
        coeffs = reduced.into_rows().into_iter().map(|mut r| { r.pop(); r }).collect();
    }
    Ok(coeffs)
}

/// Divide by the gcd and make the first nonzero entry positive.
pub(crate) fn normalize(mut v: Vec<Integer>) -> Vec<Integer> {
    let g = v.iter().fold(Integer::new(), |g, x| g.gcd(x));
    if g > 1 {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
    if v.iter().find(|x| **x != 0).is_some_and(|x| *x < 0) {
        for x in v.iter_mut() {
            *x = -x.clone();
        }
    }
    v
}

fn evaluate(coeffs: &[Integer], xs: &[BigReal], bits: u32) -> BigReal {
    coeffs
        .iter()
        .zip(xs)
        .fold(BigReal::zero(bits), |acc, (c, x)| &acc + &x.mul_int(c))
}
