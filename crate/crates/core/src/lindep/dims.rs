use std::fmt;

use rug::Rational;
use serde::{Deserialize, Serialize};

use super::relation::{find_integer_relation, RelationResult, RelationStatus};
use crate::error::{Error, Result};
use crate::indices::{enumerate_admissible, two_three_compositions, Index};
use crate::series_eval::BigReal;
use crate::values::{Evaluator, Family};

pub const CAVEAT: &str = "conjectural (numeric rank)";
pub const DEFAULT_MAX_WEIGHT: u32 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DimFamily {
    #[serde(rename = "T")]
    T,
    #[serde(rename = "t")]
    Hoffman,
    #[serde(rename = "T+t")]
    Union,
    #[serde(rename = "T∩t")]
    Intersection,
    #[serde(rename = "Z")]
    Zeta,
}

impl fmt::Display for DimFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DimFamily::T => "T",
            DimFamily::Hoffman => "t",
            DimFamily::Union => "T+t",
            DimFamily::Intersection => "T∩t",
            DimFamily::Zeta => "Z",
        })
    }
}

impl std::str::FromStr for DimFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "T" => DimFamily::T,
            "t" => DimFamily::Hoffman,
            "T+t" | "union" | "sum" => DimFamily::Union,
            "T∩t" | "intersection" | "cap" => DimFamily::Intersection,
            "Z" | "zeta" => DimFamily::Zeta,
            _ => return Err(Error::Parse(format!("unknown dimension family '{s}'"))),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DimStatus {
    Ok,
    /// Some candidate relation fell in the ambiguous residual band.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionReport {
    pub weight: u32,
    pub family: DimFamily,
    /// Number of values spanning the space (for `T∩t`, the dimension of the T-span).
    pub count: usize,
    /// Relations found; `dimension = count - relations`.
    pub relations: usize,
    pub dimension: usize,
    pub status: DimStatus,
    pub digits: u32,
    pub caveat: String,
}

impl DimensionReport {
    fn new(weight: u32, family: DimFamily, count: usize, relations: usize, inconclusive: bool, digits: u32) -> Self {
        DimensionReport {
            weight,
            family,
            count,
            relations,
            dimension: count - relations,
            status: if inconclusive { DimStatus::Inconclusive } else { DimStatus::Ok },
            digits,
            caveat: CAVEAT.to_string(),
        }
    }
}

/// Two-row table (`k` and `d`) in the layout of the published tables.
pub fn format_dimension_table(reports: &[DimensionReport]) -> String {
    let label = reports
        .first()
        .map(|r| format!("d^{}", r.family))
        .unwrap_or_else(|| "d".to_string());
    let cells = |f: &dyn Fn(&DimensionReport) -> String| {
        reports.iter().map(|r| format!("{:>4}", f(r))).collect::<String>()
    };
    let width = label.chars().count().max(1);
    let mut out = format!("{:<width$} |{}\n", "k", cells(&|r| r.weight.to_string()));
    out.push_str(&format!(
        "{:<width$} |{}\n",
        label,
        cells(&|r| match r.status {
            DimStatus::Ok => r.dimension.to_string(),
            DimStatus::Inconclusive => format!("{}?", r.dimension),
        })
    ));
    out
}

/// Decimal digits sufficient for the dimension experiments at weight `k`.
pub fn recommended_digits(k: u32) -> u32 {
    let grow = 30 + 12 * (1u64 << k.saturating_sub(4).min(20));
    grow.clamp(100, 320) as u32
}

#[derive(Clone, Copy, Debug)]
pub struct RankOptions {
    pub max_weight: u32,
    /// Override for the coefficient bound (digits) of each relation search.
    pub coeff_bound_digits: Option<u32>,
    /// Skip the recommended-precision check.
    pub allow_low_precision: bool,
}

impl Default for RankOptions {
    fn default() -> Self {
        RankOptions { max_weight: DEFAULT_MAX_WEIGHT, coeff_bound_digits: None, allow_low_precision: false }
    }
}

/// Greedy independent subset: each value is kept unless an accepted integer
/// relation ties it to the values kept so far.
#[derive(Debug, Default)]
struct Basis {
    values: Vec<BigReal>,
    relations: usize,
    inconclusive: bool,
}

impl Basis {
    fn push(&mut self, x: BigReal, cb: Option<u32>) -> Result<()> {
        if self.values.is_empty() {
            if x.value().is_zero() {
                self.relations += 1;
            } else {
                self.values.push(x);
            }
            return Ok(());
        }
        let mut xs = self.values.clone();
        xs.push(x);
        match find_integer_relation(&xs, cb)? {
            Some(r) if r.status == RelationStatus::Accepted && *r.coefficients.last().unwrap() != 0 => {
                self.relations += 1;
            }
            Some(r) => {
                // a relation among kept values alone, or one in the ambiguous band
                log::warn!("ambiguous relation candidate, residual {}", r.residual.to_decimal(6));
                self.inconclusive = true;
                self.values.push(xs.pop().unwrap());
            }
            None => self.values.push(xs.pop().unwrap()),
        }
        Ok(())
    }

    fn extend(&mut self, xs: impl IntoIterator<Item = BigReal>, cb: Option<u32>) -> Result<()> {
        for x in xs {
            self.push(x, cb)?;
        }
        Ok(())
    }
}

fn check_weight(ev: &Evaluator, k: u32, opts: &RankOptions) -> Result<()> {
    if k < 2 {
        return Err(Error::Domain(format!("weight {k} has no admissible indices")));
    }
    if k > opts.max_weight {
        return Err(Error::Domain(format!(
            "weight {k} exceeds the configured maximum {}",
            opts.max_weight
        )));
    }
    let have = ev.precision().digits();
    if !opts.allow_low_precision && have < recommended_digits(k) {
        return Err(Error::InsufficientPrecision(format!(
            "weight {k} needs at least {} digits, evaluator runs at {have}",
            recommended_digits(k)
        )));
    }
    Ok(())
}

fn family_values(ev: &Evaluator, family: Family, k: u32) -> Result<Vec<BigReal>> {
    ev.eval_many(family, &enumerate_admissible(k))
}

fn basis_of(ev: &Evaluator, family: Family, k: u32, cb: Option<u32>) -> Result<Basis> {
    let mut b = Basis::default();
    b.extend(family_values(ev, family, k)?, cb)?;
    Ok(b)
}

/// Numeric span dimension of the weight-`k` values of a single family.
pub fn relation_lattice_rank(
    ev: &Evaluator,
    family: DimFamily,
    k: u32,
    opts: &RankOptions,
) -> Result<DimensionReport> {
    let single = match family {
        DimFamily::T => Family::T,
        DimFamily::Hoffman => Family::Hoffman,
        DimFamily::Zeta => Family::Zeta,
        DimFamily::Union | DimFamily::Intersection => {
            let (sum, cap) = dims_union_intersection(ev, k, opts)?;
            return Ok(if family == DimFamily::Union { sum } else { cap });
        }
    };
    check_weight(ev, k, opts)?;
    let b = basis_of(ev, single, k, opts.coeff_bound_digits)?;
    let count = b.values.len() + b.relations;
    Ok(DimensionReport::new(k, family, count, b.relations, b.inconclusive, ev.precision().digits()))
}

/// Dimensions of the sum and the intersection of the T- and t-spans at weight `k`.
pub fn dims_union_intersection(
    ev: &Evaluator,
    k: u32,
    opts: &RankOptions,
) -> Result<(DimensionReport, DimensionReport)> {
    check_weight(ev, k, opts)?;
    let cb = opts.coeff_bound_digits;
    let digits = ev.precision().digits();
    let bt = basis_of(ev, Family::T, k, cb)?;
    let bh = basis_of(ev, Family::Hoffman, k, cb)?;
    let (dt, dh) = (bt.values.len(), bh.values.len());

    let mut joint = Basis { values: bt.values.clone(), ..Basis::default() };
    joint.extend(bh.values.iter().cloned(), cb)?;
    let dsum = joint.values.len();
    let inconclusive = bt.inconclusive || bh.inconclusive || joint.inconclusive;

    let n_values = 2 * enumerate_admissible(k).len();
    let sum = DimensionReport::new(k, DimFamily::Union, n_values, n_values - dsum, inconclusive, digits);
    let cap = DimensionReport::new(k, DimFamily::Intersection, dt, dsum - dh, inconclusive, digits);
    Ok((sum, cap))
}

/// Integer relation between `x` and an independent subset of the weight-`k`
/// MZVs spanned by `zeta(k)` and the zeta values on 2-3 compositions of `k`.
///
/// The relation is reported with the coefficient of `x` first.
#[allow(non_snake_case)]
pub fn membership_in_Z(ev: &Evaluator, x: &BigReal, k: u32) -> Result<Option<RelationResult>> {
    let (_, relation) = membership_in_Z_with_basis(ev, x, k)?;
    Ok(relation)
}

/// As [`membership_in_Z`], also returning the spanning indices the
/// coefficients after the first refer to.
#[allow(non_snake_case)]
pub fn membership_in_Z_with_basis(
    ev: &Evaluator,
    x: &BigReal,
    k: u32,
) -> Result<(Vec<Index>, Option<RelationResult>)> {
    if k < 2 {
        return Err(Error::Domain(format!("weight {k} has no admissible indices")));
    }
    let mut candidates = vec![Index::new(vec![k])?];
    candidates.extend(two_three_compositions(k).into_iter().filter(|ix| ix.depth() > 1 || ix.parts()[0] != k));
    let vals = ev.eval_many(Family::Zeta, &candidates)?;

    let mut basis = Basis::default();
    let mut kept = Vec::new();
    for (ix, v) in candidates.into_iter().zip(vals) {
        let before = basis.values.len();
        basis.push(v, None)?;
        if basis.values.len() > before {
            kept.push(ix);
        }
    }
    let mut xs = vec![x.clone()];
    xs.extend(basis.values);
    let found = find_integer_relation(&xs, None)?;
    Ok((kept, found.filter(|r| r.coefficients[0] != 0)))
}

/// `x / y` as a rational if the relation finder ties them with small coefficients.
pub fn recognize_ratio(x: &BigReal, y: &BigReal) -> Result<Option<Rational>> {
    Ok(find_integer_relation(&[x.clone(), y.clone()], None)?
        .filter(|r| r.accepted && r.coefficients[0] != 0)
        .map(|r| Rational::from((-r.coefficients[1].clone(), r.coefficients[0].clone()))))
}
