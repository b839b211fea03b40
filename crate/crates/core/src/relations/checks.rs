use rug::ops::Pow;
use rug::{Integer, Rational};

use super::expr::Expr;
use super::report::{with_retry, Status, VerificationReport};
use crate::error::{Error, Result};
use crate::indices::{dual, enumerate_admissible, index_to_word, shuffle, Index, LinearCombo, TWord};
use crate::lindep::{find_integer_relation, membership_in_Z_with_basis};
use crate::values::{check_genfun_box, Evaluator};

fn binom(n: u32, k: u32) -> Integer {
    Integer::from(Integer::binomial_u(n, k))
}

fn require(cond: bool, what: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Domain(what()))
    }
}

fn numeric(ev: &Evaluator, name: &str, params: String, lhs: &Expr, rhs: &Expr, status: Status) -> Result<VerificationReport> {
    let diff = lhs.clone().sub(rhs);
    let res = diff.eval(ev)?;
    Ok(VerificationReport::numeric(name, params, &res, status))
}

fn checked<F>(ev: &Evaluator, f: F) -> Result<VerificationReport>
where
    F: Fn(&Evaluator) -> Result<VerificationReport>,
{
    with_retry(ev, f)
}

/// `T(k) = T(k^dagger)` for every admissible index of the given weight.
pub fn check_duality(ev: &Evaluator, weight: u32) -> Result<Vec<VerificationReport>> {
    require(weight >= 2, || format!("duality needs weight >= 2, got {weight}"))?;
    enumerate_admissible(weight)
        .iter()
        .map(|ix| {
            let d = dual(ix)?;
            let params = format!("k={ix}");
            let (a, b) = (Expr::t(ix.parts()), Expr::t(d.parts()));
            checked(ev, |e| numeric(e, "duality", params.clone(), &a, &b, Status::Theorem))
        })
        .collect()
}

/// Depth-two weighted sum formula.
pub fn sum_formula_depth2(k: u32) -> (Expr, Expr) {
    let mut lhs = Expr::zero();
    for j in 2..k {
        lhs = lhs.add(Integer::from(1) << (j - 1), &Expr::t(&[k - j, j]));
    }
    (lhs, Expr::t(&[k]).scaled(k - 1))
}

pub fn check_sum_formula_depth2(ev: &Evaluator, k: u32) -> Result<VerificationReport> {
    require(k >= 3, || format!("depth-2 sum formula needs k >= 3, got {k}"))?;
    let (l, r) = sum_formula_depth2(k);
    checked(ev, |e| numeric(e, "sum2", format!("k={k}"), &l, &r, Status::Theorem))
}

/// Depth-three sum formula.
pub fn sum_formula_depth3(k: u32) -> (Expr, Expr) {
    let mut lhs = Expr::zero();
    for a in 1..k {
        for b in 1..k - a {
            let c = k - a - b;
            if c >= 2 {
                lhs = lhs.add(1, &Expr::t(&[a, b, c]));
            }
        }
    }
    for j in 2..=k - 2 {
        lhs = lhs.add(1, &Expr::t(&[1, k - 1 - j, j]));
    }
    let rhs = Expr::t(&[2]).mul(&Expr::t(&[k - 2])).scaled(Rational::from((2, 3)));
    (lhs, rhs)
}

pub fn check_sum_formula_depth3(ev: &Evaluator, k: u32) -> Result<VerificationReport> {
    require(k >= 4, || format!("depth-3 sum formula needs k >= 4, got {k}"))?;
    let (l, r) = sum_formula_depth3(k);
    checked(ev, |e| numeric(e, "sum3", format!("k={k}"), &l, &r, Status::Theorem))
}

/// The intermediate depth-two identity used on the way to the sum formula.
pub fn intermediate_sum(k: u32) -> (Expr, Expr) {
    let mut lhs = Expr::t(&[1, k - 1]);
    for j in 2..k {
        lhs = lhs.add(1, &Expr::t(&[k - j, j]));
    }
    let mut rhs = Expr::t(&[k]).scaled(k - 1);
    for j in 2..=k.saturating_sub(2) {
        rhs = rhs.add(Rational::from((-1, 2)), &Expr::t(&[j]).mul(&Expr::t(&[k - j])));
    }
    (lhs, rhs)
}

pub fn check_intermediate_sum(ev: &Evaluator, k: u32) -> Result<VerificationReport> {
    require(k >= 3, || format!("intermediate formula needs k >= 3, got {k}"))?;
    let (l, r) = intermediate_sum(k);
    checked(ev, |e| numeric(e, "interm", format!("k={k}"), &l, &r, Status::Theorem))
}

/// Weighted sum formula for double zeta values.
pub fn weighted_dzv(k: u32) -> (Expr, Expr) {
    let mut lhs = Expr::zero();
    for j in 2..k {
        lhs = lhs.add(Integer::from(1) << (j - 1), &Expr::zeta(&[k - j, j]));
    }
    (lhs, Expr::zeta(&[k]).scaled(Rational::from((k + 1, 2))))
}

pub fn check_weighted_dzv(ev: &Evaluator, k: u32) -> Result<VerificationReport> {
    require(k >= 3, || format!("weighted double zeta formula needs k >= 3, got {k}"))?;
    let (l, r) = weighted_dzv(k);
    checked(ev, |e| numeric(e, "dzv", format!("k={k}"), &l, &r, Status::Theorem))
}

/// Depth-two parity reduction of `T(p,q)` for `p + q` odd.
pub fn parity_depth2(p: u32, q: u32) -> (Expr, Expr) {
    let sign = if q % 2 == 0 { 1 } else { -1 };
    let lhs = Expr::t(&[p, q]).scaled(sign);
    let mut rhs = Expr::t(&[p + q]).scaled(binom(p + q - 1, q));
    for mu in (1..=q.saturating_sub(2)).filter(|m| m % 2 == q % 2) {
        let c = Rational::from((binom(p + mu - 1, mu), (Integer::from(1) << (q - mu)) - 1u32));
        rhs = rhs.add(-c, &Expr::t(&[p + mu]).mul(&Expr::t(&[q - mu])));
    }
    for mu in (0..=p.saturating_sub(2)).filter(|m| m % 2 == p % 2) {
        rhs = rhs.add(-binom(q + mu - 1, mu), &Expr::t(&[p - mu]).mul(&Expr::t(&[q + mu])));
    }
    (lhs, rhs)
}

pub fn check_parity_depth2(ev: &Evaluator, p: u32, q: u32) -> Result<VerificationReport> {
    require(p >= 1 && q >= 2 && (p + q) % 2 == 1, || {
        format!("parity formula needs p >= 1, q >= 2 and p+q odd, got ({p},{q})")
    })?;
    let (l, r) = parity_depth2(p, q);
    checked(ev, |e| numeric(e, "parity2", format!("p={p},q={q}"), &l, &r, Status::Theorem))
}

fn word(k: u32) -> TWord {
    index_to_word(&Index::new(vec![k]).expect("positive")).expect("admissible")
}

/// The binomial expansion of `T(j) T(k-j)` into double T-values.
pub fn tt_binomial_expansion(j: u32, k: u32) -> LinearCombo<Index> {
    let mut out = LinearCombo::new();
    for nu in 2..k {
        let c = binom(nu - 1, j - 1) + binom(nu - 1, k - j - 1);
        out.add_term(Index::new(vec![k - nu, nu]).expect("positive"), c);
    }
    out
}

/// Exact comparison of the shuffle of the words of `T(j)` and `T(k-j)`
/// against the binomial expansion.
#[allow(non_snake_case)]
pub fn check_shuffle_TT_expansion(j: u32, k: u32) -> Result<VerificationReport> {
    require(j >= 2 && k >= j + 2, || format!("shuffle expansion needs 2 <= j <= k-2, got j={j}, k={k}"))?;
    let sh = shuffle(&word(j), &word(k - j)).try_map_terms(crate::indices::word_to_index)?;
    let formula = tt_binomial_expansion(j, k);
    Ok(VerificationReport::exact("shuffleTT", format!("j={j},k={k}"), sh == formula, Status::Theorem))
}

/// Height-one generating series identity at rational `(X, Y)`.
pub fn check_genfun(ev: &Evaluator, x: &Rational, y: &Rational) -> Result<VerificationReport> {
    check_genfun_box(x, y)?;
    checked(ev, |e| {
        let res = &e.genfun_lhs(x, y)? - &e.genfun_rhs(x, y)?;
        Ok(VerificationReport::numeric("genfun", format!("X={x},Y={y}"), &res, Status::Theorem))
    })
}

/// The conjectured weighted depth-three formula.
pub fn machide_analogue(k: u32) -> (Expr, Expr) {
    let mut lhs = Expr::zero();
    for a in 1..k {
        for b in 1..k - a {
            let c = k - a - b;
            if c >= 2 {
                let w = (Integer::from(1) << b) * (Integer::from(Integer::u_pow_u(3, c - 1)) - 1u32);
                lhs = lhs.add(w, &Expr::t(&[a, b, c]));
            }
        }
    }
    let rhs = Expr::t(&[k]).scaled(Rational::from((2 * (k - 1) * (k - 2), 3)));
    (lhs, rhs)
}

pub fn check_machide_conjecture(ev: &Evaluator, k: u32) -> Result<VerificationReport> {
    require(k >= 4, || format!("Machide analogue needs k >= 4, got {k}"))?;
    let (l, r) = machide_analogue(k);
    numeric(ev, "machide", format!("k={k}"), &l, &r, Status::Conjecture)
}

/// `s(p,q,m) = sum_{i+j=m} C(p+i-1,i) C(q+j-1,j) T(p+i,q+j)`.
pub fn conj53_sum(p: u32, q: u32, m: u32) -> Expr {
    (0..=m).fold(Expr::zero(), |acc, i| {
        let j = m - i;
        let c = binom(p + i - 1, i) * binom(q + j - 1, j);
        acc.add(c, &Expr::t(&[p + i, q + j]))
    })
}

fn membership_report(
    ev: &Evaluator,
    name: &str,
    params: String,
    x: &Expr,
    weight: u32,
    status: Status,
) -> Result<VerificationReport> {
    let xv = x.eval(ev)?;
    let (basis, rel) = membership_in_Z_with_basis(ev, &xv, weight)?;
    Ok(match rel {
        Some(r) if r.accepted => {
            let mut rhs = Expr::zero();
            for (c, ix) in r.coefficients[1..].iter().zip(&basis) {
                rhs = rhs.add(Rational::from((-c.clone(), r.coefficients[0].clone())), &Expr::zeta(ix.parts()));
            }
            let tol = rug::Float::with_val(64, 10).pow(-0.6 * r.digits);
            VerificationReport::with_tolerance(name, params, &r.residual, tol, status)
                .with_note(format!("x = {rhs}"))
        }
        other => {
            let mut rep = VerificationReport::exact(name, params, false, status);
            rep.tolerance = "relation".into();
            rep.residual = "no relation".into();
            rep.digits = ev.precision().digits();
            let why = if other.is_some() { "inconclusive relation" } else { "no relation found" };
            rep.with_note(why)
        }
    })
}

/// Evidence that `s(p,q,m)` is a multiple zeta value.
pub fn check_conj53(ev: &Evaluator, p: u32, q: u32, m: u32) -> Result<VerificationReport> {
    require(p >= 1 && q >= 2 && m >= 1 && (p + q + m) % 2 == 0, || {
        format!("conjecture needs p >= 1, q >= 2, m >= 1 and p+q+m even, got ({p},{q},{m})")
    })?;
    let s = conj53_sum(p, q, m);
    membership_report(ev, "conj53", format!("p={p},q={q},m={m}"), &s, p + q + m, Status::Conjecture)
}

/// Spanning set for the parity reduction at even weight `w`: single and
/// double T-values and products of T-values with total depth at most three.
fn lower_depth_span(w: u32) -> Vec<Expr> {
    let mut out = vec![Expr::t(&[w])];
    let doubles: Vec<(u32, u32)> = (1..w - 1).map(|a| (a, w - a)).collect();
    out.extend(doubles.iter().map(|&(a, b)| Expr::t(&[a, b])));
    for a in 2..=w / 2 {
        out.push(Expr::t(&[a]).mul(&Expr::t(&[w - a])));
    }
    for a in 2..w.saturating_sub(2) {
        for b in 1..w - a - 1 {
            out.push(Expr::t(&[a]).mul(&Expr::t(&[b, w - a - b])));
        }
    }
    for a in 2..w {
        for b in a..w {
            let c = w.saturating_sub(a + b);
            if c >= b {
                out.push(Expr::t(&[a]).mul(&Expr::t(&[b])).mul(&Expr::t(&[c])));
            }
        }
    }
    out
}

/// Numeric membership of `T(2p+1, 2q, 2r+1)` in the span of lower-depth
/// T-values and products.
pub fn check_parity_depth3(ev: &Evaluator, p: u32, q: u32, r: u32) -> Result<VerificationReport> {
    require(q >= 1 && r >= 1, || format!("need q >= 1 and r >= 1, got ({p},{q},{r})"))?;
    let w = 2 * (p + q + r) + 2;
    let x = Expr::t(&[2 * p + 1, 2 * q, 2 * r + 1]);
    let params = format!("p={p},q={q},r={r}");
    let xv = x.eval(ev)?;
    let span = lower_depth_span(w);
    let vals: Vec<_> = span.iter().map(|e| e.eval(ev)).collect::<Result<_>>()?;

    let mut kept: Vec<usize> = Vec::new();
    for (i, v) in vals.iter().enumerate() {
        let mut xs: Vec<_> = kept.iter().map(|&j| vals[j].clone()).collect();
        if xs.is_empty() {
            kept.push(i);
            continue;
        }
        xs.push(v.clone());
        let dependent = find_integer_relation(&xs, None)?
            .is_some_and(|r| r.accepted && *r.coefficients.last().unwrap() != 0);
        if !dependent {
            kept.push(i);
        }
    }
    let mut xs = vec![xv];
    xs.extend(kept.iter().map(|&j| vals[j].clone()));
    Ok(match find_integer_relation(&xs, None)? {
        Some(rel) if rel.accepted && rel.coefficients[0] != 0 => {
            let tol = rug::Float::with_val(64, 10).pow(-0.6 * rel.digits);
            let mut rhs = Expr::zero();
            for (c, &j) in rel.coefficients[1..].iter().zip(&kept) {
                rhs = rhs.add(Rational::from((-c.clone(), rel.coefficients[0].clone())), &span[j]);
            }
            VerificationReport::with_tolerance("parity3", params, &rel.residual, tol, Status::Theorem)
                .with_note(format!("{x} = {rhs}"))
        }
        _ => {
            let mut rep = VerificationReport::exact("parity3", params, false, Status::Theorem);
            rep.residual = "no relation".into();
            rep.tolerance = "relation".into();
            rep.digits = ev.precision().digits();
            rep
        }
    })
}

/// The relations displayed for weights five and six, as `lhs = rhs`.
pub fn low_weight_relations() -> Vec<(String, Expr, Expr)> {
    let t = Expr::t;
    let q = |n: i64, d: i64| Rational::from((n, d));
    let w6 = |c6: Rational, c15: i64, c24: i64, c33: i64, c114: i64| {
        t(&[6]).scaled(c6)
            .add(c15, &t(&[1, 5]))
            .add(c24, &t(&[2, 4]))
            .add(c33, &t(&[3, 3]))
            .add(c114, &t(&[1, 1, 4]))
    };
    vec![
        ("T(3,2)".into(), t(&[3, 2]), t(&[1, 4]).scaled(6)),
        ("T(2,3)".into(), t(&[2, 3]), t(&[5]).add(-5, &t(&[1, 4]))),
        ("T(1,2,3)".into(), t(&[1, 2, 3]), w6(q(-25, 12), 12, 6, 2, -2)),
        ("T(1,3,2)".into(), t(&[1, 3, 2]), w6(q(55, 12), -24, -12, -4, -1)),
        ("T(2,1,3)".into(), t(&[2, 1, 3]), w6(q(55, 12), -24, -12, -4, -1)),
        ("T(2,2,2)".into(), t(&[2, 2, 2]), w6(q(-35, 4), 48, 24, 8, 6)),
        ("T(3,1,2)".into(), t(&[3, 1, 2]), w6(q(5, 6), 0, 0, 0, -1)),
        ("T(4,2)".into(), t(&[4, 2]), w6(q(5, 2), -8, -4, -2, 0)),
    ]
}

/// Solve `relations = 0` for the `targets`, each as a combination of the
/// remaining single T-values. Returns `None` if the system does not determine them.
fn solve_for(relations: &[Expr], targets: &[Index]) -> Option<Vec<LinearCombo<Index>>> {
    let mut rows: Vec<LinearCombo<Index>> = relations
        .iter()
        .map(|e| {
            let mut c = LinearCombo::new();
            for (m, v) in e.0.iter() {
                match m.as_slice() {
                    [(crate::values::Family::T, i)] => c.add_term(i.clone(), v.clone()),
                    _ => return None,
                }
            }
            Some(c)
        })
        .collect::<Option<_>>()?;
    for (col, t) in targets.iter().enumerate() {
        let pivot = (col..rows.len()).find(|&r| rows[r].coeff(t) != 0)?;
        rows.swap(col, pivot);
        let inv = Rational::from(rows[col].coeff(t).recip_ref());
        rows[col] = rows[col].scaled(&inv);
        for r in 0..rows.len() {
            if r != col {
                let f = -rows[r].coeff(t);
                if f != 0 {
                    let pivot_row = rows[col].clone();
                    rows[r].add_combo(&pivot_row, &f);
                }
            }
        }
    }
    Some(
        targets
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let mut sol = rows[i].scaled(&Rational::from(-1));
                sol.add_term(t.clone(), 1);
                sol
            })
            .collect(),
    )
}

/// Every displayed weight-five and weight-six relation numerically, the
/// weight-five pair re-derived symbolically from the depth-two and
/// depth-three sum formulas, and the weight-six consequence of the
/// conjectured membership of `s(p,q,m)`.
pub fn reduce_weight_le6(ev: &Evaluator) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for (name, l, r) in low_weight_relations() {
        out.push(checked(ev, |e| numeric(e, "weight<=6", name.clone(), &l, &r, Status::Theorem))?);
    }

    let (l2, r2) = sum_formula_depth2(5);
    let sf2 = l2.sub(&r2);
    let (l3, r3) = sum_formula_depth3(5);
    let sf3 = l3.canonical_duals()?.sub(&r3.linearize_t()?);
    let ix = |p: &[u32]| Index::new(p.to_vec()).expect("positive");
    let solved = solve_for(&[sf2, sf3], &[ix(&[3, 2]), ix(&[2, 3])]);
    let want32 = LinearCombo::term(ix(&[1, 4]), 6);
    let mut want23 = LinearCombo::term(ix(&[5]), 1);
    want23.add_term(ix(&[1, 4]), -5);
    let (ok32, ok23) = match &solved {
        Some(s) => (s[0] == want32, s[1] == want23),
        None => (false, false),
    };
    out.push(VerificationReport::exact("derive-w5", "T(3,2)=6T(1,4)".into(), ok32, Status::Theorem));
    out.push(VerificationReport::exact("derive-w5", "T(2,3)=T(5)-5T(1,4)".into(), ok23, Status::Theorem));

    let lhs = t_lin(&[(&[2, 4], 3), (&[3, 3], 2)]);
    let rhs = Expr::t(&[6])
        .scaled(Rational::from((-15, 7)))
        .add(Rational::from((10, 7)), &Expr::t(&[3]).mul(&Expr::t(&[3])));
    out.push(numeric(ev, "conj53-w6", "3T(2,4)+2T(3,3)".into(), &lhs, &rhs, Status::Conjecture)?);
    let expanded = rhs.linearize_t()?;
    let want = Expr::t(&[6])
        .scaled(Rational::from((-15, 7)))
        .add(Rational::from((120, 7)), &Expr::t(&[1, 5]))
        .add(Rational::from((60, 7)), &Expr::t(&[2, 4]))
        .add(Rational::from((20, 7)), &Expr::t(&[3, 3]));
    out.push(VerificationReport::exact("shuffle-w6", "T(3)^2".into(), expanded == want, Status::Theorem));
    Ok(out)
}

fn t_lin(terms: &[(&[u32], i64)]) -> Expr {
    terms.iter().fold(Expr::zero(), |acc, (p, c)| acc.add(*c, &Expr::t(p)))
}
