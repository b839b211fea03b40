//! End-to-end acceptance run: one PASS/FAIL line per criterion.
//! Exits non-zero if a gating criterion fails.

mod common;

use std::time::{Duration, Instant};

use common::{hermite, nested_sum, random_real, Fam};
use mtv::indices::{dual, enumerate_admissible, shuffle_indices, stuffle, Index, LinearCombo};
use mtv::lindep::{
    default_delta, dims_union_intersection, find_integer_relation, is_lll_reduced, lll_reduce,
    relation_lattice_rank, DimFamily, DimStatus, IntegerLattice, RankOptions,
};
use mtv::relations::{
    check_conj53, check_duality, check_genfun, check_intermediate_sum, check_machide_conjecture,
    check_parity_depth2, check_shuffle_TT_expansion, check_sum_formula_depth2, check_sum_formula_depth3,
    check_weighted_dzv, reduce_weight_le6, sum_formula_depth3, Expr, Status, VerificationReport,
};
use mtv::series_eval::{BigReal, Precision};
use mtv::values::Evaluator;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Float, Integer, Rational};

/// Residual bound for theorem checks at 60 digits.
const THEOREM_DIGITS: f64 = 45.0;
/// Residual bound for the generating series at 30 digits.
const GENFUN_DIGITS: f64 = 25.0;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

/// All reports passed with residual below `10^-digits`.
fn all_below(reports: &[VerificationReport], digits: f64) -> Outcome {
    let bad: Vec<String> = reports
        .iter()
        .filter(|r| !(r.passed() && r.residual_below(digits)))
        .map(|r| format!("{} {} residual {}", r.name, r.params, r.residual))
        .collect();
    let worst = reports
        .iter()
        .filter_map(|r| r.residual_log10)
        .fold(f64::NEG_INFINITY, f64::max);
    if bad.is_empty() {
        outcome(true, format!("{} reports, worst log10 residual {:.1}", reports.len(), worst))
    } else {
        outcome(false, format!("{} of {} failed: {}", bad.len(), reports.len(), bad.join("; ")))
    }
}

fn errored(e: mtv::Error) -> Outcome {
    outcome(false, format!("error: {e}"))
}

fn within(elapsed: Duration, limit: Duration) -> String {
    format!("{:.1}s (limit {}s)", elapsed.as_secs_f64(), limit.as_secs())
}

fn crit1(ev: &Evaluator) -> Outcome {
    let start = Instant::now();
    let reps = match (2..=8).map(|w| check_duality(ev, w)).collect::<Result<Vec<_>, _>>() {
        Ok(r) => r.concat(),
        Err(e) => return errored(e),
    };
    let t = start.elapsed();
    let limit = Duration::from_secs(120);
    let mut o = all_below(&reps, THEOREM_DIGITS);
    o.pass &= t <= limit;
    o.detail = format!("{}; {}", o.detail, within(t, limit));
    o
}

fn crit2(ev: &Evaluator) -> Outcome {
    match (3..=12).map(|k| check_sum_formula_depth2(ev, k)).collect::<Result<Vec<_>, _>>() {
        Ok(r) => all_below(&r, THEOREM_DIGITS),
        Err(e) => errored(e),
    }
}

fn crit3(ev: &Evaluator) -> Outcome {
    let reps = match (4..=10).map(|k| check_sum_formula_depth3(ev, k)).collect::<Result<Vec<_>, _>>() {
        Ok(r) => r,
        Err(e) => return errored(e),
    };
    let mut o = all_below(&reps, THEOREM_DIGITS);
    let (lhs, rhs) = sum_formula_depth3(5);
    let want_lhs = Expr::t(&[1, 1, 3]).scaled(2).add(2, &Expr::t(&[1, 2, 2])).add(1, &Expr::t(&[2, 1, 2]));
    let want_rhs = Expr::t(&[2]).mul(&Expr::t(&[3])).scaled(Rational::from((2, 3)));
    let display = lhs == want_lhs && rhs == want_rhs;
    o.pass &= display;
    o.detail = format!("{}; k=5 instance {} = {} {}", o.detail, lhs, rhs, if display { "matches" } else { "differs" });
    o
}

fn crit4(ev: &Evaluator) -> Outcome {
    let reps = (3..=10)
        .flat_map(|k| [check_intermediate_sum(ev, k), check_weighted_dzv(ev, k)])
        .collect::<Result<Vec<_>, _>>();
    match reps {
        Ok(r) => all_below(&r, THEOREM_DIGITS),
        Err(e) => errored(e),
    }
}

fn crit5(ev: &Evaluator) -> Outcome {
    let mut reps = Vec::new();
    for w in (3..=11u32).filter(|w| w % 2 == 1) {
        for q in 2..w {
            match check_parity_depth2(ev, w - q, q) {
                Ok(r) => reps.push(r),
                Err(e) => return errored(e),
            }
        }
    }
    all_below(&reps, THEOREM_DIGITS)
}

fn crit6() -> Outcome {
    let mut reps = Vec::new();
    for k in 4..=10 {
        for j in 2..=k - 2 {
            match check_shuffle_TT_expansion(j, k) {
                Ok(r) => reps.push(r),
                Err(e) => return errored(e),
            }
        }
    }
    let ok = reps.iter().all(|r| r.passed());
    outcome(ok, format!("{} exact comparisons", reps.len()))
}

fn crit7() -> Outcome {
    let start = Instant::now();
    let ev = Evaluator::for_digits(30);
    let points = [((1, 8), (-1, 8)), ((1, 16), (-1, 16))];
    let reps = points
        .iter()
        .map(|&(x, y)| check_genfun(&ev, &Rational::from(x), &Rational::from(y)))
        .collect::<Result<Vec<_>, _>>();
    let t = start.elapsed();
    let limit = Duration::from_secs(300);
    match reps {
        Ok(r) => {
            let mut o = all_below(&r, GENFUN_DIGITS);
            o.pass &= t <= limit;
            o.detail = format!("{}; {}", o.detail, within(t, limit));
            o
        }
        Err(e) => errored(e),
    }
}

fn crit8(ev: &Evaluator) -> Outcome {
    let reps = match reduce_weight_le6(ev) {
        Ok(r) => r,
        Err(e) => return errored(e),
    };
    let displayed: Vec<VerificationReport> = reps.iter().filter(|r| r.name == "weight<=6").cloned().collect();
    let mut o = all_below(&displayed, THEOREM_DIGITS);
    if displayed.len() != 8 {
        o.pass = false;
    }
    let derived = reps.iter().filter(|r| r.name == "derive-w5").all(|r| r.passed());
    o.pass &= derived;

    let ix = |p: &[u32]| Index::new(p.to_vec()).unwrap();
    let found = |xs: Vec<BigReal>| {
        find_integer_relation(&xs, None)
            .ok()
            .flatten()
            .filter(|r| r.accepted)
            .map(|r| r.coefficients)
    };
    let r1 = ev.mtv(&ix(&[3, 2])).and_then(|a| Ok(found(vec![a, ev.mtv(&ix(&[1, 4]))?])));
    let r2 = ev.zeta(&ix(&[6])).and_then(|a| Ok(found(vec![a, ev.mtv(&ix(&[6]))?])));
    let (r1, r2) = match (r1, r2) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return errored(e),
    };
    let want1: Vec<Integer> = vec![1.into(), (-6).into()];
    let want2: Vec<Integer> = vec![63.into(), (-32).into()];
    let lindep_ok = r1.as_ref() == Some(&want1) && r2.as_ref() == Some(&want2);
    o.pass &= lindep_ok;
    let show = |r: &Option<Vec<Integer>>| match r {
        Some(c) => c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
        None => "none".into(),
    };
    o.detail = format!(
        "{} displayed relations: {}; derivation exact: {derived}; T(3,2),T(1,4) -> {}; zeta(6),T(6) -> {}",
        displayed.len(),
        o.detail,
        show(&r1),
        show(&r2)
    );
    o
}

fn crit9() -> Outcome {
    let ev = Evaluator::for_digits(300);
    let opts = RankOptions::default();
    let expected: [(&str, [usize; 7]); 4] = [
        ("T", [1, 1, 2, 2, 4, 5, 9]),
        ("t", [1, 2, 3, 5, 8, 13, 21]),
        ("T+t", [1, 2, 4, 5, 9, 14, 24]),
        ("T∩t", [1, 1, 1, 2, 3, 4, 6]),
    ];
    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); 4];
    let mut inconclusive = 0;
    let mut k8 = Duration::ZERO;
    for k in 2..=8 {
        let start = Instant::now();
        let got = (|| {
            let t = relation_lattice_rank(&ev, DimFamily::T, k, &opts)?;
            let h = relation_lattice_rank(&ev, DimFamily::Hoffman, k, &opts)?;
            let (sum, cap) = dims_union_intersection(&ev, k, &opts)?;
            Ok::<_, mtv::Error>([t, h, sum, cap])
        })();
        let got = match got {
            Ok(g) => g,
            Err(e) => return errored(e),
        };
        if k == 8 {
            k8 = start.elapsed();
        }
        for (row, rep) in rows.iter_mut().zip(&got) {
            row.push(rep.dimension);
            inconclusive += (rep.status == DimStatus::Inconclusive) as usize;
        }
    }
    let limit = Duration::from_secs(1200);
    let mut pass = k8 <= limit && inconclusive == 0;
    let mut parts = Vec::new();
    for ((name, want), got) in expected.iter().zip(&rows) {
        pass &= got[..] == want[..];
        parts.push(format!("{name}: {got:?}"));
    }
    outcome(
        pass,
        format!(
            "{} at 300 digits, {inconclusive} inconclusive; k=8 {}; conjectural numeric ranks",
            parts.join(" "),
            within(k8, limit)
        ),
    )
}

fn crit10(ev: &Evaluator) -> Outcome {
    let machide = (4..=8).map(|k| check_machide_conjecture(ev, k)).collect::<Result<Vec<_>, _>>();
    let ev100 = Evaluator::for_digits(100);
    let conj = [(1, 2, 1), (2, 2, 2), (1, 3, 2)]
        .iter()
        .map(|&(p, q, m)| check_conj53(&ev100, p, q, m))
        .collect::<Result<Vec<_>, _>>();
    let (machide, conj) = match (machide, conj) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return errored(e),
    };
    let m = all_below(&machide, THEOREM_DIGITS);
    let found = conj.iter().filter(|r| r.passed()).count();
    let status = machide.iter().chain(&conj).all(|r| r.status == Status::Conjecture);
    let notes: Vec<String> = conj
        .iter()
        .map(|r| format!("{}: {}", r.params, r.note.as_deref().unwrap_or("-")))
        .collect();
    outcome(
        m.pass && found == conj.len() && status,
        format!("machide {}; conj53 relations {found}/3 ({}); non-gating", m.detail, notes.join("; ")),
    )
}

fn planted_relation_recovered(rng: &mut ChaCha8Rng) -> bool {
    let bits = Precision::for_digits(100).bits;
    let n = rng.gen_range(2..=5);
    let mut a: Vec<Integer> = (0..n).map(|_| Integer::from(rng.gen_range(-1000i64..=1000))).collect();
    a.push(Integer::from(rng.gen_range(1i64..=1000)));
    let mut xs: Vec<BigReal> = (0..n).map(|_| random_real(rng, bits)).collect();
    let mut s = BigReal::zero(bits);
    for (x, c) in xs.iter().zip(&a) {
        s = &s + &x.mul_int(c);
    }
    xs.push(BigReal::exact(-Float::with_val(bits, s.value() / a.last().unwrap())));
    let g = a.iter().fold(Integer::new(), |g, c| g.gcd(c));
    let mut want: Vec<Integer> = a.iter().map(|c| Integer::from(c / &g)).collect();
    if want.iter().find(|c| **c != 0).is_some_and(|c| *c < 0) {
        want.iter_mut().for_each(|c| *c = Integer::from(-&*c));
    }
    matches!(find_integer_relation(&xs, None), Ok(Some(r)) if r.accepted && r.coefficients == want)
}

fn crit11() -> Outcome {
    let mut failures: Vec<String> = Vec::new();

    // oracle equivalence
    let ev30 = Evaluator::for_digits(30);
    let mut worst = f64::INFINITY;
    for ix in (2..=6).flat_map(enumerate_admissible).filter(|ix| ix.depth() <= 3) {
        for (fam, v) in [
            (Fam::T, ev30.mtv(&ix)),
            (Fam::Hoffman, ev30.hoffman(&ix)),
            (Fam::Zeta, ev30.zeta(&ix)),
        ] {
            let want = nested_sum(fam, ix.parts());
            let got = v.map(|b| b.to_f64()).unwrap_or(f64::NAN);
            let d = -((got - want).abs() / want.abs()).log10();
            worst = worst.min(d);
            if d.is_nan() || d < 6.0 {
                failures.push(format!("oracle {fam:?}({ix})"));
            }
        }
    }

    // precision and truncation doubling
    let ev60 = Evaluator::for_digits(60);
    let p = Precision::for_digits(30);
    let long = Evaluator::new(p.with_terms(2 * p.terms));
    for ix in (2..=6).flat_map(enumerate_admissible) {
        let (a, b, c) = (ev30.mtv(&ix), ev60.mtv(&ix), long.mtv(&ix));
        let ok = match (a, b, c) {
            (Ok(a), Ok(b), Ok(c)) => {
                let close = |x: &BigReal, y: &BigReal| {
                    Float::with_val(64, x.value() - y.value()).abs()
                        <= Float::with_val(64, x.error() + y.error()) * 1.01
                };
                close(&a, &b) && close(&a, &c)
            }
            _ => false,
        };
        if !ok {
            failures.push(format!("doubling {ix}"));
        }
    }

    // shuffle and stuffle laws, exhaustively on small indices
    let small: Vec<Index> = (1..=4).flat_map(compositions).collect();
    let admissible: Vec<&Index> = small.iter().filter(|ix| ix.is_admissible()).collect();
    for a in &admissible {
        for b in &admissible {
            let ok = match (shuffle_indices(a, b), shuffle_indices(b, a)) {
                (Ok(x), Ok(y)) => {
                    x == y
                        && x.mass() == Rational::from(Integer::from(Integer::binomial_u(a.weight() + b.weight(), a.weight())))
                }
                _ => false,
            };
            if !ok {
                failures.push(format!("shuffle {a} {b}"));
            }
        }
    }
    for a in &small {
        for b in &small {
            if stuffle(a, b) != stuffle(b, a) {
                failures.push(format!("stuffle commutativity {a} {b}"));
            }
            for c in small.iter().filter(|c| c.weight() <= 2) {
                let l = combo_stuffle(&stuffle(a, b), &LinearCombo::term((*c).clone(), 1));
                let r = combo_stuffle(&LinearCombo::term((*a).clone(), 1), &stuffle(b, c));
                if l != r {
                    failures.push(format!("stuffle associativity {a} {b} {c}"));
                }
            }
        }
    }
    for ix in (2..=9).flat_map(enumerate_admissible) {
        if dual(&ix).and_then(|d| dual(&d)).ok() != Some(ix.clone()) {
            failures.push(format!("duality involution {ix}"));
        }
    }

    // lattice reduction
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut lattices = 0;
    while lattices < 60 {
        let n = rng.gen_range(1..=8);
        let m = n + rng.gen_range(0..=2);
        let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..m).map(|_| rng.gen_range(-60..=60)).collect()).collect();
        let lat = IntegerLattice::from_i64(&rows).unwrap();
        if hermite(lat.rows()).len() < n {
            continue;
        }
        lattices += 1;
        let ok = lll_reduce(&lat, &default_delta())
            .map(|red| hermite(red.rows()) == hermite(lat.rows()) && is_lll_reduced(&red, &default_delta()))
            .unwrap_or(false);
        if !ok {
            failures.push(format!("lll {rows:?}"));
        }
    }
    let planted = 40;
    let recovered = (0..planted).filter(|_| planted_relation_recovered(&mut rng)).count();
    if recovered < planted {
        failures.push(format!("planted relations {recovered}/{planted}"));
    }

    let pass = failures.is_empty();
    let detail = if pass {
        format!(
            "oracle worst {worst:.1} digits; doubling, algebra laws, {lattices} lattices, {recovered}/{planted} planted relations"
        )
    } else {
        failures.join("; ")
    };
    outcome(pass, detail)
}

fn compositions(w: u32) -> Vec<Index> {
    fn go(w: u32, prefix: &mut Vec<u32>, out: &mut Vec<Index>) {
        if w == 0 {
            out.push(Index::new(prefix.clone()).unwrap());
            return;
        }
        for first in 1..=w {
            prefix.push(first);
            go(w - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(w, &mut Vec::new(), &mut out);
    out
}

fn combo_stuffle(a: &LinearCombo<Index>, b: &LinearCombo<Index>) -> LinearCombo<Index> {
    let mut out = LinearCombo::new();
    for (x, cx) in a.iter() {
        for (y, cy) in b.iter() {
            out.add_combo(&stuffle(x, y), &Rational::from(cx * cy));
        }
    }
    out
}

fn main() {
    let ev = Evaluator::for_digits(60);
    type Crit<'a> = (u32, &'a str, bool, Box<dyn Fn() -> Outcome + 'a>);
    let criteria: Vec<Crit> = vec![
        (1, "duality, weight <= 8", true, Box::new(|| crit1(&ev))),
        (2, "depth-2 weighted sum formula, k = 3..12", true, Box::new(|| crit2(&ev))),
        (3, "depth-3 sum formula, k = 4..10", true, Box::new(|| crit3(&ev))),
        (4, "intermediate and double zeta weighted sums, k = 3..10", true, Box::new(|| crit4(&ev))),
        (5, "depth-2 parity formula, p+q <= 11", true, Box::new(|| crit5(&ev))),
        (6, "symbolic shuffle expansion, k <= 10", true, Box::new(crit6)),
        (7, "height-one generating series", true, Box::new(crit7)),
        (8, "weight <= 6 relations and recovered coefficients", true, Box::new(|| crit8(&ev))),
        (9, "dimension tables, k = 2..8", true, Box::new(crit9)),
        (10, "conjecture evidence", false, Box::new(|| crit10(&ev))),
        (11, "property suites", true, Box::new(crit11)),
    ];
    let mut failed = 0;
    for (n, name, gating, run) in criteria {
        let start = Instant::now();
        let o = run();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        if !o.pass && gating {
            failed += 1;
        }
        println!(
            "{tag} criterion {n:>2}: {name} [{}, {:.1}s]{}",
            o.detail,
            start.elapsed().as_secs_f64(),
            if gating { "" } else { " (non-gating)" }
        );
    }
    if failed > 0 {
        println!("{failed} gating criteria failed");
        std::process::exit(1);
    }
    println!("all gating criteria passed");
}
