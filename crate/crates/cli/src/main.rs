//! `mtv`: evaluate multiple T-values and related constants, check identities
//! among them and run integer-relation experiments.

mod lindep_expr;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use mtv::indices::{dual, shuffle_indices, stuffle, Index, SignedIndex};
use mtv::lindep::{
    find_integer_relation, format_dimension_table, recommended_digits,
    relation_lattice_rank, DimFamily, DimensionReport, RankOptions, RelationResult, RelationStatus,
};
use mtv::relations::{
    check_conj53, check_duality, check_genfun, check_intermediate_sum, check_machide_conjecture,
    check_parity_depth2, check_parity_depth3, check_shuffle_TT_expansion, check_sum_formula_depth2,
    check_sum_formula_depth3, check_weighted_dzv, format_reports_table, reduce_weight_le6,
    VerificationReport,
};
use mtv::series_eval::{BigReal, Precision};
use mtv::values::{check_genfun_box, Evaluator, Family, ValueCache, CACHE_DIR_ENV};
use mtv::Error;
use rayon::prelude::*;
use rug::Rational;
use serde::Serialize;

use output::Format;

const DEFAULT_DIGITS: u32 = 60;

#[derive(Parser, Debug)]
#[command(name = "mtv", version, about = "Multiple T-values: evaluation, identities and integer relations")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Working precision in decimal digits [default: 60]
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(15..))]
    digits: Option<u32>,
    /// Override the number of series terms
    #[arg(long, global = true)]
    terms: Option<usize>,
    /// Directory of the persistent value cache
    #[arg(long, global = true, env = CACHE_DIR_ENV)]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "table")]
    format: Format,
    /// Shorthand for --format json
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    jobs: Option<u32>,
    /// Record wall-clock time in verification reports
    #[arg(long, global = true)]
    timings: bool,
}

impl Global {
    fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else {
            self.format
        }
    }

    fn digits(&self) -> u32 {
        self.digits.unwrap_or(DEFAULT_DIGITS)
    }

    /// Digits for a computation that needs at least `min`; an explicit
    /// `--digits` is honoured as given.
    fn digits_at_least(&self, min: u32) -> u32 {
        self.digits.unwrap_or(DEFAULT_DIGITS.max(min))
    }

    fn evaluator(&self, digits: u32) -> Result<Evaluator, Error> {
        let mut prec = Precision::for_digits(digits);
        if let Some(n) = self.terms {
            prec = prec.with_terms(n);
        }
        let mut ev = Evaluator::new(prec);
        if let Some(dir) = &self.cache_dir {
            ev = ev.with_cache(Arc::new(ValueCache::open(dir)?));
        }
        Ok(ev)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate T, t, zeta or an alternating zeta value
    Eval {
        /// T, t, zeta or alt
        family: String,
        /// Index such as 1,3 (alternating: 1,2;-,+)
        index: String,
    },
    /// Dual of an admissible index
    Dual { index: String },
    /// Shuffle product of two indices, as T-value indices
    Shuffle { a: String, b: String },
    /// Stuffle (harmonic) product of two indices
    Stuffle { a: String, b: String },
    /// Check identities and print pass/fail reports
    Verify(VerifyArgs),
    /// Numeric dimension of the span of weight-k values
    Dims {
        /// T, t, union (T+t), intersection (T∩t) or zeta
        family: String,
        /// Weight range such as 2..8
        #[arg(long, default_value = "2..8")]
        k: String,
        /// Coefficient bound in digits for the relation search
        #[arg(long)]
        coeff_digits: Option<u32>,
        /// Allow precision below the recommended schedule
        #[arg(long)]
        allow_low_precision: bool,
    },
    /// Search for an integer relation among constants
    Lindep {
        /// Constants: integers, pi, log2, T(..), t(..), zeta(..), with ^ and *
        #[arg(required = true, num_args = 1..)]
        exprs: Vec<String>,
        /// Coefficient bound in digits
        #[arg(long)]
        coeff_digits: Option<u32>,
    },
    /// Both sides of the height-one generating series identity
    Genfun {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
    },
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// duality, sum2, sum3, interm, dzv, parity2, shuffle, genfun, machide,
    /// conj53, weight6, parity3 or all
    identity: String,
    /// Weight range for duality
    #[arg(long)]
    weight: Option<String>,
    /// Weight range for the sum formulas, shuffle and machide
    #[arg(long)]
    k: Option<String>,
    /// Largest weight for parity2 and parity3
    #[arg(long)]
    max_weight: Option<u32>,
    /// Generating series point X
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    /// Generating series point Y
    #[arg(long, allow_hyphen_values = true)]
    y: Option<String>,
    /// Parameter triple p,q,m (conj53) or p,q,r (parity3); repeatable
    #[arg(long = "params")]
    params: Vec<String>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(j) = cli.global.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j as usize).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::CacheIo { .. }
        | Error::DegenerateLattice(_)
        | Error::LogDivergence
        | Error::NotEvaluable(..)
        | Error::HypergeometricPole(_) => 1,
        _ => 2,
    }
}

fn run(cli: &Cli) -> Result<u8, Error> {
    let g = &cli.global;
    match &cli.command {
        Command::Eval { family, index } => cmd_eval(g, family, index),
        Command::Dual { index } => {
            let ix: Index = index.parse()?;
            let d = dual(&ix)?;
            emit(g, &serde_json::json!({ "index": ix.to_string(), "dual": d.to_string() }), || {
                format!("{d}\n")
            });
            Ok(0)
        }
        Command::Shuffle { a, b } => {
            let p = shuffle_indices(&a.parse()?, &b.parse()?)?;
            emit_combo(g, "shuffle", a, b, &p);
            Ok(0)
        }
        Command::Stuffle { a, b } => {
            let p = stuffle(&a.parse()?, &b.parse()?);
            emit_combo(g, "stuffle", a, b, &p);
            Ok(0)
        }
        Command::Verify(args) => cmd_verify(g, args),
        Command::Dims { family, k, coeff_digits, allow_low_precision } => {
            cmd_dims(g, family, k, *coeff_digits, *allow_low_precision)
        }
        Command::Lindep { exprs, coeff_digits } => cmd_lindep(g, exprs, *coeff_digits),
        Command::Genfun { x, y } => cmd_genfun(g, x, y),
    }
}

/// Print `value` as JSON, CSV (a single row) or the given table text.
fn emit<T: Serialize>(g: &Global, value: &T, table: impl FnOnce() -> String) {
    let s = match g.format() {
        Format::Json => output::json(value),
        Format::Csv => output::csv(std::slice::from_ref(value)),
        Format::Table => table(),
    };
    print!("{s}");
}

fn emit_rows<T: Serialize>(g: &Global, rows: &[T], table: impl FnOnce() -> String) {
    let s = match g.format() {
        Format::Json => output::json(rows),
        Format::Csv => output::csv(rows),
        Format::Table => table(),
    };
    print!("{s}");
}

#[derive(Serialize)]
struct ComboTerm {
    index: String,
    coefficient: String,
}

fn emit_combo(g: &Global, op: &str, a: &str, b: &str, p: &mtv::indices::LinearCombo<Index>) {
    let terms: Vec<ComboTerm> = p
        .iter()
        .map(|(ix, c)| ComboTerm { index: ix.to_string(), coefficient: c.to_string() })
        .collect();
    match g.format() {
        Format::Csv => print!("{}", output::csv(&terms)),
        _ => emit(
            g,
            &serde_json::json!({ "operation": op, "a": a, "b": b, "terms": terms }),
            || format!("{p}\n"),
        ),
    }
}

#[derive(Serialize)]
struct EvalOutput {
    family: String,
    index: String,
    digits: u32,
    value: String,
    error: String,
}

fn cmd_eval(g: &Global, family: &str, index: &str) -> Result<u8, Error> {
    let family = Family::from_str(family)?;
    let z = match family {
        Family::AltZeta => SignedIndex::from_str(index)?,
        _ => {
            let ix: Index = index.parse()?;
            ix.require_admissible()?;
            SignedIndex::all_plus(ix)
        }
    };
    let digits = g.digits();
    let ev = g.evaluator(digits)?;
    let v = ev.value(family, &z)?;
    let shown = match family {
        Family::AltZeta => z.to_string(),
        _ => z.index().to_string(),
    };
    let out = EvalOutput {
        family: family.to_string(),
        index: shown,
        digits,
        value: v.to_fixed(digits as usize),
        error: BigReal::exact(v.error().clone()).to_decimal(3),
    };
    emit(g, &out, || {
        format!("{}({}) = {}\nerror <= {}\n", out.family, out.index, out.value, out.error)
    });
    Ok(0)
}

/// Inclusive range `a..b`, `a..=b` or a single value.
fn parse_range(s: &str) -> Result<Vec<u32>, Error> {
    let bad = || Error::Parse(format!("bad range '{s}' (expected a..b or a single number)"));
    let num = |t: &str| t.trim().parse::<u32>().map_err(|_| bad());
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let n = num(s)?;
            (n, n)
        }
    };
    if lo > hi {
        return Err(bad());
    }
    Ok((lo..=hi).collect())
}

fn parse_triple(s: &str) -> Result<(u32, u32, u32), Error> {
    let v: Vec<u32> = s
        .split(',')
        .map(|t| t.trim().parse::<u32>())
        .collect::<Result<_, _>>()
        .map_err(|_| Error::Parse(format!("bad parameter triple '{s}'")))?;
    match v[..] {
        [a, b, c] => Ok((a, b, c)),
        _ => Err(Error::Parse(format!("expected three comma-separated integers, got '{s}'"))),
    }
}

fn parse_rational(s: &str) -> Result<Rational, Error> {
    Rational::from_str(s.trim()).map_err(|_| Error::Parse(format!("bad rational '{s}'")))
}

type Job = Box<dyn Fn(&Evaluator) -> mtv::Result<Vec<VerificationReport>> + Send + Sync>;

fn one<F>(f: F) -> Job
where
    F: Fn(&Evaluator) -> mtv::Result<VerificationReport> + Send + Sync + 'static,
{
    Box::new(move |ev| f(ev).map(|r| vec![r]))
}

/// Verification jobs for one identity, with the digits they need.
fn verify_jobs(g: &Global, a: &VerifyArgs, name: &str) -> Result<Vec<(u32, Job)>, Error> {
    let digits = g.digits();
    let range = |given: &Option<String>, default: &str| parse_range(given.as_deref().unwrap_or(default));
    let mut jobs: Vec<(u32, Job)> = Vec::new();
    match name {
        "duality" => {
            for w in range(&a.weight, "2..8")? {
                jobs.push((digits, Box::new(move |ev| check_duality(ev, w))));
            }
        }
        "sum2" => {
            for k in range(&a.k, "3..12")? {
                jobs.push((digits, one(move |ev| check_sum_formula_depth2(ev, k))));
            }
        }
        "sum3" => {
            for k in range(&a.k, "4..10")? {
                jobs.push((digits, one(move |ev| check_sum_formula_depth3(ev, k))));
            }
        }
        "interm" => {
            for k in range(&a.k, "3..10")? {
                jobs.push((digits, one(move |ev| check_intermediate_sum(ev, k))));
            }
        }
        "dzv" => {
            for k in range(&a.k, "3..10")? {
                jobs.push((digits, one(move |ev| check_weighted_dzv(ev, k))));
            }
        }
        "machide" => {
            for k in range(&a.k, "4..8")? {
                jobs.push((digits, one(move |ev| check_machide_conjecture(ev, k))));
            }
        }
        "parity2" => {
            let max = a.max_weight.unwrap_or(11);
            for w in (3..=max).filter(|w| w % 2 == 1) {
                for q in 2..w {
                    let p = w - q;
                    jobs.push((digits, one(move |ev| check_parity_depth2(ev, p, q))));
                }
            }
        }
        "shuffle" => {
            for k in range(&a.k, "4..10")? {
                for j in 2..=k.saturating_sub(2) {
                    jobs.push((digits, Box::new(move |_| check_shuffle_TT_expansion(j, k).map(|r| vec![r]))));
                }
            }
        }
        "genfun" => {
            let points: Vec<(String, String)> = match (&a.x, &a.y) {
                (Some(x), Some(y)) => vec![(x.clone(), y.clone())],
                (None, None) => vec![("1/8".into(), "-1/8".into()), ("1/16".into(), "-1/16".into())],
                _ => return Err(Error::Parse("genfun needs both --x and --y".into())),
            };
            for (x, y) in points {
                let (x, y) = (parse_rational(&x)?, parse_rational(&y)?);
                check_genfun_box(&x, &y)?;
                jobs.push((digits, one(move |ev| check_genfun(ev, &x, &y))));
            }
        }
        "weight6" => jobs.push((digits, Box::new(reduce_weight_le6))),
        "conj53" => {
            let triples = if a.params.is_empty() {
                vec![(1, 2, 1), (2, 2, 2), (1, 3, 2)]
            } else {
                a.params.iter().map(|s| parse_triple(s)).collect::<Result<_, _>>()?
            };
            for (p, q, m) in triples {
                let d = g.digits_at_least(recommended_digits(p + q + m));
                jobs.push((d, one(move |ev| check_conj53(ev, p, q, m))));
            }
        }
        "parity3" => {
            let triples: Vec<(u32, u32, u32)> = if a.params.is_empty() {
                let max = a.max_weight.unwrap_or(8);
                let mut t = Vec::new();
                for p in 0..max {
                    for q in 1..max {
                        for r in 1..max {
                            if 2 * (p + q + r) + 2 <= max {
                                t.push((p, q, r));
                            }
                        }
                    }
                }
                t
            } else {
                a.params.iter().map(|s| parse_triple(s)).collect::<Result<_, _>>()?
            };
            for (p, q, r) in triples {
                let d = g.digits_at_least(recommended_digits(2 * (p + q + r) + 2));
                jobs.push((d, one(move |ev| check_parity_depth3(ev, p, q, r))));
            }
        }
        "all" => {
            for n in ["duality", "sum2", "sum3", "interm", "dzv", "parity2", "shuffle", "genfun", "weight6", "machide", "conj53", "parity3"] {
                jobs.extend(verify_jobs(g, a, n)?);
            }
        }
        other => return Err(Error::Parse(format!("unknown identity '{other}'"))),
    }
    Ok(jobs)
}

fn cmd_verify(g: &Global, a: &VerifyArgs) -> Result<u8, Error> {
    let jobs = verify_jobs(g, a, &a.identity)?;
    let mut evaluators: Vec<(u32, Evaluator)> = Vec::new();
    for (d, _) in &jobs {
        if !evaluators.iter().any(|(e, _)| e == d) {
            evaluators.push((*d, g.evaluator(*d)?));
        }
    }
    let ev_for = |d: u32| &evaluators.iter().find(|(e, _)| *e == d).expect("evaluator built").1;
    let results: Vec<mtv::Result<Vec<VerificationReport>>> = jobs
        .par_iter()
        .map(|(d, job)| {
            let start = Instant::now();
            let mut reps = job(ev_for(*d))?;
            if g.timings {
                let share = start.elapsed().as_secs_f64() * 1e3 / reps.len().max(1) as f64;
                for r in &mut reps {
                    r.wall_time_ms = Some(share);
                }
            }
            Ok(reps)
        })
        .collect();
    let mut reports = Vec::new();
    for r in results {
        reports.extend(r?);
    }
    emit_rows(g, &reports, || {
        let mut s = format_reports_table(&reports);
        for r in reports.iter().filter(|r| r.note.is_some()) {
            s.push_str(&format!("{} {}: {}\n", r.name, r.params, r.note.as_deref().unwrap_or("")));
        }
        let failed = reports.iter().filter(|r| r.gates()).count();
        s.push_str(&format!("{} checks, {} theorem failures\n", reports.len(), failed));
        s
    });
    Ok(if reports.iter().any(VerificationReport::gates) { 3 } else { 0 })
}

fn cmd_dims(
    g: &Global,
    family: &str,
    k: &str,
    coeff_digits: Option<u32>,
    allow_low_precision: bool,
) -> Result<u8, Error> {
    let family = DimFamily::from_str(family)?;
    let weights = parse_range(k)?;
    let opts = RankOptions { coeff_bound_digits: coeff_digits, allow_low_precision, ..RankOptions::default() };
    let need = weights.iter().map(|&w| recommended_digits(w)).max().unwrap_or(0);
    let ev = g.evaluator(g.digits_at_least(need))?;
    let reports: Vec<DimensionReport> = weights
        .par_iter()
        .map(|&w| relation_lattice_rank(&ev, family, w, &opts))
        .collect::<mtv::Result<_>>()?;
    emit_rows(g, &reports, || {
        let mut s = format_dimension_table(&reports);
        s.push_str(&format!("{} at {} digits\n", mtv::lindep::CAVEAT, ev.precision().digits()));
        s
    });
    Ok(0)
}

#[derive(Serialize)]
struct LindepOutput {
    inputs: Vec<String>,
    digits: u32,
    found: bool,
    #[serde(flatten)]
    relation: Option<RelationResult>,
}

fn cmd_lindep(g: &Global, exprs: &[String], coeff_digits: Option<u32>) -> Result<u8, Error> {
    let terms = exprs.iter().map(|e| lindep_expr::parse(e)).collect::<Result<Vec<_>, _>>()?;
    let digits = g.digits();
    let ev = g.evaluator(digits)?;
    let xs = terms.par_iter().map(|t| t.eval(&ev)).collect::<mtv::Result<Vec<_>>>()?;
    let rel = find_integer_relation(&xs, coeff_digits)?;
    let out = LindepOutput { inputs: exprs.to_vec(), digits, found: rel.is_some(), relation: rel };
    emit(g, &out, || match &out.relation {
        None => "no relation found\n".to_string(),
        Some(r) => {
            let coeffs: Vec<String> = r.coefficients.iter().map(|c| c.to_string()).collect();
            let status = match r.status {
                RelationStatus::Accepted => "accepted",
                RelationStatus::Inconclusive => "inconclusive",
            };
            format!(
                "{}\nresidual {}, {status}, coefficients below 10^{}\n",
                coeffs.join(","),
                r.residual.to_decimal(3),
                r.coeff_bound_digits
            )
        }
    });
    Ok(0)
}

#[derive(Serialize)]
struct GenfunOutput {
    x: String,
    y: String,
    digits: u32,
    lhs: String,
    rhs: String,
    residual: String,
}

fn cmd_genfun(g: &Global, x: &str, y: &str) -> Result<u8, Error> {
    let (xr, yr) = (parse_rational(x)?, parse_rational(y)?);
    check_genfun_box(&xr, &yr)?;
    let digits = g.digits();
    let ev = g.evaluator(digits)?;
    let lhs = ev.genfun_lhs(&xr, &yr)?;
    let rhs = ev.genfun_rhs(&xr, &yr)?;
    let res = (&lhs - &rhs).abs();
    let out = GenfunOutput {
        x: xr.to_string(),
        y: yr.to_string(),
        digits,
        lhs: lhs.to_fixed(digits as usize),
        rhs: rhs.to_fixed(digits as usize),
        residual: res.to_decimal(3),
    };
    emit(g, &out, || format!("lhs = {}\nrhs = {}\nresidual = {}\n", out.lhs, out.rhs, out.residual));
    Ok(0)
}
