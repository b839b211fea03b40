//! The small constant language accepted by `mtv lindep`:
//! products and powers of integers, `pi`, `log2`, `T(..)`, `t(..)` and `zeta(..)`.

use mtv::indices::{Index, SignedIndex};
use mtv::series_eval::{constants, BigReal};
use mtv::values::{Evaluator, Family};
use mtv::{Error, Result};
use rug::{Float, Integer};

#[derive(Clone, Debug, PartialEq)]
pub enum Atom {
    Int(Integer),
    Pi,
    Log2,
    Value(Family, Index),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    /// Factors with their exponents.
    pub factors: Vec<(Atom, u32)>,
}

fn parse_err(src: &str, msg: &str) -> Error {
    Error::Parse(format!("{msg} in '{src}'"))
}

pub fn parse(src: &str) -> Result<Term> {
    let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(parse_err(src, "empty expression"));
    }
    let mut factors = Vec::new();
    for piece in split_top_level(&s, '*') {
        let (base, exp) = match rsplit_power(piece) {
            Some((b, e)) => {
                let e: u32 = e.parse().map_err(|_| parse_err(src, "exponent must be a non-negative integer"))?;
                (b, e)
            }
            None => (piece, 1),
        };
        factors.push((parse_atom(base, src)?, exp));
    }
    Ok(Term { factors })
}

fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut depth = 0i32;
    let mut start = 0;
    let mut out = Vec::new();
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn rsplit_power(s: &str) -> Option<(&str, &str)> {
    let close = s.rfind(')').unwrap_or(0);
    s[close..].find('^').map(|i| (&s[..close + i], &s[close + i + 1..]))
}

fn parse_atom(s: &str, src: &str) -> Result<Atom> {
    match s {
        "pi" => return Ok(Atom::Pi),
        "log2" => return Ok(Atom::Log2),
        _ => {}
    }
    if let Ok(i) = s.parse::<Integer>() {
        return Ok(Atom::Int(i));
    }
    let open = s.find('(').ok_or_else(|| parse_err(src, &format!("unknown constant '{s}'")))?;
    if !s.ends_with(')') {
        return Err(parse_err(src, "missing ')'"));
    }
    let family = match &s[..open] {
        "T" => Family::T,
        "t" => Family::Hoffman,
        "zeta" | "Z" => Family::Zeta,
        other => return Err(parse_err(src, &format!("unknown function '{other}'"))),
    };
    let index: Index = s[open + 1..s.len() - 1].parse()?;
    index.require_admissible()?;
    Ok(Atom::Value(family, index))
}

impl Term {
    pub fn eval(&self, ev: &Evaluator) -> Result<BigReal> {
        let bits = ev.precision().bits;
        let mut acc = BigReal::from_int(1, bits);
        for (atom, e) in &self.factors {
            let base = match atom {
                Atom::Int(i) => BigReal::from_int(i.clone(), bits),
                Atom::Pi => BigReal::exact(Float::with_val(bits, &constants(bits).pi)),
                Atom::Log2 => BigReal::exact(Float::with_val(bits, &constants(bits).log2)),
                Atom::Value(f, ix) => ev.value(*f, &SignedIndex::all_plus(ix.clone()))?,
            };
            acc = &acc * &base.pow(*e);
        }
        Ok(acc)
    }
}
