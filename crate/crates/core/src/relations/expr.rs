//! Linear combinations of products of T-, t- and zeta values.

use rug::Rational;

use crate::error::Result;
use crate::indices::{dual, shuffle_indices, Index, LinearCombo};
use crate::series_eval::BigReal;
use crate::values::{Evaluator, Family};

/// A product of values; the empty product is 1.
pub type Monomial = Vec<(Family, Index)>;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Expr(pub LinearCombo<Monomial>);

fn ix(parts: &[u32]) -> Index {
    Index::new(parts.to_vec()).expect("positive parts")
}

impl Expr {
    pub fn zero() -> Self {
        Expr(LinearCombo::new())
    }

    pub fn one() -> Self {
        Expr(LinearCombo::term(Vec::new(), 1))
    }

    pub fn value(family: Family, parts: &[u32]) -> Self {
        Expr(LinearCombo::term(vec![(family, ix(parts))], 1))
    }

    pub fn t(parts: &[u32]) -> Self {
        Self::value(Family::T, parts)
    }

    pub fn zeta(parts: &[u32]) -> Self {
        Self::value(Family::Zeta, parts)
    }

    pub fn add(mut self, c: impl Into<Rational>, other: &Expr) -> Self {
        self.0.add_combo(&other.0, &c.into());
        self
    }

    pub fn sub(self, other: &Expr) -> Self {
        self.add(-1, other)
    }

    pub fn scaled(&self, c: impl Into<Rational>) -> Self {
        Expr(self.0.scaled(&c.into()))
    }

    pub fn mul(&self, other: &Expr) -> Self {
        let mut out = LinearCombo::new();
        for (a, ca) in self.0.iter() {
            for (b, cb) in other.0.iter() {
                let mut m = a.clone();
                m.extend(b.iter().cloned());
                m.sort();
                out.add_term(m, Rational::from(ca * cb));
            }
        }
        Expr(out)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Expand every product `T(a)T(b)` of two T-values by the shuffle product.
    pub fn linearize_t(&self) -> Result<Expr> {
        let mut out = LinearCombo::new();
        for (m, c) in self.0.iter() {
            let lin = match m.as_slice() {
                [] => LinearCombo::term(Index::empty(), 1),
                [(Family::T, a)] => LinearCombo::term(a.clone(), 1),
                [(Family::T, a), (Family::T, b)] => shuffle_indices(a, b)?,
                _ => {
                    out.add_term(m.clone(), c.clone());
                    continue;
                }
            };
            for (i, ci) in lin.iter() {
                let key = if i.is_empty() { Vec::new() } else { vec![(Family::T, i.clone())] };
                out.add_term(key, Rational::from(c * ci));
            }
        }
        Ok(Expr(out))
    }

    /// Apply duality to every single T-value, keeping the member of each dual
    /// pair with smaller depth (ties broken by index order).
    pub fn canonical_duals(&self) -> Result<Expr> {
        self.0
            .try_map_terms(|m| -> Result<Monomial> {
                match m.as_slice() {
                    [(Family::T, a)] => {
                        let d = dual(a)?;
                        let keep = (d.depth(), &d) < (a.depth(), a);
                        Ok(vec![(Family::T, if keep { d } else { a.clone() })])
                    }
                    _ => Ok(m.clone()),
                }
            })
            .map(Expr)
    }

    pub fn eval(&self, ev: &Evaluator) -> Result<BigReal> {
        let bits = ev.precision().bits;
        ev.eval_combo(&self.0, |m| {
            let mut acc = BigReal::from_int(1, bits);
            for (family, i) in m {
                acc = &acc * &ev.value(*family, &crate::indices::SignedIndex::all_plus(i.clone()))?;
            }
            Ok(acc)
        })
    }
}

impl std::fmt::Display for Expr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_zero() {
            return f.write_str("0");
        }
        for (n, (m, c)) in self.0.iter().enumerate() {
            let neg = *c < 0;
            let a = Rational::from(c.abs_ref());
            match (n, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let unit = a == 1;
            if !unit || m.is_empty() {
                write!(f, "{a}")?;
            }
            for (k, (family, i)) in m.iter().enumerate() {
                if k > 0 || !unit {
                    f.write_str("*")?;
                }
                let parts: Vec<String> = i.parts().iter().map(u32::to_string).collect();
                write!(f, "{}({})", family, parts.join(","))?;
            }
        }
        Ok(())
    }
}
