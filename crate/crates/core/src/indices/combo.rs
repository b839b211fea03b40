use std::collections::btree_map::{self, BTreeMap};
use std::fmt;

use rug::{Integer, Rational};

/// Formal rational linear combination of terms. Zero coefficients are never
/// stored; iteration follows the term's `Ord`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCombo<T: Ord> {
    terms: BTreeMap<T, Rational>,
}

impl<T: Ord> Default for LinearCombo<T> {
    fn default() -> Self {
        LinearCombo {
            terms: BTreeMap::new(),
        }
    }
}

impl<T: Ord + Clone> LinearCombo<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn term(t: T, coeff: impl Into<Rational>) -> Self {
        let mut c = Self::new();
        c.add_term(t, coeff);
        c
    }

    pub fn add_term(&mut self, t: T, coeff: impl Into<Rational>) {
        let coeff = coeff.into();
        if coeff == 0 {
            return;
        }
        match self.terms.entry(t) {
            btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if *o.get() == 0 {
                    o.remove();
                }
            }
        }
    }

    pub fn coeff(&self, t: &T) -> Rational {
        self.terms.get(t).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&T, &Rational)> {
        self.terms.iter()
    }

    pub fn terms(&self) -> impl Iterator<Item = &T> {
        self.terms.keys()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of all coefficients.
    pub fn mass(&self) -> Rational {
        self.terms.values().fold(Rational::new(), |acc, c| acc + c)
    }

    pub fn scaled(&self, s: &Rational) -> Self {
        let mut out = Self::new();
        for (t, c) in &self.terms {
            out.add_term(t.clone(), Rational::from(c * s));
        }
        out
    }

    pub fn add_combo(&mut self, other: &Self, factor: &Rational) {
        for (t, c) in &other.terms {
            self.add_term(t.clone(), Rational::from(c * factor));
        }
    }

    pub fn map_terms<U: Ord + Clone>(&self, mut f: impl FnMut(&T) -> U) -> LinearCombo<U> {
        let mut out = LinearCombo::new();
        for (t, c) in &self.terms {
            out.add_term(f(t), c.clone());
        }
        out
    }

    pub fn try_map_terms<U: Ord + Clone, E>(
        &self,
        mut f: impl FnMut(&T) -> Result<U, E>,
    ) -> Result<LinearCombo<U>, E> {
        let mut out = LinearCombo::new();
        for (t, c) in &self.terms {
            out.add_term(f(t)?, c.clone());
        }
        Ok(out)
    }

    /// Coefficients all integral?
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| *c.denom() == 1)
    }

    pub fn integer_coeff(&self, t: &T) -> Option<Integer> {
        let c = self.coeff(t);
        (*c.denom() == 1).then(|| c.numer().clone())
    }
}

impl<T: Ord + Clone> std::ops::Sub for &LinearCombo<T> {
    type Output = LinearCombo<T>;

    fn sub(self, rhs: &LinearCombo<T>) -> LinearCombo<T> {
        let mut out = self.clone();
        out.add_combo(rhs, &Rational::from(-1));
        out
    }
}

impl<T: Ord + Clone> std::ops::Add for &LinearCombo<T> {
    type Output = LinearCombo<T>;

    fn add(self, rhs: &LinearCombo<T>) -> LinearCombo<T> {
        let mut out = self.clone();
        out.add_combo(rhs, &Rational::from(1));
        out
    }
}

impl<T: Ord + Clone> FromIterator<(T, Rational)> for LinearCombo<T> {
    fn from_iter<I: IntoIterator<Item = (T, Rational)>>(iter: I) -> Self {
        let mut out = Self::new();
        for (t, c) in iter {
            out.add_term(t, c);
        }
        out
    }
}

/// `4*(1,3) + 2*(2,2)`; the zero combination prints as `0`.
impl<T: Ord + fmt::Display> fmt::Display for LinearCombo<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (t, c)) in self.terms.iter().enumerate() {
            let neg = *c < 0;
            match (i, neg) {
                (0, false) => {}
                (0, true) => f.write_str("-")?,
                (_, false) => f.write_str(" + ")?,
                (_, true) => f.write_str(" - ")?,
            }
            write!(f, "{}*({})", Rational::from(c.abs_ref()), t)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indices::Index;

    fn ix(s: &str) -> Index {
        s.parse().unwrap()
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let mut c = LinearCombo::new();
        c.add_term(ix("2"), 3);
        c.add_term(ix("2"), -3);
        assert!(c.is_zero());
        assert_eq!(c.to_string(), "0");
    }

    #[test]
    fn display_orders_by_weight_then_lex() {
        let mut c = LinearCombo::new();
        c.add_term(ix("4"), 1);
        c.add_term(ix("2,2"), 2);
        c.add_term(ix("1,1,1,1,1"), Rational::from((-2, 3)));
        assert_eq!(c.to_string(), "2*(2,2) + 1*(4) - 2/3*(1,1,1,1,1)");
    }
}
