use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use rayon::prelude::*;
use rug::Rational;

use super::cache::ValueCache;
use super::key::{Family, ValueKey};
use crate::error::Result;
use crate::indices::{
    expand_hoffman, expand_mtv, index_to_word, signed_index_to_eval_word, EvalWord, Index, Letter,
    LinearCombo, Sign, SignedIndex,
};
use crate::series_eval::{chen_evaluate, chen_evaluate_forms, BigReal, Form, Precision};

type Slot = (Family, Index, Vec<Sign>);

/// Evaluates level-2 values at one fixed precision, memoizing every result
/// and optionally reading and writing a [`ValueCache`].
///
/// All methods take `&self` and may be called from several threads.
#[derive(Debug)]
pub struct Evaluator {
    prec: Precision,
    memo: RwLock<HashMap<Slot, BigReal>>,
    cache: Option<Arc<ValueCache>>,
}

impl Evaluator {
    pub fn new(prec: Precision) -> Self {
        Evaluator {
            prec,
            memo: RwLock::new(HashMap::new()),
            cache: None,
        }
    }

    pub fn for_digits(digits: u32) -> Self {
        Self::new(Precision::for_digits(digits))
    }

    pub fn with_cache(mut self, cache: Arc<ValueCache>) -> Self {
        self.cache = Some(cache);
        self
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    pub fn cache(&self) -> Option<&Arc<ValueCache>> {
        self.cache.as_ref()
    }

    /// A fresh evaluator at twice the precision and series order, sharing the cache.
    pub fn doubled(&self) -> Evaluator {
        Evaluator {
            prec: self.prec.doubled(),
            memo: RwLock::new(HashMap::new()),
            cache: self.cache.clone(),
        }
    }

    fn lookup(&self, slot: Slot, compute: impl FnOnce() -> Result<BigReal>) -> Result<BigReal> {
        if let Some(v) = self.memo.read().expect("memo lock").get(&slot) {
            return Ok(v.clone());
        }
        let key = ValueKey {
            family: slot.0,
            index: slot.1.clone(),
            signs: slot.2.clone(),
            precision: self.prec,
        };
        let value = match self.cache.as_ref().and_then(|c| c.get(&key)) {
            Some(v) => v,
            None => {
                let v = compute()?;
                if let Some(c) = &self.cache {
                    if let Err(e) = c.put(&key, &v) {
                        log::warn!("could not write cache record: {e}");
                    }
                }
                v
            }
        };
        self.memo.write().expect("memo lock").insert(slot, value.clone());
        Ok(value)
    }

    /// `T(k)` from the `Omega_1 / Omega_0` word, with `Omega_1` applied as a
    /// single two-letter operator.
    pub fn mtv(&self, ix: &Index) -> Result<BigReal> {
        ix.require_admissible()?;
        self.lookup((Family::T, ix.clone(), Vec::new()), || {
            let forms: Vec<Form> = index_to_word(ix)?
                .letters()
                .iter()
                .map(|&b| if b == 1 { Form::omega_one() } else { Form::letter(Letter::Zero) })
                .collect();
            chen_evaluate_forms(&forms, self.prec)
        })
    }

    /// `T(k)` by expanding every `Omega_1` into `letter(+1) - letter(-1)` and
    /// summing the `2^r` resulting words.
    pub fn mtv_via_eval_words(&self, ix: &Index) -> Result<BigReal> {
        let word = index_to_word(ix)?;
        let ones: Vec<usize> = (0..word.len()).filter(|&i| word.letters()[i] == 1).collect();
        let words: Vec<(EvalWord, bool)> = (0..1u64 << ones.len())
            .map(|mask| {
                let mut letters: Vec<Letter> = vec![Letter::Zero; word.len()];
                for (j, &pos) in ones.iter().enumerate() {
                    letters[pos] = if mask >> j & 1 == 1 { Letter::MinusOne } else { Letter::PlusOne };
                }
                (EvalWord::new(letters), mask.count_ones() % 2 == 1)
            })
            .collect();
        let parts = words
            .par_iter()
            .map(|(w, negate)| chen_evaluate(w, self.prec).map(|v| if *negate { -&v } else { v }))
            .collect::<Result<Vec<_>>>()?;
        Ok(sum_at(parts, self.prec.bits))
    }

    /// `T(k)` through its expansion into alternating MZVs.
    pub fn mtv_via_alternating(&self, ix: &Index) -> Result<BigReal> {
        self.eval_combo(&expand_mtv(ix)?, |z| self.alt_zeta(z))
    }

    /// Hoffman's `t(k)` through its expansion into alternating MZVs.
    pub fn hoffman(&self, ix: &Index) -> Result<BigReal> {
        ix.require_admissible()?;
        self.lookup((Family::Hoffman, ix.clone(), Vec::new()), || {
            self.eval_combo(&expand_hoffman(ix)?, |z| self.alt_zeta(z))
        })
    }

    pub fn zeta(&self, ix: &Index) -> Result<BigReal> {
        ix.require_admissible()?;
        self.lookup((Family::Zeta, ix.clone(), Vec::new()), || {
            let z = SignedIndex::all_plus(ix.clone());
            chen_evaluate(&signed_index_to_eval_word(&z)?, self.prec)
        })
    }

    /// Alternating MZV; the empty index evaluates to 1.
    pub fn alt_zeta(&self, z: &SignedIndex) -> Result<BigReal> {
        z.require_convergent()?;
        self.lookup((Family::AltZeta, z.index().clone(), z.signs().to_vec()), || {
            chen_evaluate(&signed_index_to_eval_word(z)?, self.prec)
        })
    }

    /// Value of `ix` in `family`; signs are ignored except for [`Family::AltZeta`].
    pub fn value(&self, family: Family, z: &SignedIndex) -> Result<BigReal> {
        match family {
            Family::T => self.mtv(z.index()),
            Family::Hoffman => self.hoffman(z.index()),
            Family::Zeta => self.zeta(z.index()),
            Family::AltZeta => self.alt_zeta(z),
        }
    }

    /// Evaluate many indices of one non-alternating family in parallel,
    /// returning results in input order.
    pub fn eval_many(&self, family: Family, indices: &[Index]) -> Result<Vec<BigReal>> {
        indices
            .par_iter()
            .map(|ix| self.value(family, &SignedIndex::all_plus(ix.clone())))
            .collect()
    }

    /// `sum c_i f(term_i)` with terms evaluated in parallel.
    pub fn eval_combo<T, F>(&self, combo: &LinearCombo<T>, f: F) -> Result<BigReal>
    where
        T: Ord + Clone + Sync,
        F: Fn(&T) -> Result<BigReal> + Sync,
    {
        let terms: Vec<(&T, &Rational)> = combo.iter().collect();
        let parts = terms
            .par_iter()
            .map(|(t, c)| f(t).map(|v| v.mul_rational(c)))
            .collect::<Result<Vec<_>>>()?;
        Ok(sum_at(parts, self.prec.bits))
    }

    /// A combination of T-values; the empty index stands for 1.
    pub fn eval_mtv_combo(&self, combo: &LinearCombo<Index>) -> Result<BigReal> {
        self.eval_combo(combo, |ix| {
            if ix.is_empty() {
                Ok(BigReal::from_int(1, self.prec.bits))
            } else {
                self.mtv(ix)
            }
        })
    }

    /// A combination of t-values; the empty index stands for 1.
    pub fn eval_hoffman_combo(&self, combo: &LinearCombo<Index>) -> Result<BigReal> {
        self.eval_combo(combo, |ix| {
            if ix.is_empty() {
                Ok(BigReal::from_int(1, self.prec.bits))
            } else {
                self.hoffman(ix)
            }
        })
    }
}

fn sum_at(parts: Vec<BigReal>, bits: u32) -> BigReal {
    parts.iter().fold(BigReal::zero(bits), |acc, v| &acc + v)
}

/// `T(k)` at `digits` decimal digits.
#[allow(non_snake_case)]
pub fn T_value(ix: &Index, digits: u32) -> Result<BigReal> {
    Evaluator::for_digits(digits).mtv(ix)
}

/// Hoffman's `t(k)` at `digits` decimal digits.
pub fn t_value(ix: &Index, digits: u32) -> Result<BigReal> {
    Evaluator::for_digits(digits).hoffman(ix)
}

pub fn zeta_value(ix: &Index, digits: u32) -> Result<BigReal> {
    Evaluator::for_digits(digits).zeta(ix)
}

pub fn alt_zeta_value(z: &SignedIndex, digits: u32) -> Result<BigReal> {
    Evaluator::for_digits(digits).alt_zeta(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::series_eval::constants;
    use rug::Float;

    fn ix(s: &str) -> Index {
        s.parse().unwrap()
    }

    fn close(a: &BigReal, b: &Float, tol: f64) -> bool {
        Float::with_val(a.prec(), a.value() - b).abs().to_f64() < tol
    }

    #[test]
    fn single_values_against_pi() {
        let ev = Evaluator::for_digits(50);
        let bits = ev.precision().bits;
        let pi = constants(bits).pi.clone();
        let pi2 = Float::with_val(bits, pi.square_ref());
        assert!(close(&ev.mtv(&ix("2")).unwrap(), &Float::with_val(bits, &pi2 / 4u32), 1e-50));
        assert!(close(&ev.hoffman(&ix("2")).unwrap(), &Float::with_val(bits, &pi2 / 8u32), 1e-50));
        assert!(close(&ev.zeta(&ix("2")).unwrap(), &Float::with_val(bits, &pi2 / 6u32), 1e-50));
        let pi4 = Float::with_val(bits, pi2.square_ref());
        assert!(close(&ev.hoffman(&ix("4")).unwrap(), &Float::with_val(bits, &pi4 / 96u32), 1e-50));
        let z2m = ev.alt_zeta(&"2;-".parse().unwrap()).unwrap();
        assert!(close(&z2m, &-Float::with_val(bits, &pi2 / 12u32), 1e-50));
        let z1m = ev.alt_zeta(&"1;-".parse().unwrap()).unwrap();
        assert!(close(&z1m, &Float::with_val(bits, -&constants(bits).log2), 1e-50));
    }

    #[test]
    fn decimal_anchors() {
        let t2 = T_value(&ix("2"), 30).unwrap();
        assert_eq!(t2.to_fixed(14), "2.46740110027234");
        let t3 = T_value(&ix("3"), 30).unwrap();
        // (7/4) zeta(3)
        assert_eq!(t3.to_fixed(14), "2.10359958052929");
        let h2 = t_value(&ix("2"), 30).unwrap();
        assert_eq!(h2.to_fixed(14), "1.23370055013617");
    }

    #[test]
    fn routes_agree() {
        let ev = Evaluator::for_digits(40);
        for s in ["2", "1,2", "2,3", "1,1,3", "2,1,2"] {
            let a = ev.mtv(&ix(s)).unwrap();
            let b = ev.mtv_via_eval_words(&ix(s)).unwrap();
            let c = ev.mtv_via_alternating(&ix(s)).unwrap();
            assert!((&a - &b).abs_lt(&Float::with_val(64, 1e-45)), "{s}");
            assert!((&a - &c).abs_lt(&Float::with_val(64, 1e-45)), "{s}");
        }
    }

    #[test]
    fn euler_and_duality_examples() {
        let ev = Evaluator::for_digits(40);
        let d = &ev.zeta(&ix("1,2")).unwrap() - &ev.zeta(&ix("3")).unwrap();
        assert!(d.abs_lt(&Float::with_val(64, 1e-45)));
        let d = &ev.mtv(&ix("1,2")).unwrap() - &ev.mtv(&ix("3")).unwrap();
        assert!(d.abs_lt(&Float::with_val(64, 1e-45)));
        let r = &ev.zeta(&ix("6")).unwrap() - &ev.mtv(&ix("6")).unwrap().mul_rational(&Rational::from((32, 63)));
        assert!(r.abs_lt(&Float::with_val(64, 1e-45)));
    }

    #[test]
    fn stuffle_example() {
        let ev = Evaluator::for_digits(40);
        let t2 = ev.hoffman(&ix("2")).unwrap();
        let rhs = ev.eval_hoffman_combo(&crate::indices::stuffle(&ix("2"), &ix("2"))).unwrap();
        assert!((&(&t2 * &t2) - &rhs).abs_lt(&Float::with_val(64, 1e-45)));
    }

    #[test]
    fn errors() {
        let ev = Evaluator::for_digits(20);
        assert!(matches!(ev.mtv(&ix("1")), Err(Error::NotAdmissible(_))));
        assert!(matches!(ev.mtv(&Index::empty()), Err(Error::NotAdmissible(_))));
        assert!(matches!(ev.alt_zeta(&"2,1;-,+".parse().unwrap()), Err(Error::Divergent(_))));
    }

    #[test]
    fn memo_returns_same_value() {
        let ev = Evaluator::for_digits(20);
        let a = ev.mtv(&ix("1,3")).unwrap();
        let b = ev.mtv(&ix("1,3")).unwrap();
        assert_eq!(a.value(), b.value());
    }
}
