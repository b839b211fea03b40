use rug::Rational;

use super::combo::LinearCombo;
use super::index::{Index, Sign, SignedIndex};
use super::word::{EvalWord, Letter};
use crate::error::Result;

/// Signed index with `sigma_i = -1` exactly for the (0-based) positions set in `mask`.
fn signed_by_mask(ix: &Index, mask: u64) -> SignedIndex {
    let signs = (0..ix.depth())
        .map(|i| if mask >> i & 1 == 1 { Sign::Minus } else { Sign::Plus })
        .collect();
    SignedIndex::new(ix.clone(), signs).expect("lengths agree")
}

/// `T(k) = sum_{S} (-1)^{sum_{i in S} i} Z(k; sigma_S)`, from
/// `1[m = i mod 2] = (1 + (-1)^i (-1)^m) / 2` (positions `i` 1-based).
pub fn expand_mtv(ix: &Index) -> Result<LinearCombo<SignedIndex>> {
    if ix.is_empty() {
        return Ok(LinearCombo::term(SignedIndex::all_plus(Index::empty()), 1));
    }
    ix.require_admissible()?;
    let r = ix.depth();
    let mut out = LinearCombo::new();
    for mask in 0..(1u64 << r) {
        let exponent: usize = (0..r).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).sum();
        let c = if exponent % 2 == 0 { 1 } else { -1 };
        out.add_term(signed_by_mask(ix, mask), c);
    }
    Ok(out)
}

/// `t(k) = 2^{-r} sum_{S} (-1)^{|S|} Z(k; sigma_S)`, from `1[m odd] = (1 - (-1)^m) / 2`.
pub fn expand_hoffman(ix: &Index) -> Result<LinearCombo<SignedIndex>> {
    if ix.is_empty() {
        return Ok(LinearCombo::term(SignedIndex::all_plus(Index::empty()), 1));
    }
    ix.require_admissible()?;
    let r = ix.depth();
    let scale = Rational::from((1, 1u64 << r));
    let mut out = LinearCombo::new();
    for mask in 0..(1u64 << r) {
        let c = if mask.count_ones() % 2 == 0 {
            scale.clone()
        } else {
            Rational::from(-&scale)
        };
        out.add_term(signed_by_mask(ix, mask), c);
    }
    Ok(out)
}

/// `e_{c_1} 0^{k_1-1} ... e_{c_r} 0^{k_r-1}` with `c_i = prod_{j >= i} sigma_j`.
pub fn signed_index_to_eval_word(z: &SignedIndex) -> Result<EvalWord> {
    z.require_convergent()?;
    let parts = z.index().parts();
    let mut c = vec![Sign::Plus; parts.len()];
    let mut acc = Sign::Plus;
    for i in (0..parts.len()).rev() {
        acc = acc * z.signs()[i];
        c[i] = acc;
    }
    let mut letters = Vec::with_capacity(z.weight() as usize);
    for (&k, &ci) in parts.iter().zip(&c) {
        letters.push(match ci {
            Sign::Plus => Letter::PlusOne,
            Sign::Minus => Letter::MinusOne,
        });
        letters.extend(std::iter::repeat(Letter::Zero).take(k as usize - 1));
    }
    Ok(EvalWord::new(letters))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ix(s: &str) -> Index {
        s.parse().unwrap()
    }

    fn z(s: &str) -> SignedIndex {
        s.parse().unwrap()
    }

    #[test]
    fn depth_one_expansions() {
        let e = expand_mtv(&ix("2")).unwrap();
        assert_eq!(e.coeff(&z("2;+")), 1);
        assert_eq!(e.coeff(&z("2;-")), -1);
        let e = expand_hoffman(&ix("2")).unwrap();
        assert_eq!(e.coeff(&z("2;+")), Rational::from((1, 2)));
        assert_eq!(e.coeff(&z("2;-")), Rational::from((-1, 2)));
    }

    #[test]
    fn depth_two_signs() {
        let e = expand_mtv(&ix("1,2")).unwrap();
        assert_eq!(e.len(), 4);
        assert_eq!(e.coeff(&z("1,2;+,+")), 1);
        assert_eq!(e.coeff(&z("1,2;-,+")), -1);
        assert_eq!(e.coeff(&z("1,2;+,-")), 1);
        assert_eq!(e.coeff(&z("1,2;-,-")), -1);
        let e = expand_hoffman(&ix("2,2")).unwrap();
        assert_eq!(e.len(), 4);
        assert!(e.iter().all(|(_, c)| c.clone().abs() == Rational::from((1, 4))));
        assert_eq!(e.coeff(&z("2,2;-,-")), Rational::from((1, 4)));
    }

    #[test]
    fn empty_expansions_are_unit() {
        assert_eq!(expand_mtv(&Index::empty()).unwrap().len(), 1);
        assert_eq!(expand_hoffman(&Index::empty()).unwrap().mass(), 1);
        assert!(expand_mtv(&ix("2,1")).is_err());
    }

    #[test]
    fn eval_words() {
        assert_eq!(signed_index_to_eval_word(&z("2;+")).unwrap().to_string(), "+0");
        assert_eq!(signed_index_to_eval_word(&z("2;-")).unwrap().to_string(), "-0");
        assert_eq!(signed_index_to_eval_word(&z("1,2;-,+")).unwrap().to_string(), "-+0");
        assert_eq!(signed_index_to_eval_word(&z("1;-")).unwrap().to_string(), "-");
        assert!(signed_index_to_eval_word(&z("2,1;+,+")).is_err());
    }
}
