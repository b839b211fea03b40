use std::collections::{BTreeMap, HashMap};

use rug::{Integer, Rational};

use super::combo::LinearCombo;
use super::index::Index;
use super::word::{index_to_word, word_to_index, TWord};
use crate::error::Result;

/// Shuffle product of arbitrary words, as a multiset of interleavings.
pub fn shuffle_words<L: Ord + Clone>(u: &[L], v: &[L]) -> BTreeMap<Vec<L>, Integer> {
    // memo[(i, j)] = u[i..] sh v[j..]
    fn go<L: Ord + Clone>(
        u: &[L],
        v: &[L],
        i: usize,
        j: usize,
        memo: &mut HashMap<(usize, usize), BTreeMap<Vec<L>, Integer>>,
    ) -> BTreeMap<Vec<L>, Integer> {
        if let Some(m) = memo.get(&(i, j)) {
            return m.clone();
        }
        let mut out = BTreeMap::new();
        if i == u.len() {
            out.insert(v[j..].to_vec(), Integer::from(1));
        } else if j == v.len() {
            out.insert(u[i..].to_vec(), Integer::from(1));
        } else {
            for (head, rest) in [
                (&u[i], go(u, v, i + 1, j, memo)),
                (&v[j], go(u, v, i, j + 1, memo)),
            ] {
                for (w, c) in rest {
                    let mut nw = Vec::with_capacity(w.len() + 1);
                    nw.push(head.clone());
                    nw.extend(w);
                    *out.entry(nw).or_insert_with(Integer::new) += c;
                }
            }
        }
        memo.insert((i, j), out.clone());
        out
    }
    go(u, v, 0, 0, &mut HashMap::new())
}

/// `(a u) sh (b v) = a (u sh b v) + b (a u sh v)`.
pub fn shuffle(u: &TWord, v: &TWord) -> LinearCombo<TWord> {
    shuffle_words(u.letters(), v.letters())
        .into_iter()
        .map(|(w, c)| (TWord::new(w).expect("shuffle keeps the alphabet"), Rational::from(c)))
        .collect()
}

/// Shuffle product of two admissible indices through their words.
pub fn shuffle_indices(a: &Index, b: &Index) -> Result<LinearCombo<Index>> {
    let (wa, wb) = (index_to_word(a)?, index_to_word(b)?);
    shuffle(&wa, &wb).try_map_terms(word_to_index)
}

/// Quasi-shuffle (stuffle) product, peeling the last entries:
/// `(u x) * (v y) = (u * v y) x + (u x * v) y + (u * v)(x + y)`.
pub fn stuffle(a: &Index, b: &Index) -> LinearCombo<Index> {
    fn go(
        a: &[u32],
        b: &[u32],
        memo: &mut HashMap<(usize, usize), BTreeMap<Vec<u32>, Integer>>,
    ) -> BTreeMap<Vec<u32>, Integer> {
        let key = (a.len(), b.len());
        if let Some(m) = memo.get(&key) {
            return m.clone();
        }
        let mut out = BTreeMap::new();
        match (a.split_last(), b.split_last()) {
            (None, _) => {
                out.insert(b.to_vec(), Integer::from(1));
            }
            (_, None) => {
                out.insert(a.to_vec(), Integer::from(1));
            }
            (Some((&x, u)), Some((&y, v))) => {
                for (rest, last) in [(go(u, b, memo), x), (go(a, v, memo), y), (go(u, v, memo), x + y)] {
                    for (mut w, c) in rest {
                        w.push(last);
                        *out.entry(w).or_insert_with(Integer::new) += c;
                    }
                }
            }
        }
        memo.insert(key, out.clone());
        out
    }
    go(a.parts(), b.parts(), &mut HashMap::new())
        .into_iter()
        .map(|(w, c)| (Index::new(w).expect("positive parts"), Rational::from(c)))
        .collect()
}
