//! Exact combinatorics of indices and words.
//!
//! Indices use the increasing convention `m_1 < m_2 < ... < m_r`, so
//! `zeta(1,2) = zeta(3)` and admissibility means the last entry is at least 2.

mod combo;
mod expand;
mod index;
mod products;
mod word;

pub use combo::LinearCombo;
pub use expand::{expand_hoffman, expand_mtv, signed_index_to_eval_word};
pub use index::{enumerate_admissible, two_three_compositions, Index, Sign, SignedIndex};
pub use products::{shuffle, shuffle_indices, shuffle_words, stuffle};
pub use word::{dual, index_to_word, word_to_index, EvalWord, Letter, TWord};

