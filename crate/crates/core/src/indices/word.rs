use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

use super::index::Index;

/// Binary iterated-integral word: letter 1 is `2 dt / (1 - t^2)`, letter 0 is
/// `dt / t`. The first letter sits next to 0 on the integration path.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TWord(Vec<u8>);

impl TWord {
    pub fn new(letters: Vec<u8>) -> Result<Self> {
        if letters.iter().any(|&b| b > 1) {
            return Err(Error::MalformedWord {
                word: format!("{letters:?}"),
                reason: "letters must be 0 or 1",
            });
        }
        Ok(TWord(letters))
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Reverse the word and swap 0 <-> 1.
    pub fn reverse_complement(&self) -> TWord {
        TWord(self.0.iter().rev().map(|&b| 1 - b).collect())
    }
}

impl Ord for TWord {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for TWord {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for TWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::Parse(format!("bad letter {c:?} in word {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(TWord)
    }
}

/// `1 0^{k_1 - 1} 1 0^{k_2 - 1} ... 1 0^{k_r - 1}`.
pub fn index_to_word(ix: &Index) -> Result<TWord> {
    ix.require_admissible()?;
    Ok(index_to_word_unchecked(ix))
}

pub(crate) fn index_to_word_unchecked(ix: &Index) -> TWord {
    let mut w = Vec::with_capacity(ix.weight() as usize);
    for &k in ix.parts() {
        w.push(1);
        w.extend(std::iter::repeat(0).take(k as usize - 1));
    }
    TWord(w)
}

pub fn word_to_index(w: &TWord) -> Result<Index> {
    match (w.0.first(), w.0.last()) {
        (Some(1), Some(0)) => {}
        (None, _) => {
            return Err(Error::MalformedWord {
                word: w.to_string(),
                reason: "empty word",
            })
        }
        (Some(0), _) => {
            return Err(Error::MalformedWord {
                word: w.to_string(),
                reason: "word must start with 1",
            })
        }
        _ => {
            return Err(Error::MalformedWord {
                word: w.to_string(),
                reason: "word must end with 0",
            })
        }
    }
    let mut parts = Vec::new();
    for &b in &w.0 {
        if b == 1 {
            parts.push(1);
        } else {
            *parts.last_mut().unwrap() += 1;
        }
    }
    Index::new(parts)
}

/// Dual index: reverse-complement of the integral word.
pub fn dual(ix: &Index) -> Result<Index> {
    let w = index_to_word(ix)?;
    word_to_index(&w.reverse_complement())
}

/// Letters of the evaluation alphabet.
///
/// | letter     | form            |
/// |------------|-----------------|
/// | `Zero`     | `dt / t`        |
/// | `PlusOne`  | `dt / (1 - t)`  |
/// | `MinusOne` | `-dt / (1 + t)` |
/// | `Two`      | `dt / (2 - t)`  |
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Zero,
    PlusOne,
    MinusOne,
    Two,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::Zero, Letter::PlusOne, Letter::MinusOne, Letter::Two];

    fn symbol(self) -> char {
        match self {
            Letter::Zero => '0',
            Letter::PlusOne => '+',
            Letter::MinusOne => '-',
            Letter::Two => '2',
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EvalWord(Vec<Letter>);

impl EvalWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        EvalWord(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for EvalWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{}", l.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for EvalWord {
    type Err = Error;

    /// Letters `0`, `+`, `-`, `2`.
    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(Letter::Zero),
                '+' => Ok(Letter::PlusOne),
                '-' => Ok(Letter::MinusOne),
                '2' => Ok(Letter::Two),
                _ => Err(Error::Parse(format!("bad letter {c:?} in word {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(EvalWord)
    }
}
