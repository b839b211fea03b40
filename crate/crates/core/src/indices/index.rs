use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A composition `(k_1, ..., k_r)` of positive integers.
///
/// Summation variables increase left to right (`m_1 < ... < m_r`), so
/// admissibility is a condition on the last entry.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Index(Vec<u32>);

impl Index {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.iter().any(|&k| k == 0) {
            return Err(Error::InvalidIndex(format!("{parts:?} has a zero entry")));
        }
        Ok(Index(parts))
    }

    pub fn empty() -> Self {
        Index(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_admissible(&self) -> bool {
        matches!(self.0.last(), Some(&k) if k >= 2)
    }

    pub fn require_admissible(&self) -> Result<()> {
        if self.is_admissible() {
            Ok(())
        } else {
            Err(Error::NotAdmissible(self.to_string()))
        }
    }

    /// `(1, ..., 1, m + 1)` with `n - 1` leading ones.
    pub fn height_one(n: u32, m: u32) -> Self {
        assert!(n >= 1 && m >= 1);
        let mut parts = vec![1; n as usize - 1];
        parts.push(m + 1);
        Index(parts)
    }
}

impl TryFrom<Vec<u32>> for Index {
    type Error = Error;

    fn try_from(parts: Vec<u32>) -> Result<Self> {
        Index::new(parts)
    }
}

impl From<Index> for Vec<u32> {
    fn from(ix: Index) -> Self {
        ix.0
    }
}

/// Weight first, then lexicographic on the parts.
impl Ord for Index {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Index {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{k}")?;
        }
        Ok(())
    }
}

impl FromStr for Index {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let s = s
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(s)
            .trim();
        if s.is_empty() {
            return Ok(Index::empty());
        }
        let parts = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad index entry {p:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Index::new(parts)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// An index with a sign attached to each summation variable, naming the
/// alternating sum `sum_{m_1 < ... < m_r} prod sigma_i^{m_i} / m_i^{k_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedIndex {
    parts: Index,
    signs: Vec<Sign>,
}

impl SignedIndex {
    pub fn new(parts: Index, signs: Vec<Sign>) -> Result<Self> {
        if parts.depth() != signs.len() {
            return Err(Error::InvalidIndex(format!(
                "{} entries but {} signs",
                parts.depth(),
                signs.len()
            )));
        }
        Ok(SignedIndex { parts, signs })
    }

    pub fn all_plus(parts: Index) -> Self {
        let signs = vec![Sign::Plus; parts.depth()];
        SignedIndex { parts, signs }
    }

    pub fn index(&self) -> &Index {
        &self.parts
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn depth(&self) -> usize {
        self.parts.depth()
    }

    pub fn weight(&self) -> u32 {
        self.parts.weight()
    }

    pub fn is_convergent(&self) -> bool {
        match (self.parts.parts().last(), self.signs.last()) {
            (None, _) => true,
            (Some(&1), Some(Sign::Plus)) => false,
            _ => true,
        }
    }

    pub fn require_convergent(&self) -> Result<()> {
        if self.is_convergent() {
            Ok(())
        } else {
            Err(Error::Divergent(self.to_string()))
        }
    }

    pub fn signs_string(&self) -> String {
        self.signs
            .iter()
            .map(|s| match s {
                Sign::Plus => "+",
                Sign::Minus => "-",
            })
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl Ord for SignedIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.parts
            .cmp(&other.parts)
            .then_with(|| self.signs.cmp(&other.signs))
    }
}

impl PartialOrd for SignedIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SignedIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};{}", self.parts, self.signs_string())
    }
}

impl FromStr for SignedIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let s = s
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(s);
        let (ix, sg) = s
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("signed index {s:?} needs ';' before the signs")))?;
        let parts: Index = ix.parse()?;
        let sg = sg.trim();
        let signs = if sg.is_empty() {
            Vec::new()
        } else {
            sg.split(',')
                .map(|t| match t.trim() {
                    "+" | "+1" | "1" => Ok(Sign::Plus),
                    "-" | "-1" => Ok(Sign::Minus),
                    other => Err(Error::Parse(format!("bad sign {other:?}"))),
                })
                .collect::<Result<Vec<_>>>()?
        };
        SignedIndex::new(parts, signs)
    }
}

/// All admissible indices of the given weight, ordered by depth and then
/// lexicographically. Weight 0 yields the empty index only.
pub fn enumerate_admissible(weight: u32) -> Vec<Index> {
    if weight == 0 {
        return vec![Index::empty()];
    }
    if weight == 1 {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(1 << (weight - 2));
    let mut current = Vec::new();
    compositions(weight, &mut current, &mut out);
    out.sort_by(|a, b| a.depth().cmp(&b.depth()).then_with(|| a.parts().cmp(b.parts())));
    out
}

fn compositions(remaining: u32, current: &mut Vec<u32>, out: &mut Vec<Index>) {
    // the last part must be >= 2, so it can absorb everything that is left
    if remaining >= 2 {
        current.push(remaining);
        out.push(Index(current.clone()));
        current.pop();
    }
    for k in 1..remaining.saturating_sub(1) {
        current.push(k);
        compositions(remaining - k, current, out);
        current.pop();
    }
}

/// All compositions of `weight` into parts 2 and 3, in lexicographic order.
pub fn two_three_compositions(weight: u32) -> Vec<Index> {
    fn go(rem: u32, cur: &mut Vec<u32>, out: &mut Vec<Index>) {
        if rem == 0 {
            out.push(Index(cur.clone()));
            return;
        }
        for k in [2, 3] {
            if k <= rem {
                cur.push(k);
                go(rem - k, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    if weight >= 2 {
        go(weight, &mut Vec::new(), &mut out);
    }
    out
}
