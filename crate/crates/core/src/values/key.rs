use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::indices::{Index, Sign, SignedIndex};
use crate::series_eval::Precision;

/// Which level-2 family a value belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    /// Multiple T-values.
    #[serde(rename = "T")]
    T,
    /// Hoffman's multiple t-values.
    #[serde(rename = "t")]
    Hoffman,
    #[serde(rename = "zeta")]
    Zeta,
    /// Alternating multiple zeta values.
    #[serde(rename = "altZ")]
    AltZeta,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::T => "T",
            Family::Hoffman => "t",
            Family::Zeta => "zeta",
            Family::AltZeta => "altZ",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "T" => Ok(Family::T),
            "t" => Ok(Family::Hoffman),
            "zeta" | "Z" => Ok(Family::Zeta),
            "altZ" | "alt" => Ok(Family::AltZeta),
            _ => Err(Error::Parse(format!("unknown family {s:?} (expected T, t, zeta or altZ)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ValueKey {
    pub family: Family,
    pub index: Index,
    /// Empty unless the family is [`Family::AltZeta`].
    pub signs: Vec<Sign>,
    pub precision: Precision,
}

impl ValueKey {
    pub fn new(family: Family, index: Index, precision: Precision) -> Self {
        ValueKey {
            family,
            index,
            signs: Vec::new(),
            precision,
        }
    }

    pub fn alternating(z: &SignedIndex, precision: Precision) -> Self {
        ValueKey {
            family: Family::AltZeta,
            index: z.index().clone(),
            signs: z.signs().to_vec(),
            precision,
        }
    }
}
