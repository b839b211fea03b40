use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("index {0} is not admissible (needs depth >= 1 and last entry >= 2)")]
    NotAdmissible(String),

    #[error("invalid index: {0}")]
    InvalidIndex(String),

    #[error("malformed word {word}: {reason}")]
    MalformedWord { word: String, reason: &'static str },

    #[error("signed index {0} diverges (last entry 1 with sign +)")]
    Divergent(String),

    #[error("logarithmic divergence: letter 0 applied to a series with nonzero constant term")]
    LogDivergence,

    #[error("word {0} cannot be evaluated: {1}")]
    NotEvaluable(String, &'static str),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("hypergeometric series has a pole: c = {0} is a non-positive integer")]
    HypergeometricPole(String),

    #[error("parameters outside the allowed box: {0}")]
    ParameterBox(String),

    #[error("inputs carry mixed precisions ({0} vs {1} bits)")]
    MixedPrecision(u32, u32),

    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),

    #[error("degenerate lattice: {0}")]
    DegenerateLattice(&'static str),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("cache i/o error on {path}: {source}")]
    CacheIo {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
