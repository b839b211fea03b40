//! Multiple T-values, Hoffman's multiple t-values and alternating multiple zeta
//! values: exact index combinatorics, high-precision evaluation, identity
//! checks and integer-relation experiments.

pub mod error;
pub mod indices;
pub mod lindep;
pub mod relations;
pub mod series_eval;
pub mod values;

pub use error::{Error, Result};
