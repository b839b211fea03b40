//! Evaluators for T-, t-, zeta and alternating zeta values, with a
//! persistent value cache.

mod cache;
mod evaluator;
mod genfun;
mod key;

pub use cache::{default_cache_dir, ValueCache, CACHE_DIR_ENV};
pub use evaluator::{alt_zeta_value, t_value, zeta_value, Evaluator, T_value};
pub use genfun::{check_genfun_box, genfun_lhs, genfun_rhs, genfun_truncation_order};
pub use key::{Family, ValueKey};
