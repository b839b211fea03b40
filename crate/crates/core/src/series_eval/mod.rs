//! Arbitrary-precision evaluation of iterated integrals on `{0, 1, -1, 2}`.

mod bigreal;
mod chen;
mod constants;
mod series;
mod special;

pub use bigreal::{combine, BigReal, Precision, GUARD_BITS, GUARD_TERMS};
pub use chen::{chen_evaluate, chen_evaluate_forms};
pub use constants::{constants, Constants};
pub use series::{apply_form, apply_letter, eval_at_half, mirror_letter, Form, TruncatedSeries};
pub use special::{gamma, hyp2f1_at_minus1};

pub use crate::indices::{EvalWord, Letter};
