//! Numeric and symbolic verification of identities among T-values, with
//! pass/fail reports.

mod checks;
mod expr;
mod report;

pub use checks::{
    check_conj53, check_duality, check_genfun, check_intermediate_sum, check_machide_conjecture,
    check_parity_depth2, check_parity_depth3, check_shuffle_TT_expansion, check_sum_formula_depth2,
    check_sum_formula_depth3, check_weighted_dzv, conj53_sum, intermediate_sum, low_weight_relations,
    machide_analogue, parity_depth2, reduce_weight_le6, sum_formula_depth2, sum_formula_depth3,
    tt_binomial_expansion, weighted_dzv,
};
pub use expr::{Expr, Monomial};
pub use report::{format_reports_table, timed, with_retry, Status, Verdict, VerificationReport};
