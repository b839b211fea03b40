//! Integer relation detection (LLL) and numeric dimension counts.

mod dims;
mod lll;
mod relation;

pub use dims::{
    dims_union_intersection, format_dimension_table, membership_in_Z, membership_in_Z_with_basis,
    recognize_ratio, recommended_digits, relation_lattice_rank, DimFamily, DimStatus,
    DimensionReport, RankOptions, CAVEAT, DEFAULT_MAX_WEIGHT,
};
pub use lll::{
    default_delta, is_lll_reduced, lll_reduce, lll_reduce_with_transform, IntegerLattice,
    Reduction, ETA,
};
pub use relation::{
    auto_coeff_bound, common_digits, find_integer_relation, RelationResult, RelationStatus,
    MIN_DIGITS,
};
