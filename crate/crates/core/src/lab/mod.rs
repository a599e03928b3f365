//! Side experiments around the differencing argument: ternary quadric
//! counts, the square locus, differencing identities, arc coverings, the
//! Weyl sum and a totient search.

mod jutila;
mod ternary;
mod vdc;
mod weyl;

pub use jutila::{
    covering_sweep, in_minor, jutila_covering_ratio, moduli, multiplicity_at, CoveringSweep,
    ModulusFilter, ARC_BUDGET,
};
pub use ternary::{
    is_admissible, locus_value, mordell_transform, square_locus, square_locus_count,
    square_locus_scan, ternary_bound, ternary_conjecture_scan, ternary_count, trivial_family,
    MordellPoint, TernaryInstance, TernaryScanRow,
};
pub use vdc::{
    binary_quadratic_count, f0, mahler_check, mahler_fuzz, poly_coefficients, q_form,
    vdc_fuzz, vdc_identity_check, vdc_keypoint_check, vdc_polynomial_identity,
    DifferencingConfig, KeypointReport,
};
pub use weyl::{phi_divisibility_search, weyl_sum, weyl_sum_direct, weyl_sum_exact, weyl_sum_rational, PhiSearch};
