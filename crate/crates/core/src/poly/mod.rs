//! Matching and chromatic polynomials, their roots and root measures.

mod chromatic;
mod intpoly;
mod matching;
mod real_roots;
mod walks;

pub use chromatic::{
    chromatic_polynomial, chromatic_polynomial_capped, chromatic_root_measure,
    chvalue_identity_check, chvalue_ratio, complex_roots, log_abs_value, ChromaticRoots,
    ChvalueCheck, DEFAULT_ROOT_CONSTANT,
};
pub use intpoly::{ln_bigint_abs, ln_biguint, IntPolynomial};
pub use matching::{
    matching_growth_bound, matching_measure, matching_profile, matching_profile_capped,
    matching_roots, matching_totals, matchpar_check, perfect_matching_lower_bound,
    perfect_matching_rate, MatchingProfile, MatchparCheck, SEMICIRCLE_LOG_INTEGRAL,
};
pub use real_roots::real_roots;
pub use walks::{rho_moment_via_walks, treelike_total, treelike_walk_count};
