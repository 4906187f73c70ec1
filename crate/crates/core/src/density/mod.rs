//! Homomorphism counts and the normalized densities built on them.

mod densities;
mod hom;
mod quotients;
mod reports;

pub use densities::{
    gap_constant, hom_vs_inj_gap, product_density_check, t, t_inj, t_rooted, t_rooted_all,
    DensityValue,
};
pub use hom::{
    hom_count, hom_count_backtracking, hom_count_capped, inj_count, inj_count_capped,
    rooted_hom_count, rooted_hom_counts,
};
pub use quotients::{enumerate_quotients, enumerate_quotients_capped, Quotient};
pub use reports::{
    alpha_regularity_report, csv_field, essential_girth_profile, fmt_f64, unit_density_case,
    AlphaReport, AlphaRow, ConvergenceTable, DensityKind, GirthProfile, Pattern, UnitCase,
};
