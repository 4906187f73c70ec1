//! Cantor-type limit objects on `[0, 1]`: gauges, block structures, kernel
//! sampling and Monte Carlo densities.

mod cantor;
mod gauge;
mod kernel;

pub use cantor::{is_member, sample_block_values, sample_s, Block, CantorSpec, DigitPoint};
pub use gauge::{covering_sum, gauge_growth_check, GaugeFunction, GaugeKind, MixedRadixConditions};
pub use kernel::{
    acyclicity_test, is_adjacent, kernel_sample, mc_rooted_tree_density, AcyclicityDepth,
    AcyclicityReport, TreeDensityEstimate,
};
