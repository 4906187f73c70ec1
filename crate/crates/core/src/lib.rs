pub mod caps;
pub mod error;
pub mod graph;
pub mod rng;
pub mod scalar;

pub use caps::Caps;
pub use error::{Error, Result};
pub use graph::{AdmissiblePair, Graph, MultiGraph, Vertex};
pub use rng::RandomSource;
pub use scalar::Real;
pub mod density;

pub mod graphoning;
pub mod measure;
pub mod poly;
pub mod spectral;
#[cfg(test)]
mod test_support;
pub mod verify;

pub use measure::{ComplexMeasure, DiscreteMeasure};

/// Spectral and root measures in double precision.
pub type Measure = DiscreteMeasure<f64>;
/// Single-precision measures, for large spectra where memory matters.
pub type Measure32 = DiscreteMeasure<f32>;
/// Exact rationals used for densities and walk moments.
pub type Rational = num_rational::BigRational;
pub type Spectrum = spectral::SpectrumResult<f64>;
