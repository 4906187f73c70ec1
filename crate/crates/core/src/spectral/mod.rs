//! Adjacency spectra and the spectral measures of admissible pairs.

mod eigen;

use num_bigint::BigUint;

use crate::caps::Caps;
use crate::graph::{AdmissiblePair, Graph};
use crate::measure::DiscreteMeasure;
use crate::scalar::Real;
use crate::{Error, Result};

/// Graphs up to this size also get eigenvectors and a residual.
const RESIDUAL_LIMIT: usize = 512;

/// Eigenvalues sorted descending, with `max |A v - lambda v|` when eigenvectors were computed.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult<T> {
    pub eigenvalues: Vec<T>,
    pub residual: Option<T>,
}

pub fn adjacency_spectrum(g: &Graph) -> Result<SpectrumResult<f64>> {
    adjacency_spectrum_as(g, Caps::default().dense_spectrum)
}

/// Dense eigensolve in the scalar type `T` with a vertex cap.
pub fn adjacency_spectrum_as<T: Real>(g: &Graph, cap: usize) -> Result<SpectrumResult<T>> {
    let n = g.vertex_count();
    if n > cap {
        return Err(Error::cap(
            "dense spectrum vertices",
            n as u128,
            cap as u128,
        ));
    }
    let mut a = vec![T::zero(); n * n];
    for (u, v) in g.edges() {
        a[u * n + v] = T::one();
        a[v * n + u] = T::one();
    }
    let want = n <= RESIDUAL_LIMIT;
    let eig = eigen::symmetric_eigen(a, n, want)?;
    let residual = eig.vectors.as_ref().map(|vecs| {
        let mut worst = T::zero();
        for (&lam, v) in eig.values.iter().zip(vecs) {
            for x in 0..n {
                let av: T = g.neighbors(x).iter().map(|&y| v[y]).sum();
                worst = worst.max((av - lam * v[x]).abs());
            }
        }
        worst
    });
    let mut eigenvalues = eig.values;
    eigenvalues.sort_by(|a, b| b.partial_cmp(a).expect("finite eigenvalues"));
    Ok(SpectrumResult {
        eigenvalues,
        residual,
    })
}

/// Eigenvalues of a Cartesian sum: all pairwise sums, sorted descending.
pub fn sumset_spectrum<T: Real>(a: &[T], b: &[T]) -> Vec<T> {
    let mut out: Vec<T> = a
        .iter()
        .flat_map(|&x| b.iter().map(move |&y| x + y))
        .collect();
    out.sort_by(|x, y| y.partial_cmp(x).expect("finite eigenvalues"));
    out
}

fn scaled_uniform<T: Real>(values: &[T], scale: T) -> Result<DiscreteMeasure<T>> {
    DiscreteMeasure::uniform(values.iter().map(|&l| l / scale).collect())
}

/// Uniform measure on `lambda / d`.
pub fn sigma(pair: &AdmissiblePair) -> Result<DiscreteMeasure<f64>> {
    sigma_from(&adjacency_spectrum(&pair.graph)?.eigenvalues, pair.d)
}

pub fn sigma_from<T: Real>(eigenvalues: &[T], d: u64) -> Result<DiscreteMeasure<T>> {
    scaled_uniform(eigenvalues, T::of(d as f64))
}

/// Uniform measure on `lambda / d` over the `r` largest eigenvalues.
pub fn sigma_top(pair: &AdmissiblePair, r: usize) -> Result<DiscreteMeasure<f64>> {
    sigma_top_from(&adjacency_spectrum(&pair.graph)?.eigenvalues, pair.d, r)
}

/// Uniform measure on `lambda / d` over the `r` smallest eigenvalues.
pub fn sigma_bottom(pair: &AdmissiblePair, r: usize) -> Result<DiscreteMeasure<f64>> {
    sigma_bottom_from(&adjacency_spectrum(&pair.graph)?.eigenvalues, pair.d, r)
}

fn check_r(r: usize, n: usize) -> Result<()> {
    if r == 0 || r > n {
        return Err(Error::invalid(format!("r = {r} outside 1..={n}")));
    }
    Ok(())
}

/// `eigenvalues` must be sorted descending.
pub fn sigma_top_from<T: Real>(eigenvalues: &[T], d: u64, r: usize) -> Result<DiscreteMeasure<T>> {
    check_r(r, eigenvalues.len())?;
    scaled_uniform(&eigenvalues[..r], T::of(d as f64))
}

/// `eigenvalues` must be sorted descending.
pub fn sigma_bottom_from<T: Real>(
    eigenvalues: &[T],
    d: u64,
    r: usize,
) -> Result<DiscreteMeasure<T>> {
    check_r(r, eigenvalues.len())?;
    scaled_uniform(&eigenvalues[eigenvalues.len() - r..], T::of(d as f64))
}

/// Uniform measure on `lambda / sqrt(d)`.
pub fn sigma_sqrt(pair: &AdmissiblePair) -> Result<DiscreteMeasure<f64>> {
    sigma_sqrt_from(&adjacency_spectrum(&pair.graph)?.eigenvalues, pair.d)
}

pub fn sigma_sqrt_from<T: Real>(eigenvalues: &[T], d: u64) -> Result<DiscreteMeasure<T>> {
    scaled_uniform(eigenvalues, T::of(d as f64).sqrt())
}

pub fn moment<T: Real>(m: &DiscreteMeasure<T>, k: u32) -> T {
    m.moment(k)
}

/// Whether `sigma((-eps, eps)) >= 1 - 1/(eps^2 d)`, with the measured mass.
pub fn dirac_concentration_check<T: Real>(m: &DiscreteMeasure<T>, d: u64, eps: T) -> (bool, T) {
    let mass = m.mass_open(-eps, eps);
    let bound = T::one() - T::one() / (eps * eps * T::of(d as f64));
    (mass >= bound, mass)
}

/// Lower bound `-r/(v-r)` on the smallest atom of the top-`r` measure.
pub fn top_edge_bound(v: usize, r: usize) -> f64 {
    if r >= v {
        return -1.0;
    }
    -(r as f64) / ((v - r) as f64)
}

pub fn catalan(k: u32) -> BigUint {
    let mut c = BigUint::from(1u32);
    for i in 0..k {
        c = c * BigUint::from(2 * (2 * i + 1)) / BigUint::from(i + 2);
    }
    c
}

/// Moments of the semicircle law on `[-2 sqrt(alpha), 2 sqrt(alpha)]`.
pub fn semicircle_moment(k: u32, alpha: f64) -> f64 {
    if k % 2 == 1 {
        return 0.0;
    }
    let c: f64 = num_traits::ToPrimitive::to_f64(&catalan(k / 2)).unwrap_or(f64::INFINITY);
    alpha.powi((k / 2) as i32) * c
}

/// Number of closed walks of length `k`, i.e. `hom(C_k, G)` for `k >= 3`,
/// by exact repeated multiplication of walk-count vectors.
pub fn closed_walk_total(g: &Graph, k: u32) -> BigUint {
    use rayon::prelude::*;
    let n = g.vertex_count();
    (0..n)
        .into_par_iter()
        .map(|s| {
            let mut w = vec![BigUint::from(0u32); n];
            w[s] = BigUint::from(1u32);
            for _ in 0..k {
                let mut next = vec![BigUint::from(0u32); n];
                for (x, slot) in next.iter_mut().enumerate() {
                    for &y in g.neighbors(x) {
                        *slot += &w[y];
                    }
                }
                w = next;
            }
            w[s].clone()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .sum()
}
