//! Finitely supported measures on the line and in the plane.

use num_complex::Complex;

use crate::scalar::{compensated_sum, Real};
use crate::{Error, Result};

/// Atoms sorted ascending with positive weights.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure<T> {
    atoms: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> DiscreteMeasure<T> {
    pub fn new(points: Vec<(T, T)>) -> Result<Self> {
        if points
            .iter()
            .any(|(x, w)| !x.is_finite() || !w.is_finite() || *w <= T::zero())
        {
            return Err(Error::invalid(
                "measure atoms must be finite with positive weight",
            ));
        }
        let mut points = points;
        points.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite atoms"));
        let (atoms, weights) = points.into_iter().unzip();
        Ok(DiscreteMeasure { atoms, weights })
    }

    /// Probability measure with weight `1/len` on each point.
    pub fn uniform(points: Vec<T>) -> Result<Self> {
        let w = T::one() / T::of_usize(points.len().max(1));
        DiscreteMeasure::new(points.into_iter().map(|x| (x, w)).collect())
    }

    pub fn dirac(x: T) -> Self {
        DiscreteMeasure {
            atoms: vec![x],
            weights: vec![T::one()],
        }
    }

    pub fn atoms(&self) -> &[T] {
        &self.atoms
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_mass(&self) -> T {
        compensated_sum(self.weights.iter().copied())
    }

    pub fn min_atom(&self) -> Option<T> {
        self.atoms.first().copied()
    }

    pub fn max_atom(&self) -> Option<T> {
        self.atoms.last().copied()
    }

    /// Normalized moment `sum w x^k / total mass`.
    pub fn moment(&self, k: u32) -> T {
        let mass = self.total_mass();
        if mass == T::zero() {
            return T::zero();
        }
        compensated_sum(
            self.atoms
                .iter()
                .zip(&self.weights)
                .map(|(&x, &w)| w * x.powi(k as i32)),
        ) / mass
    }

    /// `integral of f` against the measure (not normalized).
    pub fn integrate(&self, f: impl Fn(T) -> T) -> T {
        compensated_sum(
            self.atoms
                .iter()
                .zip(&self.weights)
                .map(|(&x, &w)| w * f(x)),
        )
    }

    /// Mass of the open interval `(a, b)`.
    pub fn mass_open(&self, a: T, b: T) -> T {
        compensated_sum(
            self.atoms
                .iter()
                .zip(&self.weights)
                .filter(|(&x, _)| a < x && x < b)
                .map(|(_, &w)| w),
        )
    }

    /// Same atoms with every atom multiplied by `factor`.
    pub fn scaled(&self, factor: T) -> Self {
        let mut points: Vec<(T, T)> = self
            .atoms
            .iter()
            .map(|&x| x * factor)
            .zip(self.weights.iter().copied())
            .collect();
        points.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite atoms"));
        let (atoms, weights) = points.into_iter().unzip();
        DiscreteMeasure { atoms, weights }
    }

    /// Equal atoms merged into one.
    pub fn merged(&self) -> Vec<(T, T)> {
        let mut out: Vec<(T, T)> = Vec::new();
        for (&x, &w) in self.atoms.iter().zip(&self.weights) {
            match out.last_mut() {
                Some(last) if last.0 == x => last.1 += w,
                _ => out.push((x, w)),
            }
        }
        out
    }

    fn check_probability(&self) -> Result<()> {
        let mass = self.total_mass().to_f64_lossy();
        if (mass - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(format!(
                "expected a probability measure, total mass {mass}"
            )));
        }
        Ok(())
    }

    /// CSV with rows `atom,weight`, preceded by `# key=value` metadata lines.
    pub fn to_csv(&self, meta: &[(&str, String)]) -> String {
        let mut out = String::new();
        for (k, v) in meta {
            out.push_str(&format!("# {k}={v}\n"));
        }
        out.push_str("atom,weight\n");
        for (x, w) in self.atoms.iter().zip(&self.weights) {
            out.push_str(&format!("{:?},{:?}\n", x.to_f64_lossy(), w.to_f64_lossy()));
        }
        out
    }
}

/// Kolmogorov distance between two probability measures, comparing the
/// right-continuous CDFs on the merged atom grid.
pub fn cdf_distance<T: Real>(a: &DiscreteMeasure<T>, b: &DiscreteMeasure<T>) -> Result<T> {
    a.check_probability()?;
    b.check_probability()?;
    let (ma, mb) = (a.merged(), b.merged());
    let (mut i, mut j) = (0, 0);
    let (mut fa, mut fb) = (T::zero(), T::zero());
    let mut best = T::zero();
    while i < ma.len() || j < mb.len() {
        let x = match (ma.get(i), mb.get(j)) {
            (Some(p), Some(q)) => p.0.min(q.0),
            (Some(p), None) => p.0,
            (None, Some(q)) => q.0,
            (None, None) => unreachable!(),
        };
        while i < ma.len() && ma[i].0 == x {
            fa += ma[i].1;
            i += 1;
        }
        while j < mb.len() && mb[j].0 == x {
            fb += mb[j].1;
            j += 1;
        }
        best = best.max((fa - fb).abs());
    }
    Ok(best)
}

/// Kolmogorov distance from a probability measure to a continuous CDF.
pub fn cdf_distance_to<T: Real>(a: &DiscreteMeasure<T>, cdf: impl Fn(T) -> T) -> Result<T> {
    a.check_probability()?;
    let mut below = T::zero();
    let mut best = T::zero();
    for (x, w) in a.merged() {
        let f = cdf(x);
        best = best.max((below - f).abs());
        below += w;
        best = best.max((below - f).abs());
    }
    Ok(best)
}

/// Standard normal CDF.
pub fn gaussian_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Uniform probability measure on finitely many complex points.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMeasure<T> {
    pub atoms: Vec<Complex<T>>,
}

impl<T: Real> ComplexMeasure<T> {
    pub fn new(mut atoms: Vec<Complex<T>>) -> Self {
        atoms.sort_by(|a, b| {
            (a.re, a.im)
                .partial_cmp(&(b.re, b.im))
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        ComplexMeasure { atoms }
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Average of `f` over the atoms.
    pub fn integrate(&self, f: impl Fn(Complex<T>) -> T) -> T {
        if self.atoms.is_empty() {
            return T::zero();
        }
        compensated_sum(self.atoms.iter().map(|&z| f(z))) / T::of_usize(self.atoms.len())
    }

    pub fn max_modulus(&self) -> T {
        self.atoms.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    /// CSV with rows `re,im,weight`.
    pub fn to_csv(&self, meta: &[(&str, String)]) -> String {
        let mut out = String::new();
        for (k, v) in meta {
            out.push_str(&format!("# {k}={v}\n"));
        }
        out.push_str("re,im,weight\n");
        let w = 1.0 / self.atoms.len().max(1) as f64;
        for z in &self.atoms {
            out.push_str(&format!(
                "{:?},{:?},{:?}\n",
                z.re.to_f64_lossy(),
                z.im.to_f64_lossy(),
                w
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cdf_distance_examples() {
        let a = DiscreteMeasure::uniform(vec![0.0, 1.0, 2.0]).unwrap();
        assert_eq!(cdf_distance(&a, &a).unwrap(), 0.0);
        let d0 = DiscreteMeasure::dirac(0.0f64);
        let d1 = DiscreteMeasure::dirac(1.0f64);
        assert_eq!(cdf_distance(&d0, &d1).unwrap(), 1.0);
        let half = DiscreteMeasure::new(vec![(0.0, 0.5)]).unwrap();
        assert!(cdf_distance(&half, &d0).is_err());
        // ties merge before comparison
        let tied = DiscreteMeasure::uniform(vec![1.0, 1.0]).unwrap();
        assert_eq!(cdf_distance(&tied, &d1).unwrap(), 0.0);
    }

    #[test]
    fn gaussian_distance() {
        assert!((gaussian_cdf(0.0) - 0.5).abs() < 1e-15);
        assert!((gaussian_cdf(1.0) - 0.841_344_746_068_542_9).abs() < 1e-14);
        let d0 = DiscreteMeasure::dirac(0.0f64);
        assert!((cdf_distance_to(&d0, gaussian_cdf).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn moments_and_masses() {
        let m = DiscreteMeasure::uniform(vec![1.0f64, -0.5, -0.5]).unwrap();
        assert_eq!(m.moment(0), 1.0);
        assert!((m.moment(3) - 0.25).abs() < 1e-15);
        assert!((m.mass_open(-0.5, 1.0)).abs() < 1e-15);
        assert_eq!(m.min_atom(), Some(-0.5));
        let f32m = DiscreteMeasure::<f32>::uniform(vec![1.0, -1.0]).unwrap();
        assert_eq!(f32m.moment(2), 1.0);
    }
}
