//! Chromatic polynomials by memoized deletion–contraction, their complex
//! roots, and the value ratio at large arguments.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::intpoly::{ln_bigint_abs, IntPolynomial};
use crate::caps::Caps;
use crate::graph::{canonical_key, AdmissiblePair, CanonicalKey, Graph};
use crate::measure::ComplexMeasure;
use crate::rng::RandomSource;
use crate::{Error, Result};

/// Default bound on the moduli of chromatic roots divided by the maximum degree.
pub const DEFAULT_ROOT_CONSTANT: f64 = 8.0;

pub fn chromatic_polynomial(g: &Graph) -> Result<IntPolynomial> {
    chromatic_polynomial_capped(g, &Caps::default())
}

pub fn chromatic_polynomial_capped(g: &Graph, caps: &Caps) -> Result<IntPolynomial> {
    let mut memo = HashMap::new();
    let mut total = IntPolynomial::one();
    for comp in g.components() {
        let h = g.induced(&comp);
        if h.edge_count() > caps.chromatic_edges && !h.is_tree() {
            return Err(Error::Infeasible(format!(
                "chromatic polynomial of a component with {} edges exceeds the cap {}",
                h.edge_count(),
                caps.chromatic_edges
            )));
        }
        total = total.mul(&connected_chromatic(&h, &mut memo));
    }
    Ok(total)
}

/// `x (x-1) ... (x-n+1)`.
fn falling(n: usize) -> IntPolynomial {
    (0..n).fold(IntPolynomial::one(), |acc, i| {
        acc.mul(&IntPolynomial::linear_root(i as i64))
    })
}

fn contract(g: &Graph, u: usize, v: usize) -> Graph {
    let n = g.vertex_count();
    let relabel = |x: usize| -> usize {
        let x = if x == v { u } else { x };
        if x > v {
            x - 1
        } else {
            x
        }
    };
    Graph::from_edges_lossy(n - 1, g.edges().map(|(a, b)| (relabel(a), relabel(b))))
}

fn connected_chromatic(
    g: &Graph,
    memo: &mut HashMap<CanonicalKey, IntPolynomial>,
) -> IntPolynomial {
    let n = g.vertex_count();
    let e = g.edge_count();
    if n == 0 {
        return IntPolynomial::one();
    }
    if !g.is_connected() {
        return g
            .components()
            .iter()
            .map(|c| connected_chromatic(&g.induced(c), memo))
            .fold(IntPolynomial::one(), |a, b| a.mul(&b));
    }
    if e == n - 1 {
        // x (x-1)^(n-1)
        return IntPolynomial::linear_root(0).mul(&IntPolynomial::linear_root(1).pow(n - 1));
    }
    if e == n * (n - 1) / 2 {
        return falling(n);
    }
    if e == n && g.is_regular(2) {
        // cycle: (x-1)^n + (-1)^n (x-1)
        let x1 = IntPolynomial::linear_root(1);
        let tail = if n.is_multiple_of(2) { x1.clone() } else { x1.neg() };
        return x1.pow(n).add(&tail);
    }
    if let Some(leaf) = (0..n).find(|&v| g.degree(v) == 1) {
        let rest = g.without_vertices(&[leaf]);
        return connected_chromatic(&rest, memo).mul(&IntPolynomial::linear_root(1));
    }
    let key = if n <= 64 { canonical_key(g).ok() } else { None };
    if let Some(k) = &key {
        if let Some(p) = memo.get(k) {
            return p.clone();
        }
    }
    let (u, v) = g
        .edges()
        .max_by_key(|&(a, b)| (g.degree(a) + g.degree(b), std::cmp::Reverse((a, b))))
        .expect("graph has edges");
    let deleted = connected_chromatic(&g.without_edge(u, v), memo);
    let contracted = connected_chromatic(&contract(g, u, v), memo);
    let p = deleted.sub(&contracted);
    if let Some(k) = key {
        memo.insert(k, p.clone());
    }
    p
}

/// All complex roots with multiplicity. Integer roots `0..=degree` are split
/// off exactly; the rest are found by Aberth iteration on squarefree factors.
pub fn complex_roots(p: &IntPolynomial) -> Result<Vec<Complex64>> {
    let Some(deg) = p.degree() else {
        return Err(Error::invalid("the zero polynomial has no root set"));
    };
    let mut rest = p.clone();
    let mut roots = Vec::with_capacity(deg);
    for r in 0..=deg as i64 {
        let lin = IntPolynomial::linear_root(r);
        while rest.degree().unwrap_or(0) > 0 && rest.eval(&BigInt::from(r)).is_zero() {
            rest = rest.div_exact(&lin).expect("root divides");
            roots.push(Complex64::new(r as f64, 0.0));
        }
    }
    for (i, f) in rest.squarefree_factors().iter().enumerate() {
        if f.degree().unwrap_or(0) == 0 {
            continue;
        }
        for z in aberth(f)? {
            roots.extend(std::iter::repeat_n(z, i + 1));
        }
    }
    if roots.len() != deg {
        return Err(Error::Numerical(format!(
            "found {} roots for degree {deg}",
            roots.len()
        )));
    }
    Ok(roots)
}

const SWEEPS: usize = 200;
const TOL: f64 = 1e-10;

/// Simultaneous root iteration with Aberth corrections; restarts from a
/// perturbed start when the sweep budget runs out.
fn aberth(f: &IntPolynomial) -> Result<Vec<Complex64>> {
    let n = f.degree().expect("nonconstant");
    let lead = f.leading().to_f64().unwrap_or(f64::NAN);
    let coeffs: Vec<f64> = f
        .coeffs()
        .iter()
        .map(|c| c.to_f64().unwrap_or(f64::NAN) / lead)
        .collect();
    if n == 1 {
        return Ok(vec![Complex64::new(-coeffs[0], 0.0)]);
    }
    let dcoeffs: Vec<f64> = (1..=n).map(|k| coeffs[k] * k as f64).collect();
    let eval = |c: &[f64], z: Complex64| {
        c.iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
    };
    let radius = 1.0 + coeffs[..n].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let mut rng = RandomSource::new(0x5eed);
    for attempt in 0..8 {
        let mut z: Vec<Complex64> = (0..n)
            .map(|k| {
                let (jitter, shrink) = if attempt == 0 {
                    (0.0, 1.0)
                } else {
                    (rng.unit(), 0.5 + 0.5 * rng.unit())
                };
                let theta = (k as f64 + 0.25 + jitter) * std::f64::consts::TAU / n as f64 + 0.4;
                Complex64::from_polar(radius * shrink, theta)
            })
            .collect();
        for _ in 0..SWEEPS {
            let mut biggest = 0.0f64;
            for i in 0..n {
                let pz = eval(&coeffs, z[i]);
                let dz = eval(&dcoeffs, z[i]);
                if pz == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let ratio = pz / dz;
                let repulsion: Complex64 = (0..n)
                    .filter(|&j| j != i)
                    .map(|j| 1.0 / (z[i] - z[j]))
                    .sum();
                let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
                z[i] -= step;
                biggest = biggest.max(step.norm() / z[i].norm().max(1.0));
            }
            if biggest < TOL {
                // polish each root with Newton steps
                for zi in z.iter_mut() {
                    for _ in 0..3 {
                        let d = eval(&dcoeffs, *zi);
                        if d.norm() > 0.0 {
                            *zi -= eval(&coeffs, *zi) / d;
                        }
                    }
                }
                return Ok(z);
            }
        }
    }
    Err(Error::Numerical(format!(
        "root iteration did not converge within {SWEEPS} sweeps"
    )))
}

/// Chromatic roots divided by `d`, with the largest modulus seen.
#[derive(Debug, Clone, PartialEq)]
pub struct ChromaticRoots {
    pub polynomial: IntPolynomial,
    pub roots: Vec<Complex64>,
    pub measure: ComplexMeasure<f64>,
    pub max_scaled_modulus: f64,
    /// Scaled roots outside the disc of radius `root_constant`.
    pub violations: usize,
}

pub fn chromatic_root_measure(pair: &AdmissiblePair, root_constant: f64) -> Result<ChromaticRoots> {
    let polynomial = chromatic_polynomial(&pair.graph)?;
    let roots = complex_roots(&polynomial)?;
    let d = pair.d as f64;
    let measure = ComplexMeasure::new(roots.iter().map(|z| z / d).collect());
    let max_scaled_modulus = measure.max_modulus();
    let violations = measure
        .atoms
        .iter()
        .filter(|z| z.norm() > root_constant)
        .count();
    Ok(ChromaticRoots {
        polynomial,
        roots,
        measure,
        max_scaled_modulus,
        violations,
    })
}

/// `log |ch(G, z)|`, exact when `z` is an integer and otherwise by Horner's
/// rule in `1/z` on the normalized coefficients.
pub fn log_abs_value(p: &IntPolynomial, z: Complex64) -> Result<f64> {
    let n = p
        .degree()
        .ok_or_else(|| Error::invalid("zero polynomial"))?;
    if z.im == 0.0 && z.re.fract() == 0.0 && z.re.abs() < 9.0e15 {
        let v = p.eval(&BigInt::from(z.re as i64));
        if v.is_zero() {
            return Err(Error::invalid("evaluation point is a root"));
        }
        return Ok(ln_bigint_abs(&v));
    }
    if z.norm() == 0.0 {
        return Err(Error::invalid("evaluation at zero"));
    }
    let w = 1.0 / z;
    let lead = p.leading();
    let mut acc = Complex64::new(0.0, 0.0);
    for c in p.coeffs().iter() {
        let r = num_rational::BigRational::new(c.clone(), lead.clone());
        acc = acc * w + r.to_f64().unwrap_or(f64::NAN);
    }
    // acc = p(z) / (lead z^n)
    if acc.norm() == 0.0 {
        return Err(Error::invalid("evaluation point is a root"));
    }
    Ok(ln_bigint_abs(&lead) + n as f64 * z.norm().ln() + acc.norm().ln())
}

/// Value ratio at `xi d` against the root-side integral.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChvalueCheck {
    /// `log(|ch(G, xi d)|^(1/v) / (|xi| d))`.
    pub log_ratio: f64,
    /// `integral of log|1 - z/xi| against the scaled root measure`.
    pub root_integral: f64,
    /// Large-`d` prediction `-t(K2) Re(1/(2 xi))`.
    pub predicted: f64,
}

impl ChvalueCheck {
    pub fn ratio(&self) -> f64 {
        self.log_ratio.exp()
    }

    pub fn residual(&self) -> f64 {
        (self.log_ratio - self.root_integral).abs()
    }
}

pub fn chvalue_ratio(pair: &AdmissiblePair, xi: Complex64) -> Result<f64> {
    let p = chromatic_polynomial(&pair.graph)?;
    Ok(log_ratio(&p, pair, xi)?.exp())
}

fn log_ratio(p: &IntPolynomial, pair: &AdmissiblePair, xi: Complex64) -> Result<f64> {
    let d = pair.d as f64;
    let v = pair.vertex_count() as f64;
    Ok(log_abs_value(p, xi * d)? / v - (xi.norm() * d).ln())
}

pub fn chvalue_identity_check(pair: &AdmissiblePair, xi: Complex64) -> Result<ChvalueCheck> {
    if xi.norm() == 0.0 {
        return Err(Error::invalid("xi must be nonzero"));
    }
    let roots = chromatic_root_measure(pair, DEFAULT_ROOT_CONSTANT)?;
    let log_ratio = log_ratio(&roots.polynomial, pair, xi)?;
    let root_integral = roots
        .measure
        .integrate(|z| (Complex64::new(1.0, 0.0) - z / xi).norm().ln());
    let t_k2 = 2.0 * pair.graph.edge_count() as f64 / (pair.vertex_count() as f64 * pair.d as f64);
    let predicted = -t_k2 * (1.0 / (2.0 * xi)).re;
    Ok(ChvalueCheck {
        log_ratio,
        root_integral,
        predicted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_named, NamedGraph};
    use crate::test_support::random_graph;

    fn named(kind: NamedGraph) -> Graph {
        make_named(kind).unwrap()
    }

    fn brute_colorings(g: &Graph, q: usize) -> u64 {
        let n = g.vertex_count();
        if q == 0 {
            return u64::from(n == 0);
        }
        let mut col = vec![0usize; n];
        let mut count = 0;
        loop {
            if g.edges().all(|(u, v)| col[u] != col[v]) {
                count += 1;
            }
            let mut i = 0;
            loop {
                if i == n {
                    return count;
                }
                col[i] += 1;
                if col[i] < q {
                    break;
                }
                col[i] = 0;
                i += 1;
            }
        }
    }

    #[test]
    fn examples() {
        let tree = named(NamedGraph::Fork(5));
        let ch = chromatic_polynomial(&tree).unwrap();
        assert_eq!(ch.eval(&3.into()), BigInt::from(brute_colorings(&tree, 3)));
        assert_eq!(ch.eval(&3.into()), BigInt::from(3 * 16));
        let c4 = chromatic_polynomial(&named(NamedGraph::Cycle(4))).unwrap();
        assert_eq!(c4, IntPolynomial::from_i64(&[0, -3, 6, -4, 1]));
        assert_eq!(c4.eval(&2.into()), BigInt::from(2));
        let k3 = chromatic_polynomial(&named(NamedGraph::Complete(3))).unwrap();
        assert_eq!(k3.eval(&3.into()), BigInt::from(6));
    }

    #[test]
    fn agrees_with_brute_force() {
        let mut rng = RandomSource::new(17);
        for _ in 0..40 {
            let g = random_graph(2 + rng.index(6), 0.5, &mut rng);
            let ch = chromatic_polynomial(&g).unwrap();
            for q in 0..=4 {
                assert_eq!(
                    ch.eval(&BigInt::from(q)),
                    BigInt::from(brute_colorings(&g, q))
                );
            }
        }
    }

    #[test]
    fn root_sums_are_edge_counts() {
        let mut rng = RandomSource::new(23);
        for _ in 0..30 {
            let g = random_graph(4 + rng.index(7), 0.5, &mut rng);
            let d = g.max_degree().max(1) as u64;
            let pair = AdmissiblePair::new(g.clone(), d).unwrap();
            let r = chromatic_root_measure(&pair, DEFAULT_ROOT_CONSTANT).unwrap();
            let sum: Complex64 = r.measure.atoms.iter().sum();
            assert!((sum.re * d as f64 - g.edge_count() as f64).abs() < 1e-8);
            assert!(sum.im.abs() < 1e-8);
            assert_eq!(r.violations, 0);
        }
        let tree = AdmissiblePair::new(named(NamedGraph::Path(5)), 2).unwrap();
        let r = chromatic_root_measure(&tree, 8.0).unwrap();
        let mut re: Vec<f64> = r.measure.atoms.iter().map(|z| z.re).collect();
        re.sort_by(f64::total_cmp);
        assert_eq!(re, vec![0.0, 0.5, 0.5, 0.5, 0.5]);
    }

    #[test]
    fn hubai_identity() {
        let c5 = AdmissiblePair::new(named(NamedGraph::Cycle(5)), 2).unwrap();
        let xi = Complex64::new(10.0, 0.0);
        assert!(chvalue_identity_check(&c5, xi).unwrap().residual() < 1e-8);
        let odd = Complex64::new(3.0, 7.5);
        assert!(chvalue_identity_check(&c5, odd).unwrap().residual() < 1e-8);
        let empty = AdmissiblePair::new(Graph::empty(4), 1).unwrap();
        assert!((chvalue_ratio(&empty, xi).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn star_ratio_tends_to_one() {
        let xi = Complex64::new(10.0, 0.0);
        let mut last = f64::INFINITY;
        for m in [4usize, 16, 64] {
            let star =
                AdmissiblePair::new(named(NamedGraph::CompleteBipartite(1, m)), m as u64).unwrap();
            let check = chvalue_identity_check(&star, xi).unwrap();
            let closed =
                (m as f64 / (m + 1) as f64) * ((10.0 * m as f64 - 1.0) / (10.0 * m as f64)).ln();
            assert!((check.log_ratio - closed).abs() < 1e-12);
            assert!((check.log_ratio - check.predicted).abs() <= 2.0 / m as f64);
            assert!(check.log_ratio.abs() < last);
            last = check.log_ratio.abs();
        }
    }
}
