//! Matching counts, the matching polynomial and its root measure.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use serde::Serialize;

use super::intpoly::{ln_biguint, IntPolynomial};
use super::real_roots::real_roots;
use crate::caps::Caps;
use crate::graph::{AdmissiblePair, Graph, Vertex};
use crate::measure::DiscreteMeasure;
use crate::{Error, Result};

/// `m[k]` is the number of matchings with `k` edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingProfile {
    pub vertices: usize,
    pub m: Vec<BigUint>,
}

impl MatchingProfile {
    /// `mu(G, x) = sum (-1)^k m_k x^(v - 2k)`.
    pub fn matching_polynomial(&self) -> IntPolynomial {
        let mut c = vec![BigInt::zero(); self.vertices + 1];
        for (k, m) in self.m.iter().enumerate() {
            let v = BigInt::from(m.clone());
            c[self.vertices - 2 * k] = if k % 2 == 0 { v } else { -v };
        }
        IntPolynomial::new(c)
    }

    /// `M(G, x) = sum (-1)^k m_k x^(v - k)`.
    pub fn modified_polynomial(&self) -> IntPolynomial {
        let mut c = vec![BigInt::zero(); self.vertices + 1];
        for (k, m) in self.m.iter().enumerate() {
            let v = BigInt::from(m.clone());
            c[self.vertices - k] = if k % 2 == 0 { v } else { -v };
        }
        IntPolynomial::new(c)
    }

    /// Total number of matchings.
    pub fn total(&self) -> BigUint {
        self.m.iter().sum()
    }

    /// Number of perfect matchings (zero for odd order).
    pub fn perfect(&self) -> BigUint {
        if self.vertices % 2 == 1 {
            return BigUint::zero();
        }
        self.m.get(self.vertices / 2).cloned().unwrap_or_default()
    }
}

type Counts = Vec<BigUint>;

fn add_into(acc: &mut Counts, other: &Counts, shift: usize) {
    if acc.len() < other.len() + shift {
        acc.resize(other.len() + shift, BigUint::zero());
    }
    for (i, c) in other.iter().enumerate() {
        acc[i + shift] += c;
    }
}

/// Reverse Cuthill–McKee style BFS order and its bandwidth.
fn bfs_order(g: &Graph) -> (Vec<Vertex>, usize) {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut starts: Vec<Vertex> = (0..n).collect();
    starts.sort_by_key(|&v| (g.degree(v), v));
    for s in starts {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut i = order.len();
        order.push(s);
        while i < order.len() {
            let v = order[i];
            let mut next: Vec<Vertex> = g
                .neighbors(v)
                .iter()
                .copied()
                .filter(|&w| !seen[w])
                .collect();
            next.sort_by_key(|&w| (g.degree(w), w));
            for w in next {
                seen[w] = true;
                order.push(w);
            }
            i += 1;
        }
    }
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let width = g
        .edges()
        .map(|(u, v)| pos[u].abs_diff(pos[v]))
        .max()
        .unwrap_or(0);
    (order, width)
}

/// Sweep along a low-bandwidth order; the state records which of the next
/// `width` vertices are already matched to earlier ones.
fn profile_by_band(g: &Graph, order: &[Vertex], width: usize) -> Counts {
    let n = g.vertex_count();
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut states: HashMap<u32, Counts> = HashMap::new();
    states.insert(0, vec![BigUint::from(1u32)]);
    for (i, &v) in order.iter().enumerate() {
        let later: Vec<usize> = g
            .neighbors(v)
            .iter()
            .map(|&w| pos[w])
            .filter(|&j| j > i)
            .map(|j| j - i)
            .collect();
        let mut next: HashMap<u32, Counts> = HashMap::new();
        let mut keys: Vec<u32> = states.keys().copied().collect();
        keys.sort_unstable();
        for mask in keys {
            let counts = &states[&mask];
            if mask & 1 == 1 {
                add_into(next.entry(mask >> 1).or_default(), counts, 0);
                continue;
            }
            add_into(next.entry(mask >> 1).or_default(), counts, 0);
            for &off in &later {
                debug_assert!(off <= width);
                if mask >> off & 1 == 0 {
                    add_into(next.entry((mask | 1 << off) >> 1).or_default(), counts, 1);
                }
            }
        }
        states = next;
    }
    states.remove(&0).unwrap_or_default()
}

/// Branch on the lowest remaining vertex with a remaining neighbour,
/// memoized on the remaining vertex set.
fn profile_by_branching(g: &Graph) -> Counts {
    fn rec(g: &Graph, set: u128, memo: &mut HashMap<u128, Counts>) -> Counts {
        let mut s = set;
        let mut pick = None;
        while s != 0 {
            let v = s.trailing_zeros() as usize;
            if g.neighbors(v).iter().any(|&w| set >> w & 1 == 1) {
                pick = Some(v);
                break;
            }
            s &= s - 1;
        }
        let Some(v) = pick else {
            return vec![BigUint::from(1u32)];
        };
        if let Some(c) = memo.get(&set) {
            return c.clone();
        }
        let without = set & !(1u128 << v);
        let mut acc = rec(g, without, memo);
        for &w in g.neighbors(v) {
            if set >> w & 1 == 1 {
                let sub = rec(g, without & !(1u128 << w), memo);
                add_into(&mut acc, &sub, 1);
            }
        }
        memo.insert(set, acc.clone());
        acc
    }
    let n = g.vertex_count();
    let full = if n == 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    };
    rec(g, full, &mut HashMap::new())
}

pub fn matching_profile(g: &Graph) -> Result<MatchingProfile> {
    matching_profile_capped(g, &Caps::default())
}

pub fn matching_profile_capped(g: &Graph, caps: &Caps) -> Result<MatchingProfile> {
    let n = g.vertex_count();
    let (order, width) = bfs_order(g);
    let mut m = if width <= caps.matching_width.min(30) {
        profile_by_band(g, &order, width)
    } else if g.edge_count() <= caps.matching_edges && n <= 128 {
        profile_by_branching(g)
    } else {
        return Err(Error::Infeasible(format!(
            "matching profile needs bandwidth <= {} or at most {} edges; got bandwidth {width}, {} edges",
            caps.matching_width,
            caps.matching_edges,
            g.edge_count()
        )));
    };
    while m.len() > 1 && m.last().is_some_and(Zero::is_zero) {
        m.pop();
    }
    Ok(MatchingProfile { vertices: n, m })
}

/// Total matchings and perfect matchings, cross-checked against `|mu(G, i)|`.
pub fn matching_totals(g: &Graph) -> Result<(BigUint, BigUint)> {
    let profile = matching_profile(g)?;
    let total = profile.total();
    let (re, im) = profile
        .matching_polynomial()
        .eval_gaussian(&BigInt::zero(), &BigInt::from(1));
    let modulus_sq = &re * &re + &im * &im;
    let t = BigInt::from(total.clone());
    if modulus_sq != &t * &t {
        return Err(Error::Numerical(
            "|mu(G, i)| disagrees with the matching count".into(),
        ));
    }
    Ok((total, profile.perfect()))
}

/// Roots of the matching polynomial, ascending.
pub fn matching_roots(g: &Graph) -> Result<Vec<f64>> {
    real_roots(&matching_profile(g)?.matching_polynomial())
}

fn check_d(pair: &AdmissiblePair) -> Result<()> {
    if pair.d < 2 {
        return Err(Error::invalid("matching measure needs d >= 2"));
    }
    Ok(())
}

/// Uniform measure on the matching roots divided by `sqrt(d)`.
pub fn matching_measure(pair: &AdmissiblePair) -> Result<DiscreteMeasure<f64>> {
    check_d(pair)?;
    let s = (pair.d as f64).sqrt();
    DiscreteMeasure::uniform(
        matching_roots(&pair.graph)?
            .into_iter()
            .map(|r| r / s)
            .collect(),
    )
}

/// Both sides of the two log-identities relating matching counts to the matching measure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchparCheck {
    pub lhs_m: f64,
    pub rhs_m: f64,
    /// `None` when there is no perfect matching and the log-integral diverges.
    pub lhs_pm: Option<f64>,
    pub rhs_pm: Option<f64>,
}

impl MatchparCheck {
    pub fn residual_m(&self) -> f64 {
        (self.lhs_m - self.rhs_m).abs()
    }

    pub fn residual_pm(&self) -> Option<f64> {
        Some((self.lhs_pm? - self.rhs_pm?).abs())
    }
}

pub fn matchpar_check(pair: &AdmissiblePair) -> Result<MatchparCheck> {
    check_d(pair)?;
    let profile = matching_profile(&pair.graph)?;
    let roots = real_roots(&profile.matching_polynomial())?;
    let v = pair.vertex_count() as f64;
    let d = pair.d as f64;
    let rho = DiscreteMeasure::uniform(roots.iter().map(|r| r / d.sqrt()).collect())?;
    let lhs_m = 2.0 / v * ln_biguint(&profile.total()) - d.ln();
    let rhs_m = rho.integrate(|x| (1.0 / d + x * x).ln());
    let pm = profile.perfect();
    let (lhs_pm, rhs_pm) = if pm.is_zero() {
        (None, None)
    } else {
        (
            Some(2.0 / v * ln_biguint(&pm) - d.ln()),
            Some(2.0 * rho.integrate(|x| x.abs().ln())),
        )
    };
    Ok(MatchparCheck {
        lhs_m,
        rhs_m,
        lhs_pm,
        rhs_pm,
    })
}

/// `int log|x| w(x) dx` for the semicircle density `w` on `[-2, 2]`.
pub const SEMICIRCLE_LOG_INTEGRAL: f64 = -0.5;

/// Upper bound `alpha / e` on `limsup M(G)^(2/v) / d` for alpha-regular sequences.
pub fn matching_growth_bound(alpha: f64) -> f64 {
    (alpha.ln() + 2.0 * SEMICIRCLE_LOG_INTEGRAL).exp()
}

/// Lower bound `(d-1)^(d-1) / d^(d-2)` on `Pm^(2/v)` for d-regular bipartite graphs.
pub fn perfect_matching_lower_bound(d: u64) -> f64 {
    let d = d as f64;
    ((d - 1.0) * (d - 1.0).ln() - (d - 2.0) * d.ln()).exp()
}

/// `Pm^(2/v)` computed in the log domain.
pub fn perfect_matching_rate(g: &Graph) -> Result<f64> {
    let pm = matching_profile(g)?.perfect();
    if pm.is_zero() {
        return Ok(0.0);
    }
    Ok((2.0 / g.vertex_count() as f64 * ln_biguint(&pm)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::{t, DensityValue};
    use crate::graph::{disjoint_union, make_hypercube, make_named, NamedGraph};
    use crate::rng::RandomSource;
    use crate::test_support::random_graph;
    use num_traits::ToPrimitive;

    fn named(kind: NamedGraph) -> Graph {
        make_named(kind).unwrap()
    }

    fn counts(g: &Graph) -> Vec<u64> {
        matching_profile(g)
            .unwrap()
            .m
            .iter()
            .map(|c| c.to_u64().unwrap())
            .collect()
    }

    fn brute_matchings(g: &Graph) -> Vec<u64> {
        let edges: Vec<_> = g.edges().collect();
        let mut out = vec![0u64; g.vertex_count() / 2 + 1];
        for mask in 0u64..(1 << edges.len()) {
            let mut used = 0u64;
            let mut ok = true;
            for (i, &(u, v)) in edges.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    if used >> u & 1 == 1 || used >> v & 1 == 1 {
                        ok = false;
                        break;
                    }
                    used |= 1 << u | 1 << v;
                }
            }
            if ok {
                out[mask.count_ones() as usize] += 1;
            }
        }
        while out.len() > 1 && *out.last().unwrap() == 0 {
            out.pop();
        }
        out
    }

    #[test]
    fn profile_examples() {
        assert_eq!(counts(&named(NamedGraph::Path(4))), vec![1, 3, 1]);
        let p4 = matching_profile(&named(NamedGraph::Path(4))).unwrap();
        assert_eq!(
            p4.matching_polynomial(),
            IntPolynomial::from_i64(&[1, 0, -3, 0, 1])
        );
        let k3 = matching_profile(&named(NamedGraph::Complete(3))).unwrap();
        assert_eq!(
            k3.matching_polynomial(),
            IntPolynomial::from_i64(&[0, -3, 0, 1])
        );
        let e = matching_profile(&Graph::empty(5)).unwrap();
        assert_eq!(
            e.matching_polynomial(),
            IntPolynomial::monomial(1.into(), 5)
        );
        assert_eq!(
            k3.modified_polynomial(),
            IntPolynomial::from_i64(&[0, 0, -3, 1])
        );
    }

    #[test]
    fn complete_graphs_give_hermite_polynomials() {
        // He_{n+1} = x He_n - n He_{n-1}
        let mut prev = IntPolynomial::one();
        let mut cur = IntPolynomial::from_i64(&[0, 1]);
        for n in 1..=9usize {
            let next = cur
                .mul(&IntPolynomial::from_i64(&[0, 1]))
                .sub(&prev.scale(&BigInt::from(n)));
            prev = cur;
            cur = next;
            let kn = named(NamedGraph::Complete(n + 1));
            assert_eq!(matching_profile(&kn).unwrap().matching_polynomial(), cur);
        }
    }

    #[test]
    fn both_algorithms_match_brute_force() {
        let mut rng = RandomSource::new(6);
        for _ in 0..40 {
            let g = random_graph(4 + rng.index(8), 0.4, &mut rng);
            let want = brute_matchings(&g);
            let (order, width) = bfs_order(&g);
            let band: Vec<u64> = profile_by_band(&g, &order, width)
                .iter()
                .map(|c| c.to_u64().unwrap())
                .collect();
            let branch: Vec<u64> = profile_by_branching(&g)
                .iter()
                .map(|c| c.to_u64().unwrap())
                .collect();
            let trim = |mut v: Vec<u64>| {
                while v.len() > 1 && *v.last().unwrap() == 0 {
                    v.pop();
                }
                v
            };
            assert_eq!(trim(band), want);
            assert_eq!(trim(branch), want);
        }
    }

    #[test]
    fn edge_recursion() {
        let mut rng = RandomSource::new(12);
        for _ in 0..30 {
            let g = random_graph(5 + rng.index(7), 0.45, &mut rng);
            let edges: Vec<_> = g.edges().collect();
            if edges.is_empty() {
                continue;
            }
            let (u, v) = edges[rng.index(edges.len())];
            let mu = |h: &Graph| matching_profile(h).unwrap().matching_polynomial();
            let lhs = mu(&g);
            let rhs = mu(&g.without_edge(u, v)).sub(&mu(&g.without_vertices(&[u, v])));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn totals() {
        let tot = |g: Graph| {
            let (m, pm) = matching_totals(&g).unwrap();
            (m.to_u64().unwrap(), pm.to_u64().unwrap())
        };
        assert_eq!(tot(named(NamedGraph::Complete(3))), (4, 0));
        assert_eq!(tot(named(NamedGraph::Cycle(4))), (7, 2));
        assert_eq!(tot(named(NamedGraph::Complete(2))), (2, 1));
    }

    #[test]
    fn measure_examples() {
        let k3 = AdmissiblePair::new(named(NamedGraph::Complete(3)), 2).unwrap();
        let rho = matching_measure(&k3).unwrap();
        let s = 1.5f64.sqrt();
        assert!(rho
            .atoms()
            .iter()
            .zip([-s, 0.0, s])
            .all(|(a, b)| (a - b).abs() < 1e-12));
        let mut rng = RandomSource::new(13);
        for _ in 0..50 {
            let g = random_graph(4 + rng.index(10), 0.4, &mut rng);
            let d = g.max_degree().max(2) as u64;
            let pair = AdmissiblePair::new(g, d).unwrap();
            let rho = matching_measure(&pair).unwrap();
            let t_k2: DensityValue = t(&named(NamedGraph::Complete(2)), &pair).unwrap();
            assert!((rho.moment(2) - t_k2.value()).abs() < 1e-9);
            assert!(rho.moment(1).abs() < 1e-9 && rho.moment(3).abs() < 1e-9);
            let edge = 2.0 * ((d - 1) as f64 / d as f64).sqrt() + 1e-9;
            assert!(rho.atoms().iter().all(|x| x.abs() <= edge));
        }
    }

    #[test]
    fn matchpar_examples() {
        let cases = [
            AdmissiblePair::new(named(NamedGraph::Cycle(4)), 2).unwrap(),
            AdmissiblePair::new(named(NamedGraph::Complete(2)), 2).unwrap(),
            AdmissiblePair::new(
                disjoint_union(&vec![named(NamedGraph::Complete(2)); 5]).unwrap(),
                2,
            )
            .unwrap(),
            AdmissiblePair::new(named(NamedGraph::Complete(5)), 4).unwrap(),
        ];
        for pair in &cases {
            let c = matchpar_check(pair).unwrap();
            assert!(c.residual_m() < 1e-8);
            if let Some(r) = c.residual_pm() {
                assert!(r < 1e-8);
            }
        }
        assert!(matchpar_check(&cases[3]).unwrap().lhs_pm.is_none());
        let (m, pm) = matching_totals(&cases[2].graph).unwrap();
        assert_eq!((m.to_u64().unwrap(), pm.to_u64().unwrap()), (32, 1));
    }

    #[test]
    fn regular_bipartite_lower_bound() {
        for (g, d) in [
            (named(NamedGraph::Cycle(4)), 2),
            (make_hypercube(3).unwrap(), 3),
            (named(NamedGraph::CompleteBipartite(3, 3)), 3),
        ] {
            assert!(perfect_matching_rate(&g).unwrap() >= perfect_matching_lower_bound(d) - 1e-9);
        }
        assert!((matching_growth_bound(1.0) - (-1f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn infeasible_instances_are_reported() {
        let q7 = make_hypercube(7).unwrap();
        assert!(matches!(matching_profile(&q7), Err(Error::Infeasible(_))));
    }
}
