//! Closed tree-like walks: closed walks in the path tree of a graph.
//!
//! The path tree rooted at `v` has the simple paths starting at `v` as nodes,
//! each path joined to its one-vertex extensions. Its closed walks from the
//! root number the power sums of the matching polynomial's roots, so they
//! give the moments of the matching measure without computing the polynomial.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rayon::prelude::*;

use crate::caps::Caps;
use crate::graph::{AdmissiblePair, Graph, Vertex};
use crate::{Error, Result};

/// Closed walks from the path-tree node ending at `v` that stay in its subtree.
///
/// Entry `2j` of the result counts walks of length `2j` for `2j <= budget`.
/// The first step goes down to a child, a closed walk of length `a` follows
/// there, the walk steps back up and finishes with any closed walk of the
/// remaining length.
fn subtree_walks(g: &Graph, v: Vertex, on_path: &mut [bool], budget: usize) -> Option<Vec<u128>> {
    let half = budget / 2;
    let mut down = vec![0u128; half.saturating_sub(1) + 1];
    if half >= 1 {
        for &w in g.neighbors(v) {
            if on_path[w] {
                continue;
            }
            on_path[w] = true;
            let child = subtree_walks(g, w, on_path, budget - 2);
            on_path[w] = false;
            for (i, c) in child?.into_iter().enumerate() {
                down[i] = down[i].checked_add(c)?;
            }
        }
    }
    let mut out = vec![0u128; half + 1];
    out[0] = 1;
    for l in 1..=half {
        let mut s = 0u128;
        for a in 0..l {
            s = s.checked_add(down[a].checked_mul(out[l - 1 - a])?)?;
        }
        out[l] = s;
    }
    Some(out)
}

fn check_len(len: usize) -> Result<()> {
    let cap = Caps::default().walk_length;
    if len > cap {
        return Err(Error::cap("walk length", len as u128, cap as u128));
    }
    Ok(())
}

/// Closed tree-like walks of length `len` from `v`.
pub fn treelike_walk_count(g: &Graph, v: Vertex, len: usize) -> Result<BigUint> {
    check_len(len)?;
    if v >= g.vertex_count() {
        return Err(Error::invalid(format!("vertex {v} outside graph")));
    }
    if len % 2 == 1 {
        return Ok(BigUint::from(0u32));
    }
    let mut on_path = vec![false; g.vertex_count()];
    on_path[v] = true;
    let w = subtree_walks(g, v, &mut on_path, len).ok_or(Error::Overflow)?;
    Ok(BigUint::from(w[len / 2]))
}

/// Sum of [`treelike_walk_count`] over all vertices.
pub fn treelike_total(g: &Graph, len: usize) -> Result<BigUint> {
    check_len(len)?;
    let parts: Vec<Result<BigUint>> = (0..g.vertex_count())
        .into_par_iter()
        .map(|v| treelike_walk_count(g, v, len))
        .collect();
    parts.into_iter().sum()
}

/// `treelike_total(G, k) / (v(G) d^(k/2))`, the `k`-th moment of the matching measure.
pub fn rho_moment_via_walks(pair: &AdmissiblePair, k: usize) -> Result<BigRational> {
    if k % 2 == 1 {
        return Ok(BigRational::from_integer(0.into()));
    }
    let total = treelike_total(&pair.graph, k)?;
    let den = BigInt::from(pair.vertex_count()) * num_traits::pow(BigInt::from(pair.d), k / 2);
    Ok(BigRational::new(BigInt::from(total), den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_hypercube, make_named, NamedGraph};
    use crate::poly::matching::{matching_measure, matching_profile};
    use crate::rng::RandomSource;
    use crate::spectral::catalan;
    use crate::test_support::random_graph;
    use num_traits::{Signed, ToPrimitive};

    fn named(kind: NamedGraph) -> Graph {
        make_named(kind).unwrap()
    }

    fn ratio(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn small_examples() {
        let k3 = named(NamedGraph::Complete(3));
        for v in 0..3 {
            assert_eq!(treelike_walk_count(&k3, v, 2).unwrap(), BigUint::from(2u32));
            assert_eq!(treelike_walk_count(&k3, v, 4).unwrap(), BigUint::from(6u32));
        }
        assert_eq!(treelike_total(&k3, 4).unwrap(), BigUint::from(18u32));
        // the universal cover would give 20 per vertex here; the path tree gives 18
        assert_eq!(treelike_total(&k3, 6).unwrap(), BigUint::from(54u32));
        assert!(treelike_total(&k3, 18).is_err());
    }

    #[test]
    fn regular_graph_closed_forms() {
        for d in 3..=6u64 {
            let qd = AdmissiblePair::new(make_hypercube(d as usize).unwrap(), d).unwrap();
            let dd = d as i64;
            assert_eq!(rho_moment_via_walks(&qd, 2).unwrap(), ratio(1, 1));
            assert_eq!(rho_moment_via_walks(&qd, 4).unwrap(), ratio(2 * dd - 1, dd));
            assert_eq!(
                rho_moment_via_walks(&qd, 6).unwrap(),
                ratio(5 * dd * dd - 6 * dd + 2, dd * dd)
            );
        }
        let q3 = AdmissiblePair::new(make_hypercube(3).unwrap(), 3).unwrap();
        let rho = matching_measure(&q3).unwrap();
        assert!((rho.moment(4) - (2.0 - 1.0 / 3.0)).abs() < 1e-10);
    }

    #[test]
    fn dual_route_power_sums() {
        let mut rng = RandomSource::new(21);
        for _ in 0..25 {
            let g = random_graph(4 + rng.index(8), 0.45, &mut rng);
            let mu = matching_profile(&g).unwrap().matching_polynomial();
            let sums = mu.power_sums(10);
            for k in 1..=5 {
                let walks = treelike_total(&g, 2 * k).unwrap();
                assert_eq!(BigInt::from(walks), sums[2 * k - 1]);
                assert_eq!(sums[2 * k - 2], BigInt::from(0));
            }
        }
    }

    #[test]
    fn catalan_trend_on_hypercubes() {
        let mut last = [f64::INFINITY; 3];
        for d in 6..=12u64 {
            let qd = AdmissiblePair::new(make_hypercube(d as usize).unwrap(), d).unwrap();
            for k in 1..=3usize {
                let m = rho_moment_via_walks(&qd, 2 * k).unwrap();
                let gap = (m - BigRational::from_integer(BigInt::from(catalan(k as u32)))).abs();
                let gap = gap.to_f64().unwrap();
                assert!(gap <= last[k - 1]);
                assert!(gap <= 3.0 * (k * k) as f64 / d as f64);
                last[k - 1] = gap;
            }
        }
    }
}
